#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "coxgates/errors.hpp"
#include "coxgates/scalar.hpp"

using namespace coxgates;

namespace {

FieldPtr field(std::vector<int> labels) { return FieldContext::make(labels); }

// Real embedding of sum c_j zeta^j in long double, independent of the field's
// own approximation code.
long double embed(const Scalar& a) {
  const int n = a.context()->conductor();
  const auto& c = a.coefficients();
  long double re = 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    re += c[j].get_d() * std::cos(2 * std::numbers::pi_v<long double> * static_cast<long double>(j) / n);
  return re;
}

Scalar random_scalar(std::mt19937_64& rng, const FieldPtr& ctx) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  std::vector<mpq_class> c(ctx->dim());
  for (auto& x : c) {
    x = mpq_class(num(rng), den(rng));
    x.canonicalize();
  }
  return Scalar::from_coefficients(ctx, c);
}

// a + conj(a) is real; occasionally force an exact cancellation
Scalar random_real(std::mt19937_64& rng, const FieldPtr& ctx) {
  const Scalar a = random_scalar(rng, ctx);
  const Scalar b = random_scalar(rng, ctx);
  Scalar r = a + a.conj();
  if (rng() % 5 == 0) r = (a + b) * (a.conj() + b.conj()) - a * a.conj() - b * b.conj() - a * b.conj() - b * a.conj();
  return r;
}

}  // namespace

TEST_CASE("context conductor and degree") {
  CHECK(field({3})->conductor() == 6);
  CHECK(field({})->conductor() == 1);
  const FieldPtr f = field({3, 4});
  CHECK(f->conductor() == 24);
  CHECK(f->degree() == 8);
  CHECK(f->represents_cos(4));
  const Scalar c = cos_pi_over(f, 4);
  CHECK(c * c == Scalar(f, mpq_class(1, 2)));
  CHECK(field({5})->conductor() == 10);
  CHECK(field({5})->degree() == 4);
  CHECK_THROWS_AS(field({1}), ValidationError);
}

TEST_CASE("cos(pi/m) values") {
  const FieldPtr f = field({2, 3, 4});
  CHECK(cos_pi_over(f, 2).is_zero());
  CHECK(cos_pi_over(f, 3) == Scalar(f, mpq_class(1, 2)));
  const Scalar x = cos_pi_over(f, 4);
  CHECK(x * x == Scalar(f, mpq_class(1, 2)));
  CHECK(x.sign() == 1);
  CHECK(cos_pi_over(f, kInfinity) == Scalar::one(f));
  CHECK_THROWS_AS(cos_pi_over(f, 5), ContextMismatch);
  CHECK_THROWS_AS(cos_pi_over(field({3}), 4), ContextMismatch);
}

TEST_CASE("rational fields use one coefficient") {
  CHECK(field({})->rational());
  CHECK(field({2, 3})->rational());
  CHECK(field({3})->dim() == 1);
  CHECK_FALSE(field({4})->rational());
  const FieldPtr f = field({3});
  CHECK(cos_pi_over(f, 3) * Scalar(f, 2L) == Scalar::one(f));
}

TEST_CASE("field operation examples") {
  const FieldPtr f = field({5});
  const Scalar a = cos_pi_over(f, 5);
  CHECK(a + Scalar::zero(f) == a);
  const FieldPtr g = field({3});
  CHECK(cos_pi_over(g, 3) * Scalar(g, 2L) == Scalar::one(g));
  const Scalar t = a * Scalar(f, 2L);
  CHECK(t * t == t + Scalar::one(f));
  CHECK(std::abs(t.approx() - (1 + std::sqrt(5.0)) / 2) < 1e-12);
  CHECK_THROWS_AS(a + cos_pi_over(g, 3), ContextMismatch);
}

TEST_CASE("sign examples") {
  const FieldPtr f = field({3, 4});
  CHECK(Scalar::zero(f).sign() == 0);
  CHECK((cos_pi_over(f, 3) - Scalar(f, mpq_class(1, 2))).sign() == 0);
  CHECK((cos_pi_over(f, 4) - cos_pi_over(f, 3)).sign() == 1);
  CHECK((cos_pi_over(f, 3) - cos_pi_over(f, 4)).sign() == -1);
  CHECK_THROWS_AS(Scalar::zeta_power(f, 1).sign(), std::domain_error);
}

TEST_CASE("sign of nearly cancelling values") {
  // 2cos(pi/5) - 1.618034 is about 1e-7
  const FieldPtr f = field({5});
  const Scalar phi = cos_pi_over(f, 5) * Scalar(f, 2L);
  CHECK((phi - Scalar(f, mpq_class(1618034, 1000000))).sign() == -1);
  CHECK((phi - Scalar(f, mpq_class(1618033, 1000000))).sign() == 1);
  // phi^40 = L_40 - phi^-40 with the Lucas number L_40 = 228826127
  Scalar p = Scalar::one(f);
  for (int i = 0; i < 40; ++i) p *= phi;
  CHECK((p - Scalar(f, 228826127L)).sign() == -1);
  CHECK((p - Scalar(f, 228826126L)).sign() == 1);
}

TEST_CASE("Chebyshev relation T_m(cos(pi/m)) = -1") {
  for (int m : {2, 3, 4, 5, 6, 7, 8, 9, 10, 12}) {
    const FieldPtr f = field({m});
    const Scalar c = cos_pi_over(f, m);
    Scalar t0 = Scalar::one(f), t1 = c;
    for (int k = 1; k < m; ++k) {
      Scalar t2 = Scalar(f, 2L) * c * t1 - t0;
      t0 = t1;
      t1 = t2;
    }
    CAPTURE(m);
    CHECK(t1 == Scalar(f, -1L));
    CHECK(std::abs(c.approx() - std::cos(std::numbers::pi / m)) < 1e-12);
  }
}

TEST_CASE("property: sign agrees with the zero test and the real embedding") {
  std::mt19937_64 rng(11);
  int zeros = 0;
  const std::vector<FieldPtr> fields{field({5}), field({3, 4}), field({4, 5, 6}), field({7})};
  for (int i = 0; i < 10000; ++i) {
    const FieldPtr& f = fields[i % fields.size()];
    const Scalar a = random_real(rng, f);
    const int s = a.sign();
    REQUIRE((s == 0) == a.is_zero());
    if (s == 0) {
      ++zeros;
      continue;
    }
    const long double v = embed(a);
    if (std::fabs(v) > 1e-9) REQUIRE(s == (v > 0 ? 1 : -1));
  }
  CHECK(zeros > 100);
}

TEST_CASE("property: field axioms on random triples") {
  std::mt19937_64 rng(12);
  for (const FieldPtr& f : {field({5}), field({3, 4}), field({7}), field({3})}) {
    for (int i = 0; i < 300; ++i) {
      const Scalar a = random_scalar(rng, f), b = random_scalar(rng, f), c = random_scalar(rng, f);
      REQUIRE((a + b) + c == a + (b + c));
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a * b == b * a);
      REQUIRE(a + (-a) == Scalar::zero(f));
      REQUIRE(a - b == a + (-b));
      if (!a.is_zero()) REQUIRE(a * a.inverse() == Scalar::one(f));
      REQUIRE((a * b).conj() == a.conj() * b.conj());
    }
  }
}

TEST_CASE("canonical encoding separates values") {
  const FieldPtr f = field({5});
  const Scalar a = cos_pi_over(f, 5);
  const Scalar b = a * a - a + Scalar(f, mpq_class(1, 4)) + a - a * a;
  std::string ea, eb, ec;
  Scalar(f, mpq_class(1, 4)).encode(ea);
  b.encode(eb);
  a.encode(ec);
  CHECK(ea == eb);
  CHECK(ea != ec);
}
