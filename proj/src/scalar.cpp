#include "coxgates/scalar.hpp"

#include <mpfr.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "coxgates/errors.hpp"

namespace coxgates {

namespace {

using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of integer polynomials (divisor monic).
IntPoly divide_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  IntPoly quot(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const mpz_class c = num[k];
    if (c == 0) continue;
    quot[k - dn] = c;
    for (std::size_t i = 0; i <= dn; ++i) num[k - dn + i] -= c * den[i];
  }
  trim(num);
  if (!num.empty()) throw InternalError("cyclotomic polynomial division left a remainder");
  return quot;
}

IntPoly cyclotomic(int n) {
  // x^n - 1 = prod_{d | n} Phi_d(x)
  IntPoly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = divide_exact(p, cyclotomic(d));
  }
  return p;
}

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// Polynomial remainder over Q by a nonzero divisor.
RatPoly poly_mod(RatPoly a, const RatPoly& b, RatPoly* quotient = nullptr) {
  trim(a);
  const std::size_t db = b.size() - 1;
  if (quotient) quotient->assign(a.size() >= b.size() ? a.size() - db : 1, 0);
  while (a.size() >= b.size()) {
    const mpq_class c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    if (quotient) (*quotient)[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

RatPoly poly_sub_mul(const RatPoly& a, const RatPoly& q, const RatPoly& b) {
  RatPoly out(std::max(a.size(), q.size() + b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
  trim(out);
  return out;
}

}  // namespace

std::shared_ptr<const FieldContext> FieldContext::make(std::span<const int> labels) {
  long lcm = 1;
  bool rational = true;
  for (int m : labels) {
    if (m < 2) throw ValidationError("field labels must be >= 2, got " + std::to_string(m));
    lcm = std::lcm(lcm, static_cast<long>(m));
    if (m != 2 && m != 3) rational = false;
    if (lcm > 100000) throw ResourceError("label lcm too large for cyclotomic arithmetic");
  }
  auto ctx = std::shared_ptr<FieldContext>(new FieldContext());
  ctx->conductor_ = labels.empty() ? 1 : static_cast<int>(2 * lcm);
  ctx->degree_ = euler_phi(ctx->conductor_);
  ctx->rational_ = rational;
  const int n = ctx->conductor_;
  if (!rational) {
    ctx->modulus_ = cyclotomic(n);
    const int phi = ctx->degree_;
    IntPoly cur(phi, 0);
    cur[0] = 1;
    for (int j = 0; j < n; ++j) {
      ctx->powers_.push_back(cur);
      // multiply by x and reduce
      mpz_class top = cur[phi - 1];
      for (int i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0)
        for (int i = 0; i < phi; ++i) cur[i] -= top * ctx->modulus_[i];
    }
    for (int j = 0; j < n; ++j)
      ctx->cos_table_.push_back(std::cos(2.0 * std::numbers::pi * j / n));
  } else {
    ctx->modulus_ = {-1, 1};
  }
  return ctx;
}

bool FieldContext::represents_cos(int m) const noexcept {
  if (m == kInfinity || m == 1) return true;
  if (m < 1) return false;
  if (rational_) return m == 2 || m == 3;
  return conductor_ % (2 * m) == 0;
}

Scalar::Scalar(FieldPtr ctx, long value) : ctx_(std::move(ctx)), c_(ctx_->dim(), 0) {
  c_[0] = value;
}

Scalar::Scalar(FieldPtr ctx, const mpq_class& value) : ctx_(std::move(ctx)), c_(ctx_->dim(), 0) {
  c_[0] = value;
  c_[0].canonicalize();
}

Scalar Scalar::from_coefficients(const FieldPtr& ctx, const std::vector<mpq_class>& coeffs) {
  Scalar out = zero(ctx);
  const int n = ctx->conductor();
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    mpq_class q = coeffs[j];
    q.canonicalize();
    if (q == 0) continue;
    if (ctx->rational()) {
      if (j != 0) throw ContextMismatch("rational-mode field has no zeta powers");
      out.c_[0] += q;
      continue;
    }
    const auto& pw = ctx->powers_[j % n];
    for (int i = 0; i < ctx->dim(); ++i)
      if (pw[i] != 0) out.c_[i] += q * pw[i];
  }
  return out;
}

Scalar Scalar::zeta_power(const FieldPtr& ctx, long k) {
  const long n = ctx->conductor();
  k = ((k % n) + n) % n;
  if (ctx->rational()) {
    if (k == 0) return one(ctx);
    if (2 * k == n) return Scalar(ctx, -1L);
    throw ContextMismatch("zeta power not rational in rational-mode field");
  }
  Scalar out = zero(ctx);
  for (int i = 0; i < ctx->dim(); ++i) out.c_[i] = ctx->powers_[k][i];
  return out;
}

void Scalar::require_same(const Scalar& o) const {
  if (!ctx_ || !o.ctx_) throw ContextMismatch("uninitialised scalar");
  if (ctx_ != o.ctx_ && !ctx_->same_field(*o.ctx_))
    throw ContextMismatch("scalars from different fields");
}

bool Scalar::is_zero() const {
  for (const auto& q : c_)
    if (q != 0) return false;
  return true;
}

Scalar Scalar::conj() const {
  if (ctx_->rational()) return *this;
  const int n = ctx_->conductor();
  const int dim = ctx_->dim();
  mpz_class den = 1;
  for (const auto& x : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> acc(dim, 0);
  mpz_class num;
  for (int j = 0; j < dim; ++j) {
    if (c_[j] == 0) continue;
    num = c_[j].get_num() * (den / c_[j].get_den());
    const auto& pw = ctx_->powers_[(n - j) % n];
    for (int i = 0; i < dim; ++i)
      if (pw[i] != 0) mpz_addmul(acc[i].get_mpz_t(), num.get_mpz_t(), pw[i].get_mpz_t());
  }
  Scalar out = zero(ctx_);
  for (int i = 0; i < dim; ++i) {
    out.c_[i] = mpq_class(acc[i], den);
    out.c_[i].canonicalize();
  }
  return out;
}

bool Scalar::is_real() const { return ctx_->rational() || conj() == *this; }

double Scalar::approx() const {
  if (ctx_->rational()) return c_[0].get_d();
  double v = 0.0;
  for (int j = 0; j < ctx_->dim(); ++j) v += c_[j].get_d() * ctx_->cos_table_[j];
  return v;
}

int Scalar::sign() const {
  if (ctx_->rational()) return sgn(c_[0]);
  if (is_zero()) return 0;
  if (!is_real()) throw std::domain_error("sign of a non-real cyclotomic number");

  const int dim = ctx_->dim();
  const int n = ctx_->conductor();
  {
    double v = 0.0, mag = 0.0;
    bool finite = true;
    for (int j = 0; j < dim; ++j) {
      const double t = c_[j].get_d() * ctx_->cos_table_[j];
      if (!std::isfinite(t)) finite = false;
      v += t;
      mag += std::fabs(t);
    }
    const double err = mag * 1e-12 + 1e-300;
    if (finite && std::fabs(v) > err) return v > 0 ? 1 : -1;
  }

  // The value is nonzero, so refinement terminates.
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    mpfr_t acc, mag, term, cosv, q;
    mpfr_inits2(prec, acc, mag, term, cosv, q, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc, 1);
    mpfr_set_zero(mag, 1);
    for (int j = 0; j < dim; ++j) {
      if (c_[j] == 0) continue;
      mpfr_const_pi(cosv, MPFR_RNDN);
      mpfr_mul_ui(cosv, cosv, 2UL * static_cast<unsigned long>(j), MPFR_RNDN);
      mpfr_div_ui(cosv, cosv, static_cast<unsigned long>(n), MPFR_RNDN);
      mpfr_cos(cosv, cosv, MPFR_RNDN);
      mpfr_set_q(q, c_[j].get_mpq_t(), MPFR_RNDN);
      mpfr_mul(term, q, cosv, MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
      mpfr_abs(term, term, MPFR_RNDN);
      mpfr_add(mag, mag, term, MPFR_RNDU);
    }
    // rounding error is bounded by a small multiple of mag * 2^-prec
    mpfr_mul_2si(mag, mag, -static_cast<long>(prec) + 16, MPFR_RNDU);
    mpfr_abs(term, acc, MPFR_RNDN);
    const bool decided = mpfr_cmp(term, mag) > 0;
    const int s = mpfr_sgn(acc);
    mpfr_clears(acc, mag, term, cosv, q, static_cast<mpfr_ptr>(nullptr));
    if (decided) return s > 0 ? 1 : -1;
    if (prec > (1 << 20)) throw InternalError("sign refinement did not converge");
  }
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (ctx_->rational()) return Scalar(ctx_, mpq_class(1) / c_[0]);
  RatPoly r0(ctx_->modulus_.begin(), ctx_->modulus_.end());
  RatPoly r1(c_.begin(), c_.end());
  trim(r1);
  RatPoly s0{0}, s1{1};
  while (!r1.empty()) {
    RatPoly q;
    RatPoly r = poly_mod(r0, r1, &q);
    RatPoly s = poly_sub_mul(s0, q, s1);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant because the modulus is irreducible
  if (r0.size() != 1) throw InternalError("cyclotomic gcd is not a unit");
  RatPoly mod(ctx_->modulus_.begin(), ctx_->modulus_.end());
  RatPoly inv = poly_mod(s0, mod);
  Scalar out = zero(ctx_);
  for (std::size_t i = 0; i < inv.size(); ++i) out.c_[i] = inv[i] / r0[0];
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& q : out.c_) q = -q;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  require_same(o);
  if (ctx_->rational()) {
    c_[0] *= o.c_[0];
    return *this;
  }
  const int phi = ctx_->dim();
  auto constant = [phi](const std::vector<mpq_class>& c) {
    for (int i = 1; i < phi; ++i)
      if (c[i] != 0) return false;
    return true;
  };
  if (constant(o.c_)) {
    const mpq_class k = o.c_[0];
    for (auto& x : c_) x *= k;
    return *this;
  }
  if (constant(c_)) {
    const mpq_class k = c_[0];
    c_ = o.c_;
    for (auto& x : c_) x *= k;
    return *this;
  }
  // Clear denominators and multiply over the integers; the modulus is monic,
  // so the reduction stays integral.
  auto numerators = [phi](const std::vector<mpq_class>& c, mpz_class& den) {
    den = 1;
    for (const auto& x : c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> num(phi);
    for (int i = 0; i < phi; ++i) num[i] = c[i].get_num() * (den / c[i].get_den());
    return num;
  };
  mpz_class da, db;
  const std::vector<mpz_class> a = numerators(c_, da);
  const std::vector<mpz_class> b = numerators(o.c_, db);
  std::vector<mpz_class> prod(2 * phi - 1, 0);
  for (int i = 0; i < phi; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < phi; ++j)
      if (b[j] != 0) mpz_addmul(prod[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  const auto& mod = ctx_->modulus_;
  for (int k = 2 * phi - 2; k >= phi; --k) {
    if (prod[k] == 0) continue;
    const mpz_class top = prod[k];
    for (int i = 0; i <= phi; ++i)
      if (mod[i] != 0) mpz_submul(prod[k - phi + i].get_mpz_t(), top.get_mpz_t(), mod[i].get_mpz_t());
  }
  const mpz_class den = da * db;
  for (int i = 0; i < phi; ++i) {
    c_[i] = mpq_class(prod[i], den);
    c_[i].canonicalize();
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  a.require_same(b);
  return a.c_ == b.c_;
}

void Scalar::encode(std::string& out) const {
  for (const auto& q : c_) {
    out += q.get_str();
    out.push_back(';');
  }
}

std::string Scalar::to_string() const {
  if (ctx_->rational()) return c_[0].get_str();
  std::string out;
  for (int j = 0; j < ctx_->dim(); ++j) {
    if (c_[j] == 0) continue;
    if (!out.empty()) out += c_[j] > 0 ? " + " : " - ";
    else if (c_[j] < 0) out += "-";
    const mpq_class mag = abs(c_[j]);
    if (j == 0) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += j == 1 ? std::string("z") : "z^" + std::to_string(j);
    }
  }
  return out.empty() ? "0" : out;
}

Scalar cos_pi_over(const FieldPtr& ctx, int m) {
  if (m == kInfinity) return Scalar::one(ctx);
  if (!ctx->represents_cos(m))
    throw ContextMismatch("cos(pi/" + std::to_string(m) + ") is not in the field of conductor " +
                          std::to_string(ctx->conductor()));
  if (m == 1) return Scalar(ctx, -1L);
  if (ctx->rational()) return m == 2 ? Scalar::zero(ctx) : Scalar(ctx, mpq_class(1, 2));
  const long k = ctx->conductor() / (2 * m);
  Scalar v = Scalar::zeta_power(ctx, k) + Scalar::zeta_power(ctx, -k);
  return v * Scalar(ctx, mpq_class(1, 2));
}

}  // namespace coxgates
