#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_n) that houses every value
// cos(pi/m) for the finite labels m of a Coxeter matrix.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace coxgates {

/// Label value standing for m = infinity (also the I/O encoding).
inline constexpr int kInfinity = 0;

class FieldContext {
 public:
  /// Builds the field for the given finite labels (each >= 2).  The conductor
  /// is 2*lcm(labels), or 1 when there are none.
  static std::shared_ptr<const FieldContext> make(std::span<const int> labels);

  int conductor() const noexcept { return conductor_; }
  /// phi(conductor).
  int degree() const noexcept { return degree_; }
  /// True when every label cosine is rational; scalars are then stored as a
  /// single rational coefficient.
  bool rational() const noexcept { return rational_; }
  /// Length of the stored coefficient vector.
  int dim() const noexcept { return rational_ ? 1 : degree_; }

  /// Whether cos(pi/m) lies in the stored field.
  bool represents_cos(int m) const noexcept;

  /// Integer coefficients of the conductor-th cyclotomic polynomial, low degree
  /// first (monic, length degree()+1).
  const std::vector<mpz_class>& cyclotomic_polynomial() const noexcept { return modulus_; }

  bool same_field(const FieldContext& other) const noexcept {
    return conductor_ == other.conductor_ && rational_ == other.rational_;
  }

 private:
  FieldContext() = default;
  friend class Scalar;

  int conductor_ = 1;
  int degree_ = 1;
  bool rational_ = true;
  std::vector<mpz_class> modulus_;
  // zeta^j reduced modulo the cyclotomic polynomial, for 0 <= j < conductor.
  std::vector<std::vector<mpz_class>> powers_;
  // cos(2 pi j / conductor), used by the fast sign path.
  std::vector<double> cos_table_;
};

using FieldPtr = std::shared_ptr<const FieldContext>;

/// Element of Q(zeta_n) in canonical reduced form.  Equality is equality of
/// the coefficient vectors.
class Scalar {
 public:
  Scalar() = default;
  Scalar(FieldPtr ctx, long value);
  Scalar(FieldPtr ctx, const mpq_class& value);

  static Scalar zero(const FieldPtr& ctx) { return Scalar(ctx, 0L); }
  static Scalar one(const FieldPtr& ctx) { return Scalar(ctx, 1L); }
  /// Sum of coeffs[j] * zeta^j, reduced.  In rational mode only j = 0 is allowed.
  static Scalar from_coefficients(const FieldPtr& ctx, const std::vector<mpq_class>& coeffs);
  /// zeta_n^k; throws ContextMismatch in rational mode unless zeta^k is +-1.
  static Scalar zeta_power(const FieldPtr& ctx, long k);

  const FieldPtr& context() const noexcept { return ctx_; }
  const std::vector<mpq_class>& coefficients() const noexcept { return c_; }

  bool is_zero() const;
  /// Fixed by complex conjugation, i.e. lies in the maximal real subfield.
  bool is_real() const;
  /// Exact trichotomy of the real embedding zeta -> exp(2 pi i / n).
  /// Throws std::domain_error for non-real values.
  int sign() const;
  double approx() const;

  Scalar conj() const;
  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Canonical byte encoding; equal scalars give equal strings.
  void encode(std::string& out) const;
  std::string to_string() const;

 private:
  void require_same(const Scalar& o) const;

  FieldPtr ctx_;
  std::vector<mpq_class> c_;
};

/// cos(pi/m); m == kInfinity yields 1 so that the Gram entry -cos is -1.
Scalar cos_pi_over(const FieldPtr& ctx, int m);

}  // namespace coxgates
