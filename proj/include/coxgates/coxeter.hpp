#pragma once

// Coxeter systems in the geometric representation and their elements.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "coxgates/scalar.hpp"

namespace coxgates {

/// Subset of the generating set, bit s set iff generator s is present.
using SubsetMask = std::uint64_t;
/// Word over the generators, letters are 0-based generator indices.
using Word = std::vector<int>;

inline constexpr int kMaxRank = 64;

inline bool contains(SubsetMask mask, int s) { return (mask >> s) & 1U; }

/// Symmetric matrix of orders m[s][t]; kInfinity (0) encodes m = infinity.
class CoxeterMatrix {
 public:
  CoxeterMatrix() = default;
  /// Throws ValidationError unless square, symmetric, unit diagonal and
  /// off-diagonal entries >= 2 or kInfinity.
  explicit CoxeterMatrix(std::vector<std::vector<int>> entries);

  int rank() const noexcept { return static_cast<int>(m_.size()); }
  int operator()(int s, int t) const { return m_[s][t]; }
  const std::vector<std::vector<int>>& entries() const noexcept { return m_; }
  /// Off-diagonal finite labels, one per unordered pair.
  std::vector<int> finite_labels() const;

  friend bool operator==(const CoxeterMatrix&, const CoxeterMatrix&) = default;

 private:
  std::vector<std::vector<int>> m_;
};

class Element;

class CoxeterSystem : public std::enable_shared_from_this<CoxeterSystem> {
 public:
  static std::shared_ptr<const CoxeterSystem> create(CoxeterMatrix matrix);

  int rank() const noexcept { return matrix_.rank(); }
  const CoxeterMatrix& matrix() const noexcept { return matrix_; }
  const FieldPtr& field() const noexcept { return field_; }
  /// <alpha_s, alpha_t> = -cos(pi / m_st).
  const Scalar& gram(int s, int t) const { return gram_[s * rank() + t]; }
  /// -2 <alpha_s, alpha_t>, the off-diagonal entries of the generator matrices.
  const Scalar& reflection_coefficient(int s, int t) const { return refl_[s * rank() + t]; }
  SubsetMask all_generators() const noexcept;

  Element identity() const;
  Element generator(int s) const;
  Element from_word(std::span<const int> word) const;

  /// Positive definiteness of the Gram submatrix on J (Sylvester minors).
  bool is_spherical(SubsetMask J) const;
  /// Longest element of the finite parabolic subgroup W_J.
  Element longest_element(SubsetMask J) const;
  /// Inclusion-maximal spherical subsets, in increasing mask order.
  std::vector<SubsetMask> maximal_spherical_subsets() const;

  std::string generator_name(int s) const { return "s" + std::to_string(s + 1); }
  std::string word_string(std::span<const int> word) const;

 private:
  CoxeterSystem() = default;
  void check_generator(int s) const;

  CoxeterMatrix matrix_;
  FieldPtr field_;
  std::vector<Scalar> gram_;
  std::vector<Scalar> refl_;
  mutable std::mutex spherical_mutex_;
  mutable std::map<SubsetMask, bool> spherical_cache_;
};

using SystemPtr = std::shared_ptr<const CoxeterSystem>;

inline SystemPtr new_system(CoxeterMatrix matrix) { return CoxeterSystem::create(std::move(matrix)); }

/// Group element stored as the matrix of its action on simple-root
/// coordinates together with the matrix of its inverse.  Copies share state.
class Element {
 public:
  Element() = default;

  /// Wraps a matrix pair; fwd must be the action of a group element and inv its inverse.
  static Element from_matrices(SystemPtr system, std::vector<Scalar> fwd, std::vector<Scalar> inv) {
    return Element(std::move(system), std::move(fwd), std::move(inv));
  }

  const CoxeterSystem& system() const { return *impl_->system; }
  const SystemPtr& system_ptr() const { return impl_->system; }
  int rank() const { return impl_->system->rank(); }

  /// Row-major rank x rank matrix of w; column s holds the coordinates of w alpha_s.
  const std::vector<Scalar>& matrix() const { return impl_->fwd; }
  const std::vector<Scalar>& inverse_matrix() const { return impl_->inv; }

  int length() const;
  /// ShortLex word: repeatedly strip the smallest-index left descent.
  Word reduced_word() const;
  SubsetMask left_descents() const;
  SubsetMask right_descents() const;
  bool has_left_descent(int s) const;
  bool has_right_descent(int s) const;
  bool is_identity() const;

  Element inverse() const;
  Element left_multiply(int s) const;
  Element right_multiply(int s) const;

  /// Canonical encoding of the forward matrix, the identity key for element
  /// sets and maps.
  const std::string& key() const;
  std::size_t hash() const { return std::hash<std::string>{}(key()); }

  friend Element operator*(const Element& a, const Element& b);
  friend bool operator==(const Element& a, const Element& b);

 private:
  friend class CoxeterSystem;
  struct Impl {
    SystemPtr system;
    std::vector<Scalar> fwd;
    std::vector<Scalar> inv;
    mutable std::once_flag length_once;
    mutable int length = -1;
    mutable std::once_flag key_once;
    mutable std::string key;
  };
  Element(SystemPtr system, std::vector<Scalar> fwd, std::vector<Scalar> inv);
  // sign of the root stored in column c of the given matrix: -1, +1
  static int column_sign(const std::vector<Scalar>& m, int rank, int c);

  std::shared_ptr<const Impl> impl_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

inline Element multiply(const Element& a, const Element& b) { return a * b; }

/// v is a prefix of w: l(w) = l(v) + l(v^-1 w).
bool is_prefix(const Element& v, const Element& w);
/// u is a suffix of w: l(w) = l(u) + l(w u^-1).
bool is_suffix(const Element& u, const Element& w);

/// Determinant over the field by Gaussian elimination (row-major square matrix).
Scalar determinant(std::vector<Scalar> m, int n);

}  // namespace coxgates
