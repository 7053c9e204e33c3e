#include "coxgates/coxeter.hpp"

#include <bit>

#include "coxgates/errors.hpp"

namespace coxgates {

CoxeterMatrix::CoxeterMatrix(std::vector<std::vector<int>> entries) : m_(std::move(entries)) {
  const std::size_t n = m_.size();
  if (n == 0) throw ValidationError("Coxeter matrix must have rank >= 1");
  if (n > static_cast<std::size_t>(kMaxRank))
    throw ValidationError("rank " + std::to_string(n) + " exceeds the supported maximum of 64");
  for (std::size_t s = 0; s < n; ++s) {
    if (m_[s].size() != n) throw ValidationError("Coxeter matrix row " + std::to_string(s) + " has wrong length");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (m_[s][s] != 1)
      throw ValidationError("diagonal entry m[" + std::to_string(s) + "][" + std::to_string(s) + "] must be 1");
    for (std::size_t t = 0; t < n; ++t) {
      if (m_[s][t] != m_[t][s])
        throw ValidationError("Coxeter matrix is not symmetric at (" + std::to_string(s) + "," +
                              std::to_string(t) + ")");
      if (s != t && m_[s][t] != kInfinity && m_[s][t] < 2)
        throw ValidationError("off-diagonal entry m[" + std::to_string(s) + "][" + std::to_string(t) +
                              "] must be >= 2 or 0 (infinity)");
    }
  }
}

std::vector<int> CoxeterMatrix::finite_labels() const {
  std::vector<int> out;
  for (int s = 0; s < rank(); ++s)
    for (int t = s + 1; t < rank(); ++t)
      if (m_[s][t] != kInfinity) out.push_back(m_[s][t]);
  return out;
}

std::shared_ptr<const CoxeterSystem> CoxeterSystem::create(CoxeterMatrix matrix) {
  auto sys = std::shared_ptr<CoxeterSystem>(new CoxeterSystem());
  sys->matrix_ = std::move(matrix);
  const auto labels = sys->matrix_.finite_labels();
  sys->field_ = FieldContext::make(labels);
  const int n = sys->rank();
  sys->gram_.reserve(n * n);
  sys->refl_.reserve(n * n);
  const Scalar minus_two(sys->field_, -2L);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      Scalar g = s == t ? Scalar::one(sys->field_) : -cos_pi_over(sys->field_, sys->matrix_(s, t));
      sys->refl_.push_back(minus_two * g);
      sys->gram_.push_back(std::move(g));
    }
  }
  return sys;
}

SubsetMask CoxeterSystem::all_generators() const noexcept {
  return rank() == 64 ? ~SubsetMask{0} : (SubsetMask{1} << rank()) - 1;
}

void CoxeterSystem::check_generator(int s) const {
  if (s < 0 || s >= rank()) throw ValidationError("generator index " + std::to_string(s) + " out of range");
}

std::string CoxeterSystem::word_string(std::span<const int> word) const {
  if (word.empty()) return "e";
  std::string out;
  for (int s : word) out += generator_name(s);
  return out;
}

Element::Element(SystemPtr system, std::vector<Scalar> fwd, std::vector<Scalar> inv) {
  auto impl = std::make_shared<Impl>();
  impl->system = std::move(system);
  impl->fwd = std::move(fwd);
  impl->inv = std::move(inv);
  impl_ = std::move(impl);
}

Element CoxeterSystem::identity() const {
  const int n = rank();
  std::vector<Scalar> m(n * n, Scalar::zero(field_));
  for (int i = 0; i < n; ++i) m[i * n + i] = Scalar::one(field_);
  return Element(shared_from_this(), m, m);
}

Element CoxeterSystem::generator(int s) const {
  check_generator(s);
  const int n = rank();
  std::vector<Scalar> m(n * n, Scalar::zero(field_));
  for (int i = 0; i < n; ++i) m[i * n + i] = Scalar::one(field_);
  for (int c = 0; c < n; ++c) m[s * n + c] = c == s ? Scalar(field_, -1L) : refl_[s * n + c];
  return Element(shared_from_this(), m, m);
}

Element CoxeterSystem::from_word(std::span<const int> word) const {
  Element w = identity();
  for (int s : word) w = w.right_multiply(s);
  return w;
}

Scalar determinant(std::vector<Scalar> m, int n) {
  if (n == 0) throw ValidationError("determinant of an empty matrix");
  Scalar det = Scalar::one(m[0].context());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!m[r * n + col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Scalar::zero(m[0].context());
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    const Scalar inv = m[col * n + col].inverse();
    for (int r = col + 1; r < n; ++r) {
      if (m[r * n + col].is_zero()) continue;
      const Scalar f = m[r * n + col] * inv;
      for (int c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

bool CoxeterSystem::is_spherical(SubsetMask J) const {
  if ((J & ~all_generators()) != 0) throw ValidationError("subset contains unknown generators");
  {
    std::lock_guard lock(spherical_mutex_);
    if (auto it = spherical_cache_.find(J); it != spherical_cache_.end()) return it->second;
  }
  std::vector<int> idx;
  for (int s = 0; s < rank(); ++s)
    if (contains(J, s)) idx.push_back(s);
  bool result = true;
  for (int a : idx)
    for (int b : idx)
      if (a != b && matrix_(a, b) == kInfinity) result = false;
  // leading principal minors of the Gram submatrix
  for (std::size_t k = 1; result && k <= idx.size(); ++k) {
    std::vector<Scalar> sub;
    sub.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub.push_back(gram(idx[i], idx[j]));
    if (determinant(std::move(sub), static_cast<int>(k)).sign() <= 0) result = false;
  }
  std::lock_guard lock(spherical_mutex_);
  spherical_cache_.emplace(J, result);
  return result;
}

Element CoxeterSystem::longest_element(SubsetMask J) const {
  if (!is_spherical(J)) throw ValidationError("longest_element requires a spherical subset");
  Element w = identity();
  for (bool grew = true; grew;) {
    grew = false;
    for (int j = 0; j < rank(); ++j) {
      if (contains(J, j) && !w.has_right_descent(j)) {
        w = w.right_multiply(j);
        grew = true;
        break;
      }
    }
  }
  return w;
}

std::vector<SubsetMask> CoxeterSystem::maximal_spherical_subsets() const {
  // spherical subsets are closed under taking subsets, so grow them by DFS
  std::vector<SubsetMask> spherical;
  std::vector<SubsetMask> stack{0};
  std::map<SubsetMask, bool> seen;
  while (!stack.empty()) {
    const SubsetMask J = stack.back();
    stack.pop_back();
    spherical.push_back(J);
    const int top = J == 0 ? -1 : 63 - std::countl_zero(J);
    for (int s = top + 1; s < rank(); ++s) {
      const SubsetMask K = J | (SubsetMask{1} << s);
      if (is_spherical(K)) stack.push_back(K);
    }
  }
  std::vector<SubsetMask> maximal;
  for (SubsetMask J : spherical) {
    bool is_max = true;
    for (int s = 0; s < rank() && is_max; ++s)
      if (!contains(J, s) && is_spherical(J | (SubsetMask{1} << s))) is_max = false;
    if (is_max) maximal.push_back(J);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

int Element::column_sign(const std::vector<Scalar>& m, int n, int c) {
  for (int r = 0; r < n; ++r) {
    const int sg = m[r * n + c].sign();
    if (sg != 0) return sg;
  }
  throw InternalError("zero column in an element matrix");
}

bool Element::has_left_descent(int s) const { return column_sign(impl_->inv, rank(), s) < 0; }
bool Element::has_right_descent(int s) const { return column_sign(impl_->fwd, rank(), s) < 0; }

SubsetMask Element::left_descents() const {
  SubsetMask out = 0;
  for (int s = 0; s < rank(); ++s)
    if (has_left_descent(s)) out |= SubsetMask{1} << s;
  return out;
}

SubsetMask Element::right_descents() const {
  SubsetMask out = 0;
  for (int s = 0; s < rank(); ++s)
    if (has_right_descent(s)) out |= SubsetMask{1} << s;
  return out;
}

bool Element::is_identity() const {
  const int n = rank();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Scalar& x = impl_->fwd[r * n + c];
      if (r == c ? !(x == Scalar::one(x.context())) : !x.is_zero()) return false;
    }
  return true;
}

Element Element::left_multiply(int s) const {
  const CoxeterSystem& sys = system();
  const int n = sys.rank();
  if (s < 0 || s >= n) throw ValidationError("generator index out of range");
  std::vector<Scalar> fwd = impl_->fwd;
  std::vector<Scalar> inv = impl_->inv;
  // fwd <- sigma_s * fwd changes row s only
  for (int c = 0; c < n; ++c) {
    Scalar v = -impl_->fwd[s * n + c];
    for (int t = 0; t < n; ++t) {
      if (t == s) continue;
      const Scalar& k = sys.reflection_coefficient(s, t);
      if (!k.is_zero()) v += k * impl_->fwd[t * n + c];
    }
    fwd[s * n + c] = std::move(v);
  }
  // inv <- inv * sigma_s adds multiples of column s to the other columns
  for (int r = 0; r < n; ++r) {
    const Scalar& pivot = impl_->inv[r * n + s];
    if (!pivot.is_zero()) {
      for (int c = 0; c < n; ++c) {
        if (c == s) continue;
        const Scalar& k = sys.reflection_coefficient(s, c);
        if (!k.is_zero()) inv[r * n + c] += k * pivot;
      }
    }
    inv[r * n + s] = -pivot;
  }
  return Element(impl_->system, std::move(fwd), std::move(inv));
}

Element Element::right_multiply(int s) const {
  // ws = (s w^-1)^-1
  Element swapped(impl_->system, impl_->inv, impl_->fwd);
  Element t = swapped.left_multiply(s);
  return Element(impl_->system, t.impl_->inv, t.impl_->fwd);
}

Element Element::inverse() const { return Element(impl_->system, impl_->inv, impl_->fwd); }

Element operator*(const Element& a, const Element& b) {
  if (a.impl_->system != b.impl_->system && !(a.system().matrix() == b.system().matrix()))
    throw ContextMismatch("elements of different Coxeter systems");
  const int n = a.rank();
  auto mul = [n](const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
    std::vector<Scalar> out(n * n, Scalar::zero(x[0].context()));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (x[i * n + k].is_zero()) continue;
        for (int j = 0; j < n; ++j)
          if (!y[k * n + j].is_zero()) out[i * n + j] += x[i * n + k] * y[k * n + j];
      }
    return out;
  };
  return Element(a.impl_->system, mul(a.impl_->fwd, b.impl_->fwd), mul(b.impl_->inv, a.impl_->inv));
}

bool operator==(const Element& a, const Element& b) {
  if (a.impl_ == b.impl_) return true;
  if (!(a.system().matrix() == b.system().matrix())) throw ContextMismatch("elements of different Coxeter systems");
  return a.impl_->fwd == b.impl_->fwd;
}

const std::string& Element::key() const {
  std::call_once(impl_->key_once, [this] {
    std::string k;
    for (const auto& x : impl_->fwd) {
      x.encode(k);
      k.push_back('|');
    }
    impl_->key = std::move(k);
  });
  return impl_->key;
}

Word Element::reduced_word() const {
  Word word;
  Element cur = *this;
  for (;;) {
    int found = -1;
    for (int s = 0; s < rank(); ++s)
      if (cur.has_left_descent(s)) {
        found = s;
        break;
      }
    if (found < 0) break;
    word.push_back(found);
    cur = cur.left_multiply(found);
  }
  return word;
}

int Element::length() const {
  std::call_once(impl_->length_once,
                 [this] { impl_->length = static_cast<int>(reduced_word().size()); });
  return impl_->length;
}

bool is_prefix(const Element& v, const Element& w) {
  return w.length() == v.length() + (v.inverse() * w).length();
}

bool is_suffix(const Element& u, const Element& w) {
  return w.length() == u.length() + (w * u.inverse()).length();
}

}  // namespace coxgates
