#include "coxgates/roots.hpp"

#include <algorithm>
#include <deque>

#include "coxgates/errors.hpp"

namespace coxgates {

RootTable::RootTable(SystemPtr system)
    : system_(std::move(system)), rank_(system_->rank()),
      chunks_(new std::atomic<Chunk*>[kMaxChunks]) {
  for (std::size_t i = 0; i < kMaxChunks; ++i) chunks_[i].store(nullptr, std::memory_order_relaxed);
  const FieldPtr& f = system_->field();
  for (int s = 0; s < rank_; ++s) {
    std::vector<Scalar> c(rank_, Scalar::zero(f));
    c[s] = Scalar::one(f);
    simple_.push_back(intern(std::move(c)));
  }
}

RootTable::~RootTable() = default;

std::string RootTable::key_of(const std::vector<Scalar>& coords) {
  std::string key;
  for (const auto& c : coords) {
    c.encode(key);
    key.push_back('|');
  }
  return key;
}

std::optional<RootId> RootTable::find(const std::vector<Scalar>& coords) const {
  const std::string key = key_of(coords);
  std::lock_guard lock(mutex_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RootId RootTable::intern(std::vector<Scalar> coords) {
  if (static_cast<int>(coords.size()) != rank_)
    throw ValidationError("root has " + std::to_string(coords.size()) + " coordinates, expected " +
                          std::to_string(rank_));
  std::string key = key_of(coords);
  {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
  }
  bool pos = false, neg = false;
  SubsetMask support = 0;
  for (int i = 0; i < rank_; ++i) {
    const int sg = coords[i].sign();
    if (sg != 0) support |= SubsetMask{1} << i;
    pos |= sg > 0;
    neg |= sg < 0;
  }
  if (pos && neg) throw ValidationError("vector with coordinates of both signs is not a root");
  if (!pos && !neg) throw ValidationError("zero vector is not a root");

  std::lock_guard lock(mutex_);
  const RootId id = static_cast<RootId>(size_.load(std::memory_order_relaxed));
  auto [it, inserted] = index_.try_emplace(std::move(key), id);
  if (!inserted) return it->second;
  const std::size_t ci = id >> kChunkBits;
  if (ci >= kMaxChunks || id == kNoRoot) {
    index_.erase(it);
    throw ResourceError("root table is full");
  }
  if (ci >= owned_.size()) {
    auto c = std::make_unique<Chunk>();
    c->roots.reset(new Root[kChunkSize]);
    const std::size_t slots = kChunkSize * static_cast<std::size_t>(rank_);
    c->refl.reset(new std::atomic<RootId>[slots]);
    for (std::size_t i = 0; i < slots; ++i) c->refl[i].store(kNoRoot, std::memory_order_relaxed);
    c->neg.reset(new std::atomic<RootId>[kChunkSize]);
    for (std::size_t i = 0; i < kChunkSize; ++i) c->neg[i].store(kNoRoot, std::memory_order_relaxed);
    chunks_[ci].store(c.get(), std::memory_order_release);
    owned_.push_back(std::move(c));
  }
  Root& r = owned_[ci]->roots[id & kChunkMask];
  r.coords = std::move(coords);
  r.support = support;
  r.positive = pos;
  size_.store(static_cast<std::size_t>(id) + 1, std::memory_order_release);
  return id;
}

RootId RootTable::negate(RootId id) {
  std::atomic<RootId>& slot = chunk(id)->neg[id & kChunkMask];
  RootId cached = slot.load(std::memory_order_acquire);
  if (cached != kNoRoot) return cached;
  std::vector<Scalar> c = root(id).coords;
  for (auto& x : c) x = -x;
  const RootId out = intern(std::move(c));
  slot.store(out, std::memory_order_release);
  chunk(out)->neg[out & kChunkMask].store(id, std::memory_order_release);
  return out;
}

RootId RootTable::reflect_slow(int s, RootId id) {
  if (s < 0 || s >= rank_) throw ValidationError("generator index out of range");
  std::vector<Scalar> c = root(id).coords;
  Scalar v = -c[s];
  for (int t = 0; t < rank_; ++t) {
    if (t == s || c[t].is_zero()) continue;
    v += system_->reflection_coefficient(s, t) * c[t];
  }
  c[s] = std::move(v);
  const RootId out = intern(std::move(c));
  chunk(id)->refl[(id & kChunkMask) * rank_ + s].store(out, std::memory_order_release);
  chunk(out)->refl[(out & kChunkMask) * rank_ + s].store(id, std::memory_order_release);
  return out;
}

RootId RootTable::apply_word(std::span<const int> word, RootId id) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) id = reflect(*it, id);
  return id;
}

RootId RootTable::act(const Element& w, RootId id) {
  if (w.system_ptr() != system_) throw ContextMismatch("element belongs to a different system");
  const auto& m = w.matrix();
  const auto& b = root(id).coords;
  std::vector<Scalar> out(rank_, Scalar::zero(system_->field()));
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (!b[j].is_zero()) out[i] += m[i * rank_ + j] * b[j];
  return intern(std::move(out));
}

Scalar RootTable::inner(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const {
  Scalar out = Scalar::zero(system_->field());
  for (int i = 0; i < rank_; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < rank_; ++j)
      if (!b[j].is_zero()) out += a[i] * system_->gram(i, j) * b[j];
  }
  return out;
}

Scalar RootTable::inner(RootId a, RootId b) const { return inner(root(a).coords, root(b).coords); }

Element RootTable::reflection_of(RootId beta) const {
  const auto& b = root(beta).coords;
  const FieldPtr& f = system_->field();
  const Scalar two(f, 2L);
  std::vector<Scalar> m(static_cast<std::size_t>(rank_) * rank_, Scalar::zero(f));
  for (int j = 0; j < rank_; ++j) {
    Scalar pj = Scalar::zero(f);
    for (int k = 0; k < rank_; ++k)
      if (!b[k].is_zero()) pj += system_->gram(j, k) * b[k];
    pj = two * pj;
    for (int i = 0; i < rank_; ++i) {
      Scalar v = i == j ? Scalar::one(f) : Scalar::zero(f);
      if (!b[i].is_zero()) v -= pj * b[i];
      m[i * rank_ + j] = std::move(v);
    }
  }
  std::vector<Scalar> inv = m;
  return Element::from_matrices(system_, std::move(m), std::move(inv));
}

std::string RootTable::describe(RootId id) const {
  std::string out = "[";
  const auto& c = root(id).coords;
  for (int i = 0; i < rank_; ++i) {
    if (i) out += ", ";
    out += c[i].to_string();
  }
  return out + "]";
}

bool subset_of(std::span<const RootId> a, std::span<const RootId> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::size_t intersection_size(std::span<const RootId> a, std::span<const RootId> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

RootId reflect(RootTable& table, int s, RootId beta) { return table.reflect(s, beta); }
RootId act(RootTable& table, const Element& w, RootId beta) { return table.act(w, beta); }
Scalar inner(const RootTable& table, RootId a, RootId b) { return table.inner(a, b); }
Element reflection_of(const RootTable& table, RootId beta) { return table.reflection_of(beta); }

namespace {

RootId column_root(RootTable& table, const std::vector<Scalar>& m, int s, bool negate) {
  const int r = table.rank();
  std::vector<Scalar> c;
  c.reserve(r);
  for (int i = 0; i < r; ++i) c.push_back(negate ? -m[i * r + s] : m[i * r + s]);
  return table.intern(std::move(c));
}

void sort_unique(std::vector<RootId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

InversionSet inversion_set(RootTable& table, const Element& w) {
  InversionSet out;
  Element prefix = table.system().identity();
  for (int t : w.reduced_word()) {
    out.push_back(column_root(table, prefix.matrix(), t, false));
    prefix = prefix.right_multiply(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

InversionSet base(RootTable& table, const Element& w) {
  InversionSet out;
  const int len = w.length();
  for (RootId beta : inversion_set(table, w))
    if ((table.reflection_of(beta) * w).length() == len - 1) out.push_back(beta);
  return out;
}

InversionSet final_roots(RootTable& table, const Element& w) {
  InversionSet out;
  const SubsetMask d = w.right_descents();
  for (int s = 0; s < table.rank(); ++s)
    if (contains(d, s)) out.push_back(column_root(table, w.matrix(), s, true));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RootId> elementary_roots(RootTable& table) {
  const CoxeterSystem& sys = table.system();
  const int r = table.rank();
  const Scalar one = Scalar::one(sys.field());
  RootFlags seen;
  std::vector<RootId> out;
  std::deque<RootId> queue;
  for (int s = 0; s < r; ++s) {
    seen.insert(table.simple(s));
    out.push_back(table.simple(s));
    queue.push_back(table.simple(s));
  }
  while (!queue.empty()) {
    const RootId a = queue.front();
    queue.pop_front();
    const auto& c = table.root(a).coords;
    for (int s = 0; s < r; ++s) {
      Scalar x = Scalar::zero(sys.field());
      for (int t = 0; t < r; ++t)
        if (!c[t].is_zero()) x += c[t] * sys.gram(t, s);
      if (x.sign() >= 0 || (x + one).sign() <= 0) continue;
      const RootId b = table.reflect(s, a);
      if (seen.contains(b)) continue;
      seen.insert(b);
      out.push_back(b);
      queue.push_back(b);
    }
  }
  sort_unique(out);
  return out;
}

std::vector<RootId> spherical_positive_roots(RootTable& table) {
  std::vector<RootId> out;
  RootFlags seen;
  for (SubsetMask J : table.system().maximal_spherical_subsets()) {
    std::vector<RootId> stack;
    RootFlags local;
    for (int s = 0; s < table.rank(); ++s) {
      if (!contains(J, s)) continue;
      stack.push_back(table.simple(s));
      local.insert(table.simple(s));
    }
    while (!stack.empty()) {
      const RootId a = stack.back();
      stack.pop_back();
      if (!seen.contains(a)) {
        seen.insert(a);
        out.push_back(a);
      }
      for (int s = 0; s < table.rank(); ++s) {
        if (!contains(J, s)) continue;
        const RootId b = table.reflect(s, a);
        if (!table.is_positive(b) || local.contains(b)) continue;
        local.insert(b);
        stack.push_back(b);
      }
    }
  }
  sort_unique(out);
  return out;
}

std::vector<RootId> ordered_inversions(RootTable& table, std::span<const int> word) {
  std::vector<RootId> out;
  out.reserve(word.size());
  for (std::size_t j = 0; j < word.size(); ++j)
    out.push_back(table.apply_word(word.first(j), table.simple(word[j])));
  return out;
}

InversionSet inversion_set_of_word(RootTable& table, std::span<const int> word) {
  InversionSet out = ordered_inversions(table, word);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<InversionSet> left_multiply(RootTable& table, int s, std::span<const RootId> inv) {
  const RootId a = table.simple(s);
  if (std::binary_search(inv.begin(), inv.end(), a)) return std::nullopt;
  InversionSet out;
  out.reserve(inv.size() + 1);
  out.push_back(a);
  for (RootId b : inv) out.push_back(table.reflect(s, b));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_reduced(RootTable& table, std::span<const int> word) {
  InversionSet inv;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto next = left_multiply(table, *it, inv);
    if (!next) return false;
    inv = std::move(*next);
  }
  return true;
}

Word word_of_inversion_set(RootTable& table, InversionSet inv) {
  Word word;
  while (!inv.empty()) {
    int t = -1;
    for (int s = 0; s < table.rank(); ++s) {
      if (std::binary_search(inv.begin(), inv.end(), table.simple(s))) {
        t = s;
        break;
      }
    }
    if (t < 0) throw ValidationError("root set is not an inversion set");
    word.push_back(t);
    InversionSet next;
    next.reserve(inv.size() - 1);
    const RootId a = table.simple(t);
    for (RootId b : inv) {
      if (b == a) continue;
      const RootId c = table.reflect(t, b);
      if (!table.is_positive(c)) throw ValidationError("root set is not an inversion set");
      next.push_back(c);
    }
    std::sort(next.begin(), next.end());
    inv = std::move(next);
  }
  return word;
}

std::vector<std::pair<int, RootId>> right_descent_roots(RootTable& table, std::span<const int> word) {
  std::vector<std::pair<int, RootId>> out;
  for (int s = 0; s < table.rank(); ++s) {
    const RootId img = table.apply_word(word, table.simple(s));
    if (!table.is_positive(img)) out.emplace_back(s, table.negate(img));
  }
  return out;
}

InversionSet final_roots_of_word(RootTable& table, std::span<const int> word) {
  InversionSet out;
  for (const auto& [s, beta] : right_descent_roots(table, word)) out.push_back(beta);
  std::sort(out.begin(), out.end());
  return out;
}

InversionSet base_of_word(RootTable& table, std::span<const int> word) {
  // Deleting letter j from t_1...t_k gives u v with u = t_1..t_{j-1} and
  // v = t_{j+1}..t_k; that product is reduced iff Phi(u^-1) and Phi(v) are
  // disjoint.  Both families are built incrementally.
  const std::size_t k = word.size();
  std::vector<InversionSet> pre(k), suf(k);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    auto next = left_multiply(table, word[j], pre[j]);
    if (!next) throw ValidationError("word is not reduced");
    pre[j + 1] = std::move(*next);
  }
  for (std::size_t j = k; j-- > 1;) {
    auto next = left_multiply(table, word[j], suf[j]);
    if (!next) throw ValidationError("word is not reduced");
    suf[j - 1] = std::move(*next);
  }
  const std::vector<RootId> betas = ordered_inversions(table, word);
  InversionSet out;
  for (std::size_t j = 0; j < k; ++j)
    if (intersection_size(pre[j], suf[j]) == 0) out.push_back(betas[j]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coxgates
