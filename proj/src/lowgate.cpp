#include "coxgates/lowgate.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "coxgates/errors.hpp"
#include "parallel.hpp"

namespace coxgates {

namespace {

// Size of a sorted-list intersection, stopping once it exceeds `limit`.
std::size_t meet_size(std::span<const RootId> a, std::span<const RootId> b, std::size_t limit) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      if (++n > limit) return n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

Pipeline::Pipeline(SystemPtr system, Limits limits)
    : system_(std::move(system)), limits_(limits), rank_(system_->rank()), table_(system_) {
  elementary_ = elementary_roots(table_);
  elem_pos_.assign(table_.size(), -1);
  for (std::size_t i = 0; i < elementary_.size(); ++i) elem_pos_[elementary_[i]] = static_cast<int>(i);
  elem_refl_.assign(elementary_.size() * rank_, -1);
  for (std::size_t i = 0; i < elementary_.size(); ++i) {
    for (int s = 0; s < rank_; ++s) {
      const RootId r = table_.reflect(s, elementary_[i]);
      elem_refl_[i * rank_ + s] = r < elem_pos_.size() ? elem_pos_[r] : -1;
    }
  }
  words_ = std::max<std::size_t>(1, (elementary_.size() + 63) / 64);
}

const std::vector<RootId>& Pipeline::spherical() {
  if (!have_spherical_) {
    spherical_ = spherical_positive_roots(table_);
    have_spherical_ = true;
  }
  return spherical_;
}

InversionSet Pipeline::elementary_part(std::span<const RootId> inv) const {
  InversionSet out;
  for (RootId r : inv)
    if (is_elementary(r)) out.push_back(r);
  return out;
}

Pipeline::Bits Pipeline::elementary_bits(std::span<const RootId> inv) const {
  Bits bits(words_, 0);
  for (RootId r : inv) {
    const int p = elementary_position(r);
    if (p >= 0) bits[p / 64] |= std::uint64_t{1} << (p % 64);
  }
  return bits;
}

void Pipeline::build_low() {
  // Level-by-level growth from e: a candidate sw (s an ascent of a low w) is
  // kept when its base lies inside the elementary roots.
  std::unordered_set<InversionSet, InversionSetHash> rejected;
  std::vector<LowElement>& items = low_.items_;
  auto finish = [&](LowElement& x) {
    x.word = word_of_inversion_set(table_, x.inv);
    x.final_roots.clear();
    x.right_descents = 0;
    for (const auto& [s, beta] : right_descent_roots(table_, x.word)) {
      x.right_descents |= SubsetMask{1} << s;
      x.final_roots.push_back(beta);
    }
    std::sort(x.final_roots.begin(), x.final_roots.end());
    x.left_descents = 0;
    for (int s = 0; s < rank_; ++s)
      if (std::binary_search(x.inv.begin(), x.inv.end(), table_.simple(s))) x.left_descents |= SubsetMask{1} << s;
  };

  items.push_back(LowElement{});
  finish(items.back());
  low_.index_.emplace(items.back().inv, 0);
  std::size_t level_begin = 0;
  while (level_begin < items.size()) {
    const std::size_t level_end = items.size();
    std::vector<LowElement> next;
    std::unordered_set<InversionSet, InversionSetHash> pending;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int s = 0; s < rank_; ++s) {
        if (contains(items[i].left_descents, s)) continue;
        auto inv = left_multiply(table_, s, items[i].inv);
        if (low_.index_.count(*inv) || rejected.count(*inv) || pending.count(*inv)) continue;
        Word word;
        word.reserve(items[i].word.size() + 1);
        word.push_back(s);
        word.insert(word.end(), items[i].word.begin(), items[i].word.end());
        InversionSet b = base_of_word(table_, word);
        if (!std::all_of(b.begin(), b.end(), [&](RootId r) { return is_elementary(r); })) {
          rejected.insert(std::move(*inv));
          continue;
        }
        pending.insert(*inv);
        LowElement x;
        x.inv = std::move(*inv);
        x.base = std::move(b);
        next.push_back(std::move(x));
      }
    }
    for (auto& x : next) finish(x);
    std::sort(next.begin(), next.end(), [](const LowElement& a, const LowElement& b) { return a.word < b.word; });
    for (auto& x : next) {
      if (items.size() >= limits_.max_low_elements)
        throw ResourceError("more than " + std::to_string(limits_.max_low_elements) + " low elements");
      low_.index_.emplace(x.inv, items.size());
      items.push_back(std::move(x));
    }
    level_begin = level_end;
  }

  low_bits_.assign(items.size() * words_, 0);
  by_root_.assign(elementary_.size(), {});
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Bits b = elementary_bits(items[i].inv);
    std::copy(b.begin(), b.end(), low_bits_.begin() + static_cast<std::ptrdiff_t>(i * words_));
    for (RootId r : items[i].inv) {
      const int p = elementary_position(r);
      if (p >= 0) by_root_[p].push_back(i);
    }
  }
}

const LowSet& Pipeline::low() {
  if (!have_low_) {
    build_low();
    have_low_ = true;
  }
  return low_;
}

std::optional<std::size_t> Pipeline::scan(std::span<const RootId> inv, const std::uint64_t* bits, RootId beta,
                                          Pool pool) {
  // A witness meets Phi(x) in beta alone, so beta is elementary and the
  // elementary parts of x and w share exactly one root.
  const int p = elementary_position(beta);
  if (p < 0) return std::nullopt;
  for (std::size_t w : by_root_[p]) {
    if (pool == Pool::gates && !gates_.contains(w)) continue;
    const std::uint64_t* wb = low_bits(w);
    int common = 0;
    for (std::size_t k = 0; k < words_ && common < 2; ++k) common += std::popcount(bits[k] & wb[k]);
    if (common != 1) continue;
    if (meet_size(inv, low_[w].inv, 1) == 1) return w;
  }
  return std::nullopt;
}

std::optional<std::size_t> Pipeline::witness(std::span<const RootId> inv, RootId beta, Pool pool) {
  if (!std::binary_search(inv.begin(), inv.end(), beta)) throw ValidationError("witness: root is not an inversion of x");
  low();
  if (pool == Pool::gates) gates();
  const Bits bits = elementary_bits(inv);
  return scan(inv, bits.data(), beta, pool);
}

std::optional<Element> Pipeline::witness(const Element& x, RootId beta, Pool pool) {
  const InversionSet inv = inversion_set(table_, x);
  auto w = witness(inv, beta, pool);
  if (!w) return std::nullopt;
  return element(*w);
}

const GateSet& Pipeline::gates() {
  if (have_gates_) return gates_;
  low();
  const std::size_t n = low_.size();
  std::vector<char> flags(n, 0);
  detail::parallel_for(n, limits_.threads, [&](std::size_t i) {
    const LowElement& x = low_[i];
    bool ok = true;
    for (RootId beta : x.final_roots) {
      if (!scan(x.inv, low_bits(i), beta, Pool::low)) {
        ok = false;
        break;
      }
    }
    flags[i] = ok;
  });
  gates_.flags = std::move(flags);
  gates_.members.clear();
  for (std::size_t i = 0; i < n; ++i)
    if (gates_.flags[i]) gates_.members.push_back(i);
  have_gates_ = true;
  return gates_;
}

const std::vector<std::size_t>& Pipeline::ultra_low() {
  if (have_ultra_) return ultra_;
  low();
  const std::size_t n = low_.size();
  std::vector<char> flags(n, 0);
  detail::parallel_for(n, limits_.threads, [&](std::size_t i) {
    const LowElement& x = low_[i];
    bool ok = true;
    for (RootId beta : x.base) {
      if (!scan(x.inv, low_bits(i), beta, Pool::low)) {
        ok = false;
        break;
      }
    }
    flags[i] = ok;
  });
  ultra_.clear();
  for (std::size_t i = 0; i < n; ++i)
    if (flags[i]) ultra_.push_back(i);
  have_ultra_ = true;
  return ultra_;
}

const std::vector<RootId>& Pipeline::super_elementary() {
  if (have_super_) return super_;
  gates();
  // beta is super-elementary iff some gate g containing beta has a gate
  // witness for beta.
  std::vector<char> hit(elementary_.size(), 0);
  detail::parallel_for(elementary_.size(), limits_.threads, [&](std::size_t p) {
    for (std::size_t g : by_root_[p]) {
      if (!gates_.contains(g)) continue;
      if (scan(low_[g].inv, low_bits(g), elementary_[p], Pool::gates)) {
        hit[p] = 1;
        return;
      }
    }
  });
  super_.clear();
  for (std::size_t p = 0; p < elementary_.size(); ++p)
    if (hit[p]) super_.push_back(elementary_[p]);
  have_super_ = true;
  return super_;
}

std::size_t Pipeline::project(InversionSet inv) {
  gates();
  for (;;) {
    if (auto i = low_.find(inv)) {
      if (gates_.contains(*i)) return *i;
      const LowElement& x = low_[*i];
      bool stripped = false;
      for (int s = 0; s < rank_ && !stripped; ++s) {
        if (!contains(x.right_descents, s)) continue;
        const RootId beta = table_.negate(table_.apply_word(x.word, table_.simple(s)));
        if (!scan(x.inv, low_bits(*i), beta, Pool::low)) {
          inv.erase(std::lower_bound(inv.begin(), inv.end(), beta));
          stripped = true;
        }
      }
      if (!stripped) throw InternalError("low element with witnessed final roots is not a gate");
      continue;
    }
    const Word word = word_of_inversion_set(table_, inv);
    const Bits bits = elementary_bits(inv);
    bool stripped = false;
    for (const auto& [s, beta] : right_descent_roots(table_, word)) {
      if (!scan(inv, bits.data(), beta, Pool::low)) {
        inv.erase(std::lower_bound(inv.begin(), inv.end(), beta));
        stripped = true;
        break;
      }
    }
    if (!stripped) throw InternalError("projection stopped outside the low elements");
  }
}

Element Pipeline::gate_projection(const Element& x) { return element(project(inversion_set(table_, x))); }

InversionSet Pipeline::boundary_roots(std::span<const RootId> inv) {
  gates();
  const Bits bits = elementary_bits(inv);
  InversionSet out;
  for (RootId beta : inv)
    if (scan(inv, bits.data(), beta, Pool::gates)) out.push_back(beta);
  return out;
}

InversionSet Pipeline::boundary_roots(const Element& x) { return boundary_roots(inversion_set(table_, x)); }

std::optional<Element> witness(RootTable& table, const Element& x, RootId beta, std::span<const Element> pool) {
  const InversionSet inv = inversion_set(table, x);
  if (!std::binary_search(inv.begin(), inv.end(), beta)) throw ValidationError("witness: root is not an inversion of x");
  for (const Element& w : pool) {
    const InversionSet other = inversion_set(table, w);
    if (other.size() >= 1 && intersection_size(inv, other) == 1 && std::binary_search(other.begin(), other.end(), beta))
      return w;
  }
  return std::nullopt;
}

}  // namespace coxgates
