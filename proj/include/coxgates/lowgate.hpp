#pragma once

// Low elements, gates, ultra-low elements, gate projection, boundary roots and
// super-elementary roots, all computed over a shared root table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "coxgates/roots.hpp"

namespace coxgates {

struct Limits {
  /// Abort low-element enumeration (ResourceError) beyond this many elements.
  std::size_t max_low_elements = 2'000'000;
  /// Worker threads for the read-only scans; results do not depend on it.
  int threads = 1;
};

struct InversionSetHash {
  std::size_t operator()(const InversionSet& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
    for (RootId r : v) {
      h ^= r + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct LowElement {
  Word word;  // ShortLex
  InversionSet inv;
  InversionSet base;
  InversionSet final_roots;
  SubsetMask left_descents = 0;
  SubsetMask right_descents = 0;
  int length() const { return static_cast<int>(inv.size()); }
};

/// The low elements in ShortLex order (so in nondecreasing length).
class LowSet {
 public:
  std::size_t size() const { return items_.size(); }
  const LowElement& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::optional<std::size_t> find(const InversionSet& inv) const {
    auto it = index_.find(inv);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  friend class Pipeline;
  std::vector<LowElement> items_;
  std::unordered_map<InversionSet, std::size_t, InversionSetHash> index_;
};

/// Gates as a subset of the low elements, by LowSet index.
struct GateSet {
  std::vector<char> flags;
  std::vector<std::size_t> members;
  bool contains(std::size_t i) const { return i < flags.size() && flags[i]; }
  std::size_t size() const { return members.size(); }
};

enum class Pool { low, gates };

class Pipeline {
 public:
  explicit Pipeline(SystemPtr system, Limits limits = {});

  const CoxeterSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  RootTable& roots() { return table_; }
  const Limits& limits() const { return limits_; }

  /// Sorted ids of the elementary roots.
  const std::vector<RootId>& elementary() const { return elementary_; }
  bool is_elementary(RootId id) const { return elementary_position(id) >= 0; }
  /// Position of the root in elementary(), or -1.
  int elementary_position(RootId id) const {
    return id < elem_pos_.size() ? elem_pos_[id] : -1;
  }
  /// s applied to the i-th elementary root, as a position, or -1 when the
  /// image is not an elementary root.
  int elementary_reflect(int s, int i) const { return elem_refl_[static_cast<std::size_t>(i) * rank_ + s]; }
  const std::vector<RootId>& spherical();

  const LowSet& low();
  const GateSet& gates();
  /// LowSet indices of the ultra-low elements.
  const std::vector<std::size_t>& ultra_low();
  const std::vector<RootId>& super_elementary();

  /// First element of the pool, in ShortLex order, whose inversion set meets
  /// inv exactly in {beta}.  Throws ValidationError if beta is not in inv.
  std::optional<std::size_t> witness(std::span<const RootId> inv, RootId beta, Pool pool = Pool::low);
  std::optional<Element> witness(const Element& x, RootId beta, Pool pool = Pool::low);

  /// LowSet index of the gate of the part of the element with this inversion set.
  std::size_t project(InversionSet inv);
  Element gate_projection(const Element& x);
  /// Boundary roots of the cone type T(x^-1): the roots of Phi(x) with a gate witness.
  InversionSet boundary_roots(std::span<const RootId> inv);
  InversionSet boundary_roots(const Element& x);

  Element element(std::size_t low_index) const { return system_->from_word(low_[low_index].word); }
  /// Phi(x) intersected with the elementary roots, sorted.
  InversionSet elementary_part(std::span<const RootId> inv) const;

 private:
  using Bits = std::vector<std::uint64_t>;
  Bits elementary_bits(std::span<const RootId> inv) const;
  const std::uint64_t* low_bits(std::size_t i) const { return &low_bits_[i * words_]; }
  std::optional<std::size_t> scan(std::span<const RootId> inv, const std::uint64_t* bits, RootId beta, Pool pool);
  void build_low();

  SystemPtr system_;
  Limits limits_;
  int rank_;
  RootTable table_;
  std::vector<RootId> elementary_;
  std::vector<int> elem_pos_;
  std::vector<int> elem_refl_;
  std::size_t words_ = 1;

  bool have_spherical_ = false;
  std::vector<RootId> spherical_;
  bool have_low_ = false;
  LowSet low_;
  Bits low_bits_;
  // elementary position -> LowSet indices containing that root, increasing
  std::vector<std::vector<std::size_t>> by_root_;
  bool have_gates_ = false;
  GateSet gates_;
  bool have_ultra_ = false;
  std::vector<std::size_t> ultra_;
  bool have_super_ = false;
  std::vector<RootId> super_;
};

/// Witness search over an explicit pool of elements, by full inversion sets.
std::optional<Element> witness(RootTable& table, const Element& x, RootId beta, std::span<const Element> pool);

}  // namespace coxgates
