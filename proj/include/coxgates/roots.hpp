#pragma once

// Roots of the geometric representation, interned with dense integer ids, and
// the inversion-set calculus built on top of them.

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxgates/coxeter.hpp"

namespace coxgates {

using RootId = std::uint32_t;
inline constexpr RootId kNoRoot = std::numeric_limits<RootId>::max();

/// Sorted list of positive root ids.
using InversionSet = std::vector<RootId>;

struct Root {
  std::vector<Scalar> coords;
  SubsetMask support = 0;
  bool positive = false;
};

/// Global interner for one Coxeter system.  Interning is an atomic
/// get-or-insert; cached generator reflections are read without locking.
class RootTable {
 public:
  explicit RootTable(SystemPtr system);
  RootTable(const RootTable&) = delete;
  RootTable& operator=(const RootTable&) = delete;
  ~RootTable();

  const CoxeterSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  int rank() const { return rank_; }

  /// Interns a coordinate vector; throws ValidationError if it is zero or has
  /// coordinates of both signs.
  RootId intern(std::vector<Scalar> coords);
  std::optional<RootId> find(const std::vector<Scalar>& coords) const;
  const Root& root(RootId id) const { return chunk(id)->roots[id & kChunkMask]; }
  bool is_positive(RootId id) const { return root(id).positive; }
  std::size_t size() const { return size_.load(std::memory_order_acquire); }

  RootId simple(int s) const { return simple_[s]; }
  RootId negate(RootId id);
  /// s(beta), memoized.
  RootId reflect(int s, RootId id) {
    const RootId cached = chunk(id)->refl[(id & kChunkMask) * rank_ + s].load(std::memory_order_acquire);
    return cached != kNoRoot ? cached : reflect_slow(s, id);
  }
  /// (t_1 ... t_k) beta, i.e. the letters applied right to left.
  RootId apply_word(std::span<const int> word, RootId id);
  /// w beta through the matrix of w.
  RootId act(const Element& w, RootId id);
  Scalar inner(RootId a, RootId b) const;
  Scalar inner(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const;
  /// Element acting as the reflection lambda -> lambda - 2<lambda,beta>beta.
  Element reflection_of(RootId beta) const;

  std::string describe(RootId id) const;

 private:
  static constexpr int kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr RootId kChunkMask = static_cast<RootId>(kChunkSize - 1);
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 14;

  struct Chunk {
    std::unique_ptr<Root[]> roots;
    std::unique_ptr<std::atomic<RootId>[]> refl;
    std::unique_ptr<std::atomic<RootId>[]> neg;
  };

  Chunk* chunk(RootId id) const { return chunks_[id >> kChunkBits].load(std::memory_order_acquire); }
  RootId reflect_slow(int s, RootId id);
  static std::string key_of(const std::vector<Scalar>& coords);

  SystemPtr system_;
  int rank_;
  std::vector<RootId> simple_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, RootId> index_;
  std::vector<std::unique_ptr<Chunk>> owned_;
  std::unique_ptr<std::atomic<Chunk*>[]> chunks_;
  std::atomic<std::size_t> size_{0};
};

/// Membership flags indexed by root id.
class RootFlags {
 public:
  RootFlags() = default;
  explicit RootFlags(std::span<const RootId> ids) {
    for (RootId id : ids) insert(id);
  }
  bool contains(RootId id) const { return id < flags_.size() && flags_[id]; }
  void insert(RootId id) {
    if (id >= flags_.size()) flags_.resize(static_cast<std::size_t>(id) + 1, 0);
    flags_[id] = 1;
  }

 private:
  std::vector<char> flags_;
};

bool subset_of(std::span<const RootId> a, std::span<const RootId> b);
/// Size of the intersection of two sorted id lists.
std::size_t intersection_size(std::span<const RootId> a, std::span<const RootId> b);

// ---- operations on Elements -------------------------------------------------

RootId reflect(RootTable& table, int s, RootId beta);
RootId act(RootTable& table, const Element& w, RootId beta);
Scalar inner(const RootTable& table, RootId a, RootId b);
Element reflection_of(const RootTable& table, RootId beta);

/// Phi(w), by walking the ShortLex reduced word of w.
InversionSet inversion_set(RootTable& table, const Element& w);
/// Phi^1(w) = { beta in Phi(w) : l(s_beta w) = l(w) - 1 }.
InversionSet base(RootTable& table, const Element& w);
/// Phi^0(w) = { -w alpha_s : s in D_R(w) }.
InversionSet final_roots(RootTable& table, const Element& w);

/// Elementary roots, as the fixpoint of growing the simple roots by s whenever
/// -1 < <alpha, alpha_s> < 0.  Sorted ids.
std::vector<RootId> elementary_roots(RootTable& table);
/// Positive roots of the maximal spherical parabolic subsystems.  Sorted ids.
std::vector<RootId> spherical_positive_roots(RootTable& table);

// ---- word calculus ----------------------------------------------------------
// These work on reduced words and inversion sets only and never touch
// element matrices.

/// beta_j = t_1 ... t_{j-1} alpha_{t_j} for a reduced word, in word order.
std::vector<RootId> ordered_inversions(RootTable& table, std::span<const int> word);
InversionSet inversion_set_of_word(RootTable& table, std::span<const int> word);
bool is_reduced(RootTable& table, std::span<const int> word);
/// ShortLex reduced word of the element with the given inversion set.
Word word_of_inversion_set(RootTable& table, InversionSet inv);
/// Phi(s w) when s is not a left descent of w, otherwise nullopt.
std::optional<InversionSet> left_multiply(RootTable& table, int s, std::span<const RootId> inv);
/// (s, -w alpha_s) for every right descent s, increasing s.
std::vector<std::pair<int, RootId>> right_descent_roots(RootTable& table, std::span<const int> word);
InversionSet final_roots_of_word(RootTable& table, std::span<const int> word);
/// Phi^1 of a reduced word: beta_j lies in the base iff deleting letter j
/// leaves a reduced word.
InversionSet base_of_word(RootTable& table, std::span<const int> word);

}  // namespace coxgates
