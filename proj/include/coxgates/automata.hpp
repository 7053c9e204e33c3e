#pragma once

// Deterministic acceptors of the reduced-word language: construction,
// minimization, comparison and word counting.
//
// Convention: reading the letters s_1, ..., s_n from the start state tracks
// the element s_n ... s_1, so a state is reached by a word iff the word is
// reduced, and classify(a, w) reads a reduced word of w^-1.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coxgates/lowgate.hpp"

namespace coxgates {

struct Automaton {
  static constexpr int kDead = -1;

  std::vector<std::string> alphabet;
  int start = 0;
  std::vector<std::string> labels;
  /// delta[q][s], kDead when absent.
  std::vector<std::vector<int>> delta;

  std::size_t size() const { return delta.size(); }
  int step(int q, int s) const { return q == kDead ? kDead : delta[q][s]; }
  /// Final state after reading the word, or kDead.
  int run(std::span<const int> word) const;
  bool accepts(std::span<const int> word) const { return run(word) != kDead; }
};

/// Brink-Howlett automaton on elementary inversion sets.
Automaton build_canonical(Pipeline& p);
/// Cone-type automaton on the gates.
Automaton build_gate_automaton(Pipeline& p);
/// Projection automaton of a suffix- and join-closed set B (given by
/// inversion sets; must contain e and the simple generators).  Throws
/// NotJoinClosed when some projection has no unique prefix-maximum.
Automaton build_garside(RootTable& table, std::span<const InversionSet> B);
Automaton build_garside(RootTable& table, std::span<const Element> B);
/// build_garside with B = L.
Automaton build_garside_low(Pipeline& p);

/// Moore refinement with DEAD as its own class; canonical numbering.
Automaton minimize(const Automaton& a);
/// Accessible part renumbered by BFS from the start, letters in order.
Automaton canonical(const Automaton& a);
bool isomorphic(const Automaton& a, const Automaton& b);

/// Accepted words of each length 0..n.  Throws ResourceError on overflow.
std::vector<std::uint64_t> word_counts(const Automaton& a, int n);
/// Reduced words of each length 0..n, by enumerating the ball of radius n.
std::vector<std::uint64_t> brute_force_counts(const CoxeterSystem& system, int n,
                                              std::size_t max_elements = 5'000'000);

/// State reached by a reduced word of w^-1.
int classify(const Automaton& a, const Element& w);

/// True iff every b-state pairs with exactly one a-state in the product, i.e.
/// a is a quotient of b.  Throws LanguageMismatch when the languages differ
/// (counts compared up to `depth`, then exact on the product).
bool refines(const Automaton& a, const Automaton& b, int depth = 12);
/// Language from p contained in the language from q.
bool language_leq(const Automaton& a, int p, int q);
/// All-pairs containment as a greatest fixpoint; rel[p][q] == language_leq(a, p, q).
std::vector<std::vector<char>> containment_relation(const Automaton& a);

std::string export_dot(const Automaton& a, const std::string& name = "automaton");
std::string export_json(const Automaton& a);
/// Throws ParseError on malformed input.
Automaton import_json(const std::string& text);

}  // namespace coxgates
