#pragma once

// Invariant suites and desk-scale evidence for the open questions about
// gates, cone types and the elementary partition.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coxgates/automata.hpp"

namespace coxgates {

enum class Outcome { pass, fail, inconclusive };

std::string to_string(Outcome o);

struct Check {
  std::string name;
  Outcome outcome = Outcome::pass;
  /// Counterexample or the bound that was exhausted.
  std::string evidence;
  /// Gating checks are proven statements; a failure makes the report fail.
  /// Non-gating checks only collect evidence.
  bool gating = true;
};

struct Report {
  std::string system;
  std::vector<std::pair<std::string, std::uint64_t>> table;
  std::vector<Check> checks;

  /// No gating check failed.
  bool ok() const;
  const Check* find(const std::string& name) const;
  std::string to_json() const;
  /// Aligned text: the cardinality table followed by one line per check.
  std::string to_text() const;
};

struct AnalysisOptions {
  std::uint64_t seed = 1;
  /// Random elements (or pairs) per sampled check.
  int samples = 1000;
  /// Word-count comparison depth against the brute-force oracle.
  int count_depth = 12;
  std::size_t ball_cap = 2'000'000;
  /// Length cutoff for the join search; 0 picks twice the longest gate.
  int join_cutoff = 0;
  std::size_t join_node_cap = 20'000;
  /// At most this many gate pairs are searched; beyond it pairs are sampled.
  std::size_t join_pair_cap = 3000;
  /// Length cutoff for the elementary-partition sampling.
  int shi_cutoff = 8;
  std::size_t shi_node_cap = 200'000;
};

/// Cardinalities only: |E|, |Phi+_sph|, |L|, |Gamma|, |U|, |S|, automaton sizes.
Report info_report(Pipeline& p, const std::string& descriptor);
/// info_report plus the full check suite.
Report verify_invariants(Pipeline& p, const std::string& descriptor, const AnalysisOptions& opt = {});

/// Prefix order on gates against containment of the cone-type languages.
/// Returns the proven direction (gating) and the converse (evidence).
std::vector<Check> check_order_isomorphism(Pipeline& p);
Check check_gate_join_closure(Pipeline& p, const AnalysisOptions& opt = {});
/// Injectivity of x -> E(x) on L (gating), surjectivity onto the automaton
/// states (evidence), and sampled gatedness of the parts (evidence).
std::vector<Check> check_shi_gated(Pipeline& p, const AnalysisOptions& opt = {});

/// Join of x and y in the weak order, searching upward from x level by level.
/// `status` is "join", "unbounded" when two inversions certify that no upper
/// bound exists, or "cutoff" when neither was settled within the length
/// cutoff or node cap.
struct JoinSearch {
  std::string status;
  InversionSet join;
};
JoinSearch find_join(RootTable& table, const InversionSet& x, const InversionSet& y, int cutoff,
                     std::size_t node_cap);

}  // namespace coxgates
