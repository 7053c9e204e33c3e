#include "coxgates/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "coxgates/errors.hpp"

namespace coxgates {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool Report::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.gating && c.outcome == Outcome::fail; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["system"] = system;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table) t[k] = v;
  j["table"] = t;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"outcome", to_string(c.outcome)}, {"gating", c.gating},
                           {"evidence", c.evidence}});
  j["ok"] = ok();
  return j.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "system: " << system << "\n";
  std::size_t w = 0;
  for (const auto& [k, v] : table) w = std::max(w, k.size());
  for (const auto& [k, v] : table) out << "  " << std::left << std::setw(static_cast<int>(w)) << k << "  " << v << "\n";
  if (!checks.empty()) {
    std::size_t cw = 0;
    for (const auto& c : checks) cw = std::max(cw, c.name.size());
    out << "checks:\n";
    for (const auto& c : checks) {
      std::string tag = to_string(c.outcome);
      std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
      out << "  " << std::left << std::setw(14) << tag << std::setw(static_cast<int>(cw)) << c.name
          << (c.gating ? "  " : "  [evidence] ") << c.evidence << "\n";
    }
    out << (ok() ? "result: ok\n" : "result: FAILED\n");
  }
  return out.str();
}

namespace {

Check make(std::string name, bool ok, std::string evidence, bool gating = true) {
  return Check{std::move(name), ok ? Outcome::pass : Outcome::fail, std::move(evidence), gating};
}

std::string word_text(const CoxeterSystem& sys, std::span<const int> w) {
  return w.empty() ? std::string("e") : sys.word_string(w);
}

/// Phi(s w) for any s: an ascent adds alpha_s, a descent removes it.
InversionSet times(RootTable& table, int s, const InversionSet& inv) {
  if (auto up = left_multiply(table, s, inv)) return std::move(*up);
  InversionSet out;
  const RootId a = table.simple(s);
  for (RootId b : inv)
    if (b != a) out.push_back(table.reflect(s, b));
  std::sort(out.begin(), out.end());
  return out;
}

InversionSet random_element(RootTable& table, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, table.rank() - 1);
  InversionSet inv;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) inv = times(table, letter(rng), inv);
  return inv;
}

int max_gate_length(Pipeline& p) {
  int m = 0;
  for (std::size_t g : p.gates().members) m = std::max(m, p.low()[g].length());
  return m;
}

std::vector<int> gate_states(Pipeline& p, const Automaton& a) {
  // state reached by a reduced word of g^-1, i.e. the reversed word of g
  std::vector<int> out(p.low().size(), Automaton::kDead);
  for (std::size_t g : p.gates().members) {
    Word w = p.low()[g].word;
    std::reverse(w.begin(), w.end());
    out[g] = a.run(w);
  }
  return out;
}

std::vector<InversionSet> parabolic_elements(RootTable& table, SubsetMask J) {
  std::vector<InversionSet> out{InversionSet{}};
  std::unordered_set<InversionSet, InversionSetHash> seen{InversionSet{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int s = 0; s < table.rank(); ++s) {
      if (!contains(J, s)) continue;
      auto next = left_multiply(table, s, out[i]);
      if (next && seen.insert(*next).second) out.push_back(std::move(*next));
    }
  }
  return out;
}

}  // namespace

JoinSearch find_join(RootTable& table, const InversionSet& x, const InversionSet& y, int cutoff,
                     std::size_t node_cap) {
  // Inversion sets are closed under nonnegative combinations, and two roots
  // with <a, b> <= -1 span infinitely many positive roots; no finite inversion
  // set holds both.
  const Scalar minus_one(table.system().field(), -1L);
  for (RootId a : x)
    for (RootId b : y)
      if ((table.inner(a, b) - minus_one).sign() <= 0) return {"unbounded", {}};
  std::vector<std::pair<InversionSet, Word>> level{{x, word_of_inversion_set(table, x)}};
  std::size_t nodes = 1;
  for (int len = static_cast<int>(x.size());; ++len) {
    std::vector<std::size_t> bounds;
    for (std::size_t i = 0; i < level.size(); ++i)
      if (subset_of(y, level[i].first)) bounds.push_back(i);
    // bounded sets have a least upper bound, so the first bounds found are unique
    if (bounds.size() > 1) throw InternalError("two minimal upper bounds of the same length");
    if (bounds.size() == 1) return {"join", level[bounds[0]].first};
    // every node lies below the join, so a pruned-out search proves there is none
    if (level.empty()) return {"unbounded", {}};
    if (len >= cutoff) return {"cutoff", {}};
    std::vector<std::pair<InversionSet, Word>> next;
    std::unordered_set<InversionSet, InversionSetHash> seen;
    for (const auto& [inv, word] : level) {
      for (int s = 0; s < table.rank(); ++s) {
        const RootId r = table.apply_word(word, table.simple(s));
        if (!table.is_positive(r)) continue;
        if (std::any_of(y.begin(), y.end(), [&](RootId b) { return (table.inner(r, b) - minus_one).sign() <= 0; }))
          continue;
        InversionSet up = inv;
        up.insert(std::upper_bound(up.begin(), up.end(), r), r);
        if (!seen.insert(up).second) continue;
        if (++nodes > node_cap) return {"cutoff", {}};
        Word w = word;
        w.push_back(s);
        next.emplace_back(std::move(up), std::move(w));
      }
    }
    level = std::move(next);
  }
}

Report info_report(Pipeline& p, const std::string& descriptor) {
  Report r;
  r.system = descriptor;
  const Automaton bh = build_canonical(p);
  const Automaton gate = build_gate_automaton(p);
  const Automaton garside = build_garside_low(p);
  r.table = {
      {"rank", static_cast<std::uint64_t>(p.system().rank())},
      {"elementary roots", p.elementary().size()},
      {"spherical roots", p.spherical().size()},
      {"low elements", p.low().size()},
      {"gates", p.gates().size()},
      {"ultra-low elements", p.ultra_low().size()},
      {"super-elementary roots", p.super_elementary().size()},
      {"canonical automaton states", bh.size()},
      {"minimized canonical states", minimize(bh).size()},
      {"gate automaton states", gate.size()},
      {"garside automaton states", garside.size()},
  };
  return r;
}

std::vector<Check> check_order_isomorphism(Pipeline& p) {
  const Automaton a = build_gate_automaton(p);
  const auto rel = containment_relation(a);
  const auto state = gate_states(p, a);
  const auto& gates = p.gates().members;
  const LowSet& low = p.low();
  std::string forward_bad, converse_bad;
  std::size_t pairs = 0;
  for (std::size_t g : gates) {
    for (std::size_t h : gates) {
      ++pairs;
      const bool prefix = subset_of(low[g].inv, low[h].inv);
      const bool leq = rel[state[h]][state[g]];
      if (prefix && !leq && forward_bad.empty())
        forward_bad = word_text(p.system(), low[g].word) + " <= " + word_text(p.system(), low[h].word);
      if (leq && !prefix && converse_bad.empty())
        converse_bad = word_text(p.system(), low[g].word) + " vs " + word_text(p.system(), low[h].word);
    }
  }
  const std::string all = "all " + std::to_string(pairs) + " gate pairs";
  return {
      make("prefix order implies cone containment", forward_bad.empty(),
           forward_bad.empty() ? all : "counterexample " + forward_bad),
      make("cone containment implies prefix order", converse_bad.empty(),
           converse_bad.empty() ? all : "counterexample " + converse_bad, false),
  };
}

Check check_gate_join_closure(Pipeline& p, const AnalysisOptions& opt) {
  const auto& gates = p.gates().members;
  const LowSet& low = p.low();
  const int cutoff = opt.join_cutoff > 0 ? opt.join_cutoff : 2 * max_gate_length(p);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = gates.size();
  const bool exhaustive = n * (n + 1) / 2 <= opt.join_pair_cap;
  if (exhaustive) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) pairs.emplace_back(gates[i], gates[j]);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < opt.join_pair_cap; ++k) pairs.emplace_back(gates[pick(rng)], gates[pick(rng)]);
  }
  std::size_t joins = 0, unbounded = 0, truncated = 0;
  for (const auto& [g, h] : pairs) {
    const InversionSet& x = low[g].inv;
    const InversionSet& y = low[h].inv;
    JoinSearch js;
    if (subset_of(x, y)) js = {"join", y};
    else if (subset_of(y, x)) js = {"join", x};
    else js = x.size() >= y.size() ? find_join(p.roots(), x, y, cutoff, opt.join_node_cap)
                                   : find_join(p.roots(), y, x, cutoff, opt.join_node_cap);
    if (js.status == "join") {
      ++joins;
      auto idx = low.find(js.join);
      if (!idx || !p.gates().contains(*idx)) {
        return make("gates closed under join", false,
                    "join of " + word_text(p.system(), low[g].word) + " and " + word_text(p.system(), low[h].word) +
                        " is " + word_text(p.system(), word_of_inversion_set(p.roots(), js.join)) + ", not a gate",
                    false);
      }
    } else if (js.status == "unbounded") {
      ++unbounded;
    } else {
      ++truncated;
    }
  }
  std::string ev = std::to_string(pairs.size()) + (exhaustive ? " pairs (all)" : " sampled pairs (seed " +
                                                                                     std::to_string(opt.seed) + ")") +
                   ": " + std::to_string(joins) + " joins in gates, " + std::to_string(unbounded) + " unbounded, " +
                   std::to_string(truncated) + " undecided up to length " + std::to_string(cutoff);
  Check c{"gates closed under join", Outcome::pass, ev, false};
  if (!exhaustive || truncated) c.outcome = Outcome::inconclusive;
  return c;
}

std::vector<Check> check_shi_gated(Pipeline& p, const AnalysisOptions& opt) {
  const LowSet& low = p.low();
  std::vector<Check> out;
  std::unordered_map<InversionSet, std::size_t, InversionSetHash> theta;
  std::string clash;
  for (std::size_t i = 0; i < low.size(); ++i) {
    auto [it, fresh] = theta.emplace(p.elementary_part(low[i].inv), i);
    if (!fresh && clash.empty())
      clash = word_text(p.system(), low[it->second].word) + " and " + word_text(p.system(), low[i].word);
  }
  out.push_back(make("elementary part is injective on low elements", clash.empty(),
                     clash.empty() ? std::to_string(low.size()) + " low elements" : "internal error: " + clash +
                                                                                        " share an elementary part"));

  const Automaton bh = build_canonical(p);
  out.push_back(make("elementary part is onto canonical states", theta.size() == bh.size(),
                     std::to_string(theta.size()) + " images of " + std::to_string(bh.size()) + " states", false));

  // Walk the ball of radius cutoff; every element must have the low element
  // with the same elementary part as a prefix.
  std::vector<InversionSet> level{InversionSet{}};
  std::unordered_set<InversionSet, InversionSetHash> seen{InversionSet{}};
  std::size_t visited = 1;
  bool capped = false;
  std::string bad;
  int len = 0;
  while (!level.empty() && bad.empty()) {
    for (const auto& w : level) {
      auto it = theta.find(p.elementary_part(w));
      if (it == theta.end()) continue;
      if (!subset_of(low[it->second].inv, w)) {
        bad = word_text(p.system(), word_of_inversion_set(p.roots(), w)) + " does not extend " +
              word_text(p.system(), low[it->second].word);
        break;
      }
    }
    if (len >= opt.shi_cutoff) break;
    std::vector<InversionSet> next;
    for (const auto& w : level) {
      for (int s = 0; s < p.system().rank() && !capped; ++s) {
        auto up = left_multiply(p.roots(), s, w);
        if (!up || !seen.insert(*up).second) continue;
        if (++visited > opt.shi_node_cap) capped = true;
        next.push_back(std::move(*up));
      }
    }
    if (capped) break;
    level = std::move(next);
    ++len;
  }
  Check c{"elementary parts are gated", Outcome::pass, "", false};
  if (!bad.empty()) {
    c.outcome = Outcome::fail;
    c.evidence = bad;
  } else if (level.empty() && !capped) {
    c.evidence = "whole group, " + std::to_string(visited) + " elements";
  } else {
    c.outcome = Outcome::inconclusive;
    c.evidence = std::to_string(visited) + " elements up to length " + std::to_string(len) +
                 (capped ? " (node cap)" : "");
  }
  out.push_back(c);
  return out;
}

Report verify_invariants(Pipeline& p, const std::string& descriptor, const AnalysisOptions& opt) {
  Report r = info_report(p, descriptor);
  const CoxeterSystem& sys = p.system();
  RootTable& table = p.roots();
  const LowSet& low = p.low();
  const GateSet& gates = p.gates();
  const int rank = sys.rank();
  auto name_of = [&](std::size_t i) { return word_text(sys, low[i].word); };

  {
    std::string bad;
    for (int s = 0; s < rank && bad.empty(); ++s)
      if (!low.find(InversionSet{table.simple(s)})) bad = "generator " + sys.generator_name(s) + " missing";
    for (std::size_t i = 0; i < low.size() && bad.empty(); ++i)
      for (int s = 0; s < rank; ++s)
        if (contains(low[i].left_descents, s) && !low.find(times(table, s, low[i].inv))) {
          bad = "suffix of " + name_of(i) + " missing";
          break;
        }
    r.checks.push_back(make("low elements contain S and are suffix-closed", bad.empty(),
                            bad.empty() ? std::to_string(low.size()) + " elements" : bad));
  }
  {
    std::string bad;
    if (!gates.contains(0)) bad = "e is not a gate";
    for (int s = 0; s < rank && bad.empty(); ++s)
      if (!gates.contains(*low.find(InversionSet{table.simple(s)}))) bad = sys.generator_name(s) + " is not a gate";
    for (std::size_t g : gates.members) {
      if (!bad.empty()) break;
      for (int s = 0; s < rank; ++s) {
        if (!contains(low[g].left_descents, s)) continue;
        auto i = low.find(times(table, s, low[g].inv));
        if (!i || !gates.contains(*i)) {
          bad = "suffix of gate " + name_of(g) + " is not a gate";
          break;
        }
      }
    }
    r.checks.push_back(make("gates contain S and are suffix-closed", bad.empty(),
                            bad.empty() ? std::to_string(gates.size()) + " gates" : bad));
  }
  {
    std::string bad;
    std::size_t count = 0;
    for (SubsetMask J : sys.maximal_spherical_subsets()) {
      for (const auto& w : parabolic_elements(table, J)) {
        ++count;
        auto i = low.find(w);
        if (!i || !gates.contains(*i)) {
          bad = word_text(sys, word_of_inversion_set(table, w)) + " is spherical but not a gate";
          break;
        }
      }
      if (!bad.empty()) break;
    }
    r.checks.push_back(make("spherical parabolic elements are gates", bad.empty(),
                            bad.empty() ? std::to_string(count) + " elements over maximal spherical subsets" : bad));
  }
  {
    std::string bad;
    for (std::size_t u : p.ultra_low())
      if (!gates.contains(u)) {
        bad = name_of(u) + " is ultra-low but not a gate";
        break;
      }
    r.checks.push_back(make("ultra-low within gates within low", bad.empty(),
                            bad.empty() ? std::to_string(p.ultra_low().size()) + " <= " +
                                              std::to_string(gates.size()) + " <= " + std::to_string(low.size())
                                        : bad));
  }
  {
    std::string bad_sub, bad_ultra;
    std::vector<char> ultra(low.size(), 0);
    for (std::size_t u : p.ultra_low()) ultra[u] = 1;
    for (std::size_t i = 0; i < low.size(); ++i) {
      const InversionSet boundary = p.boundary_roots(low[i].inv);
      const bool inside = subset_of(boundary, low[i].base) &&
                          std::all_of(boundary.begin(), boundary.end(), [&](RootId b) { return p.is_elementary(b); });
      if (!inside && bad_sub.empty()) bad_sub = name_of(i);
      if ((boundary == low[i].base) != static_cast<bool>(ultra[i]) && bad_ultra.empty()) bad_ultra = name_of(i);
    }
    r.checks.push_back(make("boundary roots within base and elementary roots", bad_sub.empty(),
                            bad_sub.empty() ? "all low elements" : "fails at " + bad_sub));
    r.checks.push_back(make("ultra-low iff base equals boundary", bad_ultra.empty(),
                            bad_ultra.empty() ? "all low elements" : "fails at " + bad_ultra));
  }
  {
    const auto& E = p.elementary();
    const auto& S = p.super_elementary();
    const auto& sph = p.spherical();
    r.checks.push_back(make("super-elementary within elementary", subset_of(S, E),
                            std::to_string(S.size()) + " of " + std::to_string(E.size())));
    r.checks.push_back(make("spherical roots within super-elementary", subset_of(sph, S),
                            std::to_string(sph.size()) + " spherical roots"));
    r.checks.push_back(make("spherical roots within elementary", subset_of(sph, E),
                            std::to_string(sph.size()) + " spherical roots"));
  }

  const Automaton bh = build_canonical(p);
  const Automaton gate = build_gate_automaton(p);
  const Automaton garside = build_garside_low(p);
  const Automaton mbh = minimize(bh);
  r.checks.push_back(make("minimized canonical automaton is the gate automaton", isomorphic(mbh, gate),
                          std::to_string(bh.size()) + " -> " + std::to_string(mbh.size()) + " vs " +
                              std::to_string(gate.size()) + " states"));
  r.checks.push_back(make("gate automaton has one state per gate", gate.size() == gates.size(),
                          std::to_string(gate.size()) + " states"));
  r.checks.push_back(make("minimization is idempotent", isomorphic(minimize(mbh), mbh) && isomorphic(minimize(gate), gate),
                          std::to_string(mbh.size()) + " states"));
  {
    bool ok = false;
    std::string ev;
    try {
      ok = refines(gate, bh, opt.count_depth) && refines(mbh, bh, opt.count_depth);
      ev = ok ? "canonical automaton maps onto cone types" : "no quotient map";
    } catch (const LanguageMismatch& e) {
      ev = e.what();
    }
    r.checks.push_back(make("cone-type partition is coarser than the canonical one", ok, ev));
  }
  {
    Check c{"word counts match brute force", Outcome::pass, "", true};
    try {
      const auto oracle = brute_force_counts(sys, opt.count_depth, opt.ball_cap);
      const std::pair<const char*, const Automaton*> autos[] = {{"canonical", &bh}, {"gate", &gate}, {"garside", &garside}};
      for (const auto& [nm, a] : autos) {
        if (word_counts(*a, opt.count_depth) != oracle) {
          c.outcome = Outcome::fail;
          c.evidence += std::string(nm) + " differs; ";
        }
      }
      if (c.outcome == Outcome::pass) c.evidence = "lengths 0.." + std::to_string(opt.count_depth);
    } catch (const ResourceError& e) {
      c.outcome = Outcome::inconclusive;
      c.evidence = e.what();
    }
    r.checks.push_back(c);
  }

  std::mt19937_64 rng(opt.seed);
  const int sample_len = max_gate_length(p) + 6;
  {
    std::string bad;
    const int n = std::min(opt.samples, 200);
    for (int k = 0; k < n && bad.empty(); ++k) {
      const InversionSet inv = random_element(table, rng, sample_len);
      const Element w = sys.from_word(word_of_inversion_set(table, inv));
      const InversionSet phi = inversion_set(table, w);
      const InversionSet b = base(table, w);
      const InversionSet f = final_roots(table, w);
      if (phi != inv || static_cast<int>(phi.size()) != w.length() || !subset_of(f, b) || !subset_of(b, phi) ||
          b != base_of_word(table, w.reduced_word()) || f != final_roots_of_word(table, w.reduced_word()))
        bad = word_text(sys, w.reduced_word());
    }
    r.checks.push_back(make("inversion, base and final roots agree", bad.empty(),
                            bad.empty() ? std::to_string(n) + " sampled elements" : "fails at " + bad));
  }
  {
    std::string bad;
    const auto state = gate_states(p, gate);
    for (int k = 0; k < opt.samples && bad.empty(); ++k) {
      const InversionSet x = random_element(table, rng, sample_len);
      const InversionSet y = random_element(table, rng, sample_len);
      const Element ex = sys.from_word(word_of_inversion_set(table, x));
      const Element ey = sys.from_word(word_of_inversion_set(table, y));
      const bool c1 = (ex.inverse() * ey).length() == ex.length() + ey.length();
      const bool c4 = intersection_size(x, y) == 0;
      const bool c2 = [&] {
        Word w = ex.inverse().reduced_word();
        Word v = ey.reduced_word();
        w.insert(w.end(), v.begin(), v.end());
        return gate.accepts(w);
      }();
      const bool c3 = [&] {
        Word w = ey.inverse().reduced_word();
        Word v = ex.reduced_word();
        w.insert(w.end(), v.begin(), v.end());
        return gate.accepts(w);
      }();
      if (c1 != c4 || c2 != c4 || c3 != c4) bad = word_text(sys, ex.reduced_word()) + ", " + word_text(sys, ey.reduced_word());
    }
    r.checks.push_back(make("cone type equivalences", bad.empty(),
                            bad.empty() ? std::to_string(opt.samples) + " sampled pairs" : "fails at " + bad));
    std::string pbad;
    for (int k = 0; k < opt.samples && pbad.empty(); ++k) {
      const InversionSet x = random_element(table, rng, sample_len);
      const std::size_t g = p.project(x);
      const Element ex = sys.from_word(word_of_inversion_set(table, x));
      const Element eg = p.element(g);
      if (!gates.contains(g) || p.project(low[g].inv) != g || !is_prefix(eg, ex) || classify(gate, ex) != state[g] ||
          p.gate_projection(ex) != eg)
        pbad = word_text(sys, ex.reduced_word());
    }
    r.checks.push_back(make("gate projection is idempotent and matches classify", pbad.empty(),
                            pbad.empty() ? std::to_string(opt.samples) + " sampled elements" : "fails at " + pbad));
  }

  for (auto& c : check_order_isomorphism(p)) r.checks.push_back(std::move(c));
  r.checks.push_back(make("ultra-low elements are the gates", p.ultra_low().size() == gates.size(),
                          std::to_string(p.ultra_low().size()) + " of " + std::to_string(gates.size()), false));
  r.checks.push_back(check_gate_join_closure(p, opt));
  for (auto& c : check_shi_gated(p, opt)) r.checks.push_back(std::move(c));
  return r;
}

}  // namespace coxgates
