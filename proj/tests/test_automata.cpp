#include <doctest.h>

#include <map>
#include <random>

#include "coxgates/automata.hpp"
#include "coxgates/errors.hpp"
#include "coxgates/system_spec.hpp"
#include "oracles.hpp"

using namespace coxgates;

namespace {

SystemPtr sys_of(const char* name) { return new_system(named_type(name)); }
SystemPtr dihedral(int m) { return new_system(CoxeterMatrix({{1, m}, {m, 1}})); }
SystemPtr complete4() {
  return new_system(CoxeterMatrix({{1, 3, 3, 3}, {3, 1, 3, 3}, {3, 3, 1, 3}, {3, 3, 3, 1}}));
}

int state_labeled(const Automaton& a, const std::string& label) {
  for (std::size_t q = 0; q < a.size(); ++q)
    if (a.labels[q] == label) return static_cast<int>(q);
  return -2;
}

std::string label_of(const Element& w) { return w.is_identity() ? "e" : w.system().word_string(w.reduced_word()); }

}  // namespace

TEST_CASE("canonical automaton examples") {
  Pipeline p(sys_of("A~2"));
  const Automaton bh = build_canonical(p);
  CHECK(bh.size() == 16);
  CHECK(bh.alphabet == std::vector<std::string>{"s1", "s2", "s3"});
  for (int s = 0; s < 3; ++s) {
    const int q = bh.step(bh.start, s);
    REQUIRE(q != Automaton::kDead);
    CHECK(bh.step(q, s) == Automaton::kDead);
  }
  CHECK(bh.accepts(Word{0, 1, 2, 0}));
  CHECK_FALSE(bh.accepts(Word{0, 1, 0, 1}));
  CHECK(bh.run(Word{}) == bh.start);
}

TEST_CASE("gate automaton examples") {
  Pipeline a2(dihedral(3));
  const Automaton g = build_gate_automaton(a2);
  CHECK(g.size() == 6);
  CHECK(g.labels[g.start] == "e");
  // reading s1 s2 tracks s2 s1
  CHECK(g.run(Word{0}) == state_labeled(g, "s1"));
  CHECK(g.run(Word{0, 1}) == state_labeled(g, "s2s1"));
  CHECK(g.run(Word{0, 1, 0}) == state_labeled(g, "s1s2s1"));
  CHECK(g.run(Word{0, 1, 0, 1}) == Automaton::kDead);

  Pipeline inf(dihedral(kInfinity));
  CHECK(build_gate_automaton(inf).size() == 3);

  Pipeline b2(sys_of("B~2"));
  CHECK(build_gate_automaton(b2).size() == 24);
  CHECK(build_canonical(b2).size() == 25);
}

TEST_CASE("garside automaton") {
  Pipeline p(sys_of("A~2"));
  const Automaton low = build_garside_low(p);
  CHECK(low.size() == 16);
  CHECK(low.labels[low.run(Word{0})] == "s1");
  CHECK(word_counts(low, 10) == brute_force_counts(p.system(), 10));

  const SystemPtr a2 = dihedral(3);
  RootTable table(a2);
  const Element e = a2->identity(), s = a2->generator(0), t = a2->generator(1);
  // s and t have the join sts outside the set
  const std::vector<Element> not_closed{e, s, t, s * t};
  CHECK_THROWS_AS(build_garside(table, not_closed), NotJoinClosed);
  const std::vector<Element> no_identity{s, t};
  CHECK_THROWS_AS(build_garside(table, no_identity), ValidationError);
  const std::vector<Element> no_t{e, s};
  CHECK_THROWS_AS(build_garside(table, no_t), ValidationError);
  // {e} u S is no Garside shadow here; the projection still exists for every
  // step, but the resulting automaton accepts the wrong language
  const std::vector<Element> tiny{e, s, t};
  const Automaton bad = build_garside(table, tiny);
  CHECK(word_counts(bad, 4) != brute_force_counts(*a2, 4));

  // in the infinite dihedral group {e} u S is a Garside shadow
  const SystemPtr inf = dihedral(kInfinity);
  RootTable itable(inf);
  const std::vector<Element> shadow{inf->identity(), inf->generator(0), inf->generator(1)};
  const Automaton ok = build_garside(itable, shadow);
  CHECK(ok.size() == 3);
  CHECK(word_counts(ok, 8) == brute_force_counts(*inf, 8));
}

TEST_CASE("minimization") {
  Pipeline b2(sys_of("B~2"));
  const Automaton bh = build_canonical(b2);
  const Automaton gate = build_gate_automaton(b2);
  const Automaton m = minimize(bh);
  CHECK(m.size() == 24);
  CHECK(isomorphic(m, gate));
  CHECK_FALSE(isomorphic(bh, gate));
  CHECK(isomorphic(minimize(m), m));
  CHECK(minimize(gate).size() == gate.size());
  CHECK(isomorphic(bh, bh));

  Pipeline g2(sys_of("G~2"));
  CHECK(minimize(build_canonical(g2)).size() == 41);

  Pipeline a2(sys_of("A~2"));
  CHECK(isomorphic(minimize(build_canonical(a2)), build_gate_automaton(a2)));
}

TEST_CASE("minimize merges equivalent states of a hand-made automaton") {
  // two copies of the same one-letter loop
  Automaton a;
  a.alphabet = {"x"};
  a.start = 0;
  a.delta = {{1}, {2}, {1}};
  a.labels = {"a", "b", "c"};
  const Automaton m = minimize(a);
  CHECK(m.size() == 1);
  CHECK(m.delta[0][0] == 0);
  // unreachable states are dropped
  a.delta = {{0}, {Automaton::kDead}};
  a.labels = {"a", "b"};
  CHECK(minimize(a).size() == 1);
}

TEST_CASE("word count examples") {
  Pipeline a2(dihedral(3));
  CHECK(word_counts(build_gate_automaton(a2), 5) == std::vector<std::uint64_t>{1, 2, 2, 2, 0, 0});
  Pipeline inf(dihedral(kInfinity));
  const auto c = word_counts(build_canonical(inf), 20);
  CHECK(c[0] == 1);
  for (int n = 1; n <= 20; ++n) CHECK(c[n] == 2);
  // w0 = stst = tsts has two reduced words
  CHECK(brute_force_counts(*dihedral(4), 5) == std::vector<std::uint64_t>{1, 2, 2, 2, 2, 0});
  CHECK_THROWS_AS(brute_force_counts(*sys_of("A~2"), 12, 50), ResourceError);
}

TEST_CASE("brute-force counts agree with a float depth-first search") {
  for (const char* name : {"A~2", "B~2", "G~2", "H3", "A~3", "B~3", "C~3"}) {
    const SystemPtr sys = sys_of(name);
    const int n = sys->rank() <= 3 ? 12 : 8;
    CAPTURE(name);
    CHECK(brute_force_counts(*sys, n) == oracle::reduced_word_counts(sys->matrix(), n));
  }
  const SystemPtr hyp = new_system(CoxeterMatrix({{1, 3, 2}, {3, 1, 7}, {2, 7, 1}}));
  CHECK(brute_force_counts(*hyp, 12) == oracle::reduced_word_counts(hyp->matrix(), 12));
}

TEST_CASE("all automata accept exactly the reduced words") {
  for (const char* name : {"A~2", "B~2", "G~2", "A~3"}) {
    Pipeline p(sys_of(name));
    const auto oracle = oracle::reduced_word_counts(p.system().matrix(), 9);
    CAPTURE(name);
    CHECK(word_counts(build_canonical(p), 9) == oracle);
    CHECK(word_counts(build_gate_automaton(p), 9) == oracle);
    CHECK(word_counts(build_garside_low(p), 9) == oracle);
  }
}

TEST_CASE("classify") {
  Pipeline p(sys_of("B~2"));
  const Automaton gate = build_gate_automaton(p);
  CHECK(classify(gate, p.system().identity()) == gate.start);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const Element w = oracle::random_element(rng, p.system_ptr(), 16);
    const int q = classify(gate, w);
    REQUIRE(q != Automaton::kDead);
    REQUIRE(gate.labels[q] == label_of(p.gate_projection(w)));
  }
}

TEST_CASE("refines") {
  Pipeline b2(sys_of("B~2"));
  const Automaton bh = build_canonical(b2);
  const Automaton gate = build_gate_automaton(b2);
  CHECK(refines(gate, bh));
  CHECK_FALSE(refines(bh, gate));
  CHECK(refines(bh, bh));
  CHECK(refines(minimize(bh), bh));
  CHECK(refines(gate, build_garside_low(b2)));

  Pipeline a2(sys_of("A~2"));
  CHECK_THROWS_AS(refines(build_gate_automaton(a2), gate), LanguageMismatch);
  Pipeline d(dihedral(3));
  CHECK_THROWS_AS(refines(build_gate_automaton(d), gate), LanguageMismatch);
}

TEST_CASE("language containment") {
  Pipeline p(sys_of("B~2"));
  const Automaton gate = build_gate_automaton(p);
  const auto rel = containment_relation(gate);
  for (int q = 0; q < static_cast<int>(gate.size()); ++q) {
    CHECK(rel[q][q]);
    CHECK(language_leq(gate, q, gate.start));
    for (int r = 0; r < static_cast<int>(gate.size()); ++r) REQUIRE(static_cast<bool>(rel[q][r]) == language_leq(gate, q, r));
  }
}

TEST_CASE("containment on a finite group is the prefix order") {
  // state of w accepts the u with l(w^-1 u) = l(w) + l(u); checked against the
  // whole group
  const SystemPtr sys = sys_of("A3");
  Pipeline p(sys);
  const Automaton gate = build_gate_automaton(p);
  const oracle::Ball ball = oracle::cayley_ball(sys, 6);
  REQUIRE(ball.elements.size() == 24);
  std::map<std::string, int> state;
  for (const Element& w : ball.elements) state[w.key()] = classify(gate, w);
  for (const Element& g : ball.elements)
    for (const Element& h : ball.elements) {
      bool contained = true;
      for (const Element& u : ball.elements)
        if ((h.inverse() * u).length() == h.length() + u.length() && (g.inverse() * u).length() != g.length() + u.length())
          contained = false;
      REQUIRE(language_leq(gate, state[h.key()], state[g.key()]) == contained);
      REQUIRE(contained == is_prefix(g, h));
    }
}

TEST_CASE("DOT export") {
  Automaton a;
  a.alphabet = {"s1"};
  a.delta = {{Automaton::kDead}};
  a.labels = {"e"};
  const std::string dot = export_dot(a, "one");
  CHECK(dot.find("digraph \"one\"") != std::string::npos);
  CHECK(dot.find("q0 [label=\"e\"") != std::string::npos);
  CHECK(dot.find("->") == std::string::npos);

  Pipeline p(dihedral(3));
  const std::string g = export_dot(build_gate_automaton(p));
  std::size_t edges = 0;
  for (std::size_t i = g.find("->"); i != std::string::npos; i = g.find("->", i + 1)) ++edges;
  // each nonidentity element has one reduced extension per non-descent
  CHECK(edges == 2 + 4 * 1);
}

TEST_CASE("JSON round trip and malformed input") {
  Pipeline p(sys_of("G~2"));
  const Automaton bh = build_canonical(p);
  const Automaton back = import_json(export_json(bh));
  CHECK(isomorphic(back, bh));
  CHECK(back.labels == bh.labels);
  CHECK(back.alphabet == bh.alphabet);
  CHECK_THROWS_AS(import_json("{"), ParseError);
  CHECK_THROWS_AS(import_json("{\"alphabet\": [\"a\"], \"start\": 0}"), ParseError);
  CHECK_THROWS_AS(import_json(R"({"alphabet": ["a"], "start": 3, "delta": [[0]]})"), ParseError);
  CHECK_THROWS_AS(import_json(R"({"alphabet": ["a"], "start": 0, "delta": [[0, 0]]})"), ParseError);
  CHECK_THROWS_AS(import_json(R"({"alphabet": ["a"], "start": 0, "delta": [[5]]})"), ParseError);
}

TEST_CASE("when every elementary root is spherical the canonical automaton is minimal") {
  for (const SystemPtr& sys : {sys_of("A~2"), dihedral(kInfinity), complete4()}) {
    Pipeline p(sys);
    REQUIRE(p.spherical() == p.elementary());
    const Automaton bh = build_canonical(p);
    CHECK(minimize(bh).size() == bh.size());
    CHECK(p.gates().size() == p.low().size());
  }
}

TEST_CASE("canonical automaton respects the element cap") {
  Pipeline p(sys_of("D~4"), Limits{100, 1});
  CHECK_THROWS_AS(build_canonical(p), ResourceError);
}
