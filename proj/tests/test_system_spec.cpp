#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "coxgates/errors.hpp"
#include "coxgates/system_spec.hpp"
#include "oracles.hpp"

using namespace coxgates;

namespace {

// Leading principal minors of the float Gram matrix, by Gaussian elimination.
std::vector<double> pivots(const CoxeterMatrix& m) {
  const int n = m.rank();
  std::vector<double> g = oracle::gram(m);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double p = g[k * n + k];
    out.push_back(p);
    if (std::fabs(p) < 1e-12) break;
    for (int i = k + 1; i < n; ++i) {
      const double f = g[i * n + k] / p;
      for (int j = k; j < n; ++j) g[i * n + j] -= f * g[k * n + j];
    }
  }
  return out;
}

// Positive semidefinite with a one-dimensional kernel: every proper leading
// pivot is positive and the last one vanishes.  Holds for the vertex
// numbering used by the named affine types, whose first n vertices always
// form a finite type.
bool affine_gram(const CoxeterMatrix& m) {
  const auto p = pivots(m);
  if (static_cast<int>(p.size()) != m.rank()) return false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (p[i] < 1e-9) return false;
  return std::fabs(p.back()) < 1e-9;
}

std::size_t group_order(const CoxeterMatrix& m) {
  const SystemPtr sys = new_system(m);
  return oracle::parabolic_closure(sys, sys->all_generators(), 100000).size();
}

int count_label(const CoxeterMatrix& m, int label) {
  int c = 0;
  for (int i = 0; i < m.rank(); ++i)
    for (int j = i + 1; j < m.rank(); ++j) c += m(i, j) == label;
  return c;
}

}  // namespace

TEST_CASE("finite named types have the right group order") {
  CHECK(group_order(named_type("A1")) == 2);
  CHECK(group_order(named_type("A2")) == 6);
  CHECK(group_order(named_type("A3")) == 24);
  CHECK(group_order(named_type("B2")) == 8);
  CHECK(group_order(named_type("B3")) == 48);
  CHECK(group_order(named_type("G2")) == 12);
  CHECK(group_order(named_type("I2(5)")) == 10);
  CHECK(group_order(named_type("H3")) == 120);
}

TEST_CASE("affine named types") {
  const CoxeterMatrix a2 = named_type("A~2");
  REQUIRE(a2.rank() == 3);
  CHECK(count_label(a2, 3) == 3);
  const CoxeterMatrix b2 = named_type("B~2");
  CHECK(count_label(b2, 4) == 2);
  CHECK(count_label(b2, 2) == 1);
  const CoxeterMatrix g2 = named_type("G~2");
  CHECK(count_label(g2, 6) == 1);
  CHECK(count_label(g2, 3) == 1);
  CHECK(named_type("A~1")(0, 1) == kInfinity);
  CHECK(count_label(named_type("A~3"), 3) == 4);
  CHECK(count_label(named_type("B~3"), 4) == 1);
  CHECK(count_label(named_type("C~3"), 4) == 2);
  CHECK(named_type("D~4").rank() == 5);
  CHECK(count_label(named_type("D~4"), 3) == 4);
  for (const char* name : {"A~2", "B~2", "G~2", "A~3", "B~3", "C~3", "D~4"}) {
    CAPTURE(name);
    CHECK(affine_gram(named_type(name)));
  }
}

TEST_CASE("shipped named types all parse") {
  for (const std::string& name : shipped_named_types()) {
    CAPTURE(name);
    const SystemSpec s = parse_spec(name);
    CHECK(s.name == name);
    CHECK(s.matrix.rank() >= 1);
  }
}

TEST_CASE("JSON matrices") {
  const SystemSpec s = parse_spec(R"({"rank": 2, "m": [[1, 0], [0, 1]]})");
  CHECK(s.name == "matrix");
  CHECK(s.matrix(0, 1) == kInfinity);
  CHECK(parse_spec(R"({"m": [[1, 3], [3, 1]]})").matrix(0, 1) == 3);
  CHECK_THROWS_AS(parse_spec(R"({"rank": 3, "m": [[1, 3], [3, 1]]})"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"m": [[1, 3], [4, 1]]})"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"m": [[1, "3"], [3, 1]]})"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"n": 1})"), ParseError);
}

TEST_CASE("plain-text matrices") {
  const SystemSpec s = parse_spec("# star\n1 2 2 4\n2 1 2 4\n2 2 1 4\n4 4 4 1\n");
  CHECK(s.matrix.rank() == 4);
  CHECK(s.matrix(0, 3) == 4);
  CHECK(s.matrix(0, 1) == 2);
  CHECK(parse_spec("1, inf\ninf, 1").matrix(0, 1) == kInfinity);
  CHECK(parse_spec("1 0\n0 1").matrix(0, 1) == kInfinity);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_spec("1 3\n3 x\n");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  try {
    parse_spec("1 3\n3 1 2\n");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_spec("{\"m\": [[1, 3],\n [3, 1]");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_spec("Q7"), ParseError);
  CHECK_THROWS_AS(parse_spec("A~"), ParseError);
  CHECK_THROWS_AS(parse_spec("I2(1)"), ParseError);
  CHECK_THROWS_AS(parse_spec("   "), ParseError);
  CHECK_THROWS_AS(parse_spec("1 3\n3 2\n"), ParseError);
}

TEST_CASE("load_spec_file") {
  const auto path = std::filesystem::temp_directory_path() / "coxgates_spec_test.json";
  {
    std::ofstream out(path);
    out << R"({"rank": 3, "m": [[1, 4, 2], [4, 1, 4], [2, 4, 1]]})";
  }
  const SystemSpec s = load_spec_file(path.string());
  CHECK(s.matrix.rank() == 3);
  CHECK(s.matrix(0, 1) == 4);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_spec_file(path.string()), ParseError);
}
