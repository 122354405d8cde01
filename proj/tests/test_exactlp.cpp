#include "doctest.h"

#include <optional>

#include "core/error.hpp"
#include "core/exactlp.hpp"
#include "support/generators.hpp"

using namespace kelvin;
using namespace kelvin::lp;

namespace {

std::vector<Bounds> nonneg(std::size_t n) { return std::vector<Bounds>(n, Bounds{Rational(0), std::nullopt}); }

// Brute-force optimum of a bounded two-variable program: every feasible vertex
// lies on two tight lines among the constraints and box bounds.
std::optional<Rational> vertex_optimum(const LinearProgram& p) {
  struct Line { Rational a, b, c; };
  std::vector<Line> lines;
  for (const auto& row : p.constraints) lines.push_back({row.coefficients[0], row.coefficients[1], row.rhs});
  for (std::size_t j = 0; j < 2; ++j) {
    for (const auto& v : {p.bounds[j].lower, p.bounds[j].upper}) {
      if (v) lines.push_back({j == 0 ? 1 : 0, j == 1 ? 1 : 0, *v});
    }
  }
  auto feasible = [&](const Rational& x, const Rational& y) {
    for (const auto& row : p.constraints) {
      const Rational lhs = row.coefficients[0] * x + row.coefficients[1] * y;
      if (row.relation == Relation::kLessEqual && lhs > row.rhs) return false;
      if (row.relation == Relation::kGreaterEqual && lhs < row.rhs) return false;
      if (row.relation == Relation::kEqual && lhs != row.rhs) return false;
    }
    for (std::size_t j = 0; j < 2; ++j) {
      const Rational v = j == 0 ? x : y;
      if (p.bounds[j].lower && v < *p.bounds[j].lower) return false;
      if (p.bounds[j].upper && v > *p.bounds[j].upper) return false;
    }
    return true;
  };
  std::optional<Rational> best;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t k = i + 1; k < lines.size(); ++k) {
      const Rational det = lines[i].a * lines[k].b - lines[i].b * lines[k].a;
      if (det == 0) continue;
      const Rational x = (lines[i].c * lines[k].b - lines[i].b * lines[k].c) / det;
      const Rational y = (lines[i].a * lines[k].c - lines[i].c * lines[k].a) / det;
      if (!feasible(x, y)) continue;
      const Rational v = p.objective[0] * x + p.objective[1] * y;
      if (!best || v > *best) best = v;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook optimum with duals") {
  LinearProgram p{{1, 1},
                  {{{1, 2}, Relation::kLessEqual, 4}, {{3, 1}, Relation::kLessEqual, 6}},
                  nonneg(2)};
  const Outcome out = solve(p);
  REQUIRE(std::holds_alternative<Optimal>(out));
  const auto& opt = std::get<Optimal>(out);
  CHECK(opt.value == Rational(14, 5));
  CHECK(opt.x[0] == Rational(8, 5));
  CHECK(opt.x[1] == Rational(6, 5));
  CHECK(opt.dual.rows[0] == Rational(2, 5));
  CHECK(opt.dual.rows[1] == Rational(1, 5));
  CHECK(dual_objective(p, opt.dual) == opt.value);
  CHECK(verify_outcome(p, out));

  Optimal wrong = opt;
  wrong.value += Rational(1, 1000);
  CHECK_FALSE(verify_outcome(p, wrong));
  Optimal bad_dual = opt;
  bad_dual.dual.rows[0] = -bad_dual.dual.rows[0];
  CHECK_FALSE(verify_outcome(p, bad_dual));
}

TEST_CASE("infeasible program yields a Farkas ray") {
  LinearProgram p{{1}, {{{1}, Relation::kGreaterEqual, 1}, {{1}, Relation::kLessEqual, 0}}, nonneg(1)};
  const Outcome out = solve(p);
  REQUIRE(std::holds_alternative<Infeasible>(out));
  CHECK(verify_outcome(p, out));

  LinearProgram feasible{{1}, {{{1}, Relation::kLessEqual, 1}}, nonneg(1)};
  CHECK_FALSE(verify_outcome(feasible, Infeasible{DualVector{{1}, {0}, {0}}}));
}

TEST_CASE("unbounded program yields a ray") {
  LinearProgram p{{1, 0}, {{{1, -1}, Relation::kLessEqual, 1}}, nonneg(2)};
  const Outcome out = solve(p);
  REQUIRE(std::holds_alternative<Unbounded>(out));
  const auto& u = std::get<Unbounded>(out);
  CHECK(u.ray[0] > 0);
  CHECK(verify_outcome(p, out));
  CHECK_FALSE(verify_outcome(p, Unbounded{u.point, {1, 0}}));
  CHECK_FALSE(verify_outcome(p, Unbounded{u.point, {0, 1}}));
}

TEST_CASE("free, upper-only and equality-constrained variables") {
  // max x  s.t.  x + y = 3, y >= 1, x free
  LinearProgram p{{1, 0},
                  {{{1, 1}, Relation::kEqual, 3}},
                  {Bounds{}, Bounds{Rational(1), std::nullopt}}};
  auto out = solve(p);
  REQUIRE(std::holds_alternative<Optimal>(out));
  CHECK(std::get<Optimal>(out).value == 2);
  CHECK(verify_outcome(p, out));

  // max -x  s.t.  x >= -2, x <= 5 (upper bound only)
  LinearProgram q{{-1}, {{{1}, Relation::kGreaterEqual, -2}}, {Bounds{std::nullopt, Rational(5)}}};
  out = solve(q);
  REQUIRE(std::holds_alternative<Optimal>(out));
  CHECK(std::get<Optimal>(out).x[0] == -2);
  CHECK(verify_outcome(q, out));

  // All-free variables via empty bounds, doubly bounded via box.
  LinearProgram r{{1, 1}, {{{1, 1}, Relation::kLessEqual, 7}}, {}};
  out = solve(r);
  REQUIRE(std::holds_alternative<Optimal>(out));
  CHECK(std::get<Optimal>(out).value == 7);
  CHECK(verify_outcome(r, out));
}

TEST_CASE("degenerate program does not cycle") {
  LinearProgram p{{Rational(3, 4), -20, Rational(1, 2), -6},
                  {{{Rational(1, 4), -8, -1, 9}, Relation::kLessEqual, 0},
                   {{Rational(1, 2), -12, Rational(-1, 2), 3}, Relation::kLessEqual, 0},
                   {{0, 0, 1, 0}, Relation::kLessEqual, 1}},
                  nonneg(4)};
  const Outcome out = solve(p);
  REQUIRE(std::holds_alternative<Optimal>(out));
  CHECK(std::get<Optimal>(out).value == Rational(5, 4));
  CHECK(verify_outcome(p, out));
}

TEST_CASE("duplicate and redundant rows") {
  LinearProgram p{{1},
                  {{{1}, Relation::kLessEqual, 2}, {{1}, Relation::kLessEqual, 2}, {{2}, Relation::kLessEqual, 4}},
                  nonneg(1)};
  const Outcome out = solve(p);
  REQUIRE(std::holds_alternative<Optimal>(out));
  CHECK(std::get<Optimal>(out).value == 2);
  CHECK(verify_outcome(p, out));
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram p{{1, 1}, {{{1}, Relation::kLessEqual, 1}}, {}};
  CHECK_THROWS_AS(validate(p), Error);
  LinearProgram q{{1}, {}, {Bounds{Rational(2), Rational(1)}}};
  CHECK_THROWS_AS(validate(q), Error);
}

TEST_CASE("property: random boxed programs match vertex enumeration") {
  testing::Gen g(2024);
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearProgram p;
    p.objective = {g.rational(5, 3), g.rational(5, 3)};
    p.bounds = {Bounds{Rational(-5), Rational(5)}, Bounds{Rational(-5), Rational(5)}};
    const int rows = g.integer(0, 5);
    for (int i = 0; i < rows; ++i) {
      const int rel = g.integer(0, 5);
      p.constraints.push_back({{g.rational(4, 3), g.rational(4, 3)},
                               rel < 3 ? Relation::kLessEqual
                                       : (rel < 5 ? Relation::kGreaterEqual : Relation::kEqual),
                               g.rational(6, 2)});
    }
    const Outcome out = solve(p);
    CHECK(verify_outcome(p, out));
    const auto expected = vertex_optimum(p);
    CHECK_FALSE(std::holds_alternative<Unbounded>(out));
    if (expected) {
      REQUIRE(std::holds_alternative<Optimal>(out));
      CHECK(std::get<Optimal>(out).value == *expected);
    } else {
      CHECK(std::holds_alternative<Infeasible>(out));
      ++infeasible;
    }
  }
  CHECK(infeasible > 0);
}
