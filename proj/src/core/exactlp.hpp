#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "core/rational.hpp"

namespace kelvin::lp {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct Bounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

// maximize objective . x subject to the constraints and per-variable bounds.
// `bounds` is either empty (every variable free) or holds one entry per
// variable.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  std::vector<Bounds> bounds;

  std::size_t variable_count() const { return objective.size(); }
};

// Multipliers on every constraint and bound, under the sign convention of a
// maximization problem:
//   <= rows and upper bounds carry multipliers >= 0,
//   >= rows and lower bounds carry multipliers <= 0,
//   = rows are free.
// An absent bound always has multiplier 0.
struct DualVector {
  std::vector<Rational> rows;
  std::vector<Rational> lower;
  std::vector<Rational> upper;
};

struct Optimal {
  std::vector<Rational> x;
  Rational value;
  DualVector dual;  // A^T y + lower + upper = objective, b . y + ... = value
};

// Farkas ray: A^T y + lower + upper = 0 with b . y + l . lower + u . upper < 0.
struct Infeasible {
  DualVector ray;
};

struct Unbounded {
  std::vector<Rational> point;  // feasible
  std::vector<Rational> ray;    // recession direction with objective . ray > 0
};

using Outcome = std::variant<Optimal, Infeasible, Unbounded>;

// Throws kInvalidArgument on dimension mismatch or crossed bounds.
void validate(const LinearProgram& program);

// Two-phase primal simplex over exact rationals with Bland's rule. Exact
// duplicate constraints are dropped before solving and receive multiplier 0.
Outcome solve(const LinearProgram& program);

// Re-checks every claim carried by the outcome by direct substitution.
bool verify_outcome(const LinearProgram& program, const Outcome& outcome);

// Dual objective b . y + l . lower + u . upper (absent bounds contribute 0).
Rational dual_objective(const LinearProgram& program, const DualVector& dual);

}  // namespace kelvin::lp
