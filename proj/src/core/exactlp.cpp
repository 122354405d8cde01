#include "core/exactlp.hpp"

#include <cstddef>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace kelvin::lp {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// How an original variable is expressed through nonnegative columns.
enum class Substitution {
  kShiftLower,  // x = l + x'
  kShiftUpper,  // x = u - x'
  kSplit,       // x = x+ - x-
};

struct VariableMap {
  Substitution kind;
  Rational shift;
  std::size_t column;  // x', or x+ (x- is column + 1)
};

struct InternalRow {
  const std::vector<Rational>* coefficients = nullptr;  // null: unit row of `bound_of`
  Relation relation;
  Rational rhs;
  std::size_t constraint = kNone;  // original index, or kNone for a bound row
  std::size_t bound_of = kNone;
};

const Rational& row_coefficient(const InternalRow& row, std::size_t j) {
  static const Rational kZero(0);
  static const Rational kOne(1);
  if (row.coefficients) return (*row.coefficients)[j];
  return j == row.bound_of ? kOne : kZero;
}

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t columns)
      : cells_(rows + 1, std::vector<Rational>(columns + 1)), basis_(rows, kNone) {}

  std::size_t rows() const { return basis_.size(); }
  std::size_t columns() const { return cells_.front().size() - 1; }

  Rational& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return cells_[r][c]; }
  Rational& rhs(std::size_t r) { return cells_[r].back(); }
  const Rational& rhs(std::size_t r) const { return cells_[r].back(); }
  std::vector<Rational>& objective_row() { return cells_.back(); }
  const std::vector<Rational>& objective_row() const { return cells_.back(); }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  // Objective row holds reduced costs; its last cell is minus the objective.
  void price(const std::vector<Rational>& costs) {
    auto& obj = objective_row();
    for (std::size_t j = 0; j < columns(); ++j) obj[j] = costs[j];
    obj.back() = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const Rational& cb = costs[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= columns(); ++j) {
        if (cells_[i][j] != 0) obj[j] -= cb * cells_[i][j];
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = cells_[r];
    const Rational inv = 1 / prow[c];
    for (auto& v : prow) {
      if (v != 0) v *= inv;
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i == r) continue;
      auto& row = cells_[i];
      if (row[c] == 0) continue;
      const Rational factor = row[c];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (prow[j] != 0) row[j] -= factor * prow[j];
      }
    }
    basis_[r] = c;
  }

  enum class Stop { kOptimal, kUnbounded };

  // Bland's rule: lowest-index improving column enters; among minimum-ratio
  // rows the lowest-index basic variable leaves.
  Stop run(const std::vector<bool>& may_enter, std::size_t* unbounded_column) {
    for (;;) {
      const auto& obj = objective_row();
      std::size_t entering = kNone;
      for (std::size_t j = 0; j < columns(); ++j) {
        if (may_enter[j] && obj[j] > 0) {
          entering = j;
          break;
        }
      }
      if (entering == kNone) return Stop::kOptimal;

      std::size_t leaving = kNone;
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        const Rational& a = at(i, entering);
        if (a <= 0) continue;
        Rational ratio = rhs(i) / a;
        if (leaving == kNone || ratio < best ||
            (ratio == best && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (leaving == kNone) {
        *unbounded_column = entering;
        return Stop::kUnbounded;
      }
      pivot(leaving, entering);
    }
  }

 private:
  std::vector<std::vector<Rational>> cells_;
  std::vector<std::size_t> basis_;
};

bool same_constraint(const Constraint& a, const Constraint& b) {
  return a.relation == b.relation && a.rhs == b.rhs && a.coefficients == b.coefficients;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) sum += a[i] * b[i];
  }
  return sum;
}

bool relation_holds(Relation rel, const Rational& lhs, const Rational& rhs) {
  switch (rel) {
    case Relation::kLessEqual: return lhs <= rhs;
    case Relation::kEqual: return lhs == rhs;
    case Relation::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

// Sign rule for a multiplier on a row with the given relation.
bool multiplier_sign_ok(Relation rel, const Rational& y) {
  switch (rel) {
    case Relation::kLessEqual: return y >= 0;
    case Relation::kEqual: return true;
    case Relation::kGreaterEqual: return y <= 0;
  }
  return false;
}

const Bounds& bounds_of(const LinearProgram& p, std::size_t j) {
  static const Bounds kFree{};
  return p.bounds.empty() ? kFree : p.bounds[j];
}

bool primal_feasible(const LinearProgram& p, const std::vector<Rational>& x) {
  if (x.size() != p.variable_count()) return false;
  for (const auto& c : p.constraints) {
    if (!relation_holds(c.relation, dot(c.coefficients, x), c.rhs)) return false;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Bounds& b = bounds_of(p, j);
    if (b.lower && x[j] < *b.lower) return false;
    if (b.upper && x[j] > *b.upper) return false;
  }
  return true;
}

// Checks signs and A^T y + lower + upper = target.
bool dual_shape_ok(const LinearProgram& p, const DualVector& d,
                   const std::vector<Rational>& target) {
  const std::size_t n = p.variable_count();
  if (d.rows.size() != p.constraints.size() || d.lower.size() != n || d.upper.size() != n) {
    return false;
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (!multiplier_sign_ok(p.constraints[i].relation, d.rows[i])) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = bounds_of(p, j);
    if (d.lower[j] > 0 || (!b.lower && d.lower[j] != 0)) return false;
    if (d.upper[j] < 0 || (!b.upper && d.upper[j] != 0)) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational s = d.lower[j] + d.upper[j];
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
      if (d.rows[i] != 0) s += d.rows[i] * p.constraints[i].coefficients[j];
    }
    if (s != target[j]) return false;
  }
  return true;
}

}  // namespace

void validate(const LinearProgram& program) {
  const std::size_t n = program.variable_count();
  for (std::size_t i = 0; i < program.constraints.size(); ++i) {
    if (program.constraints[i].coefficients.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "constraint " + std::to_string(i) + " has " +
                      std::to_string(program.constraints[i].coefficients.size()) +
                      " coefficients, expected " + std::to_string(n));
    }
  }
  if (!program.bounds.empty() && program.bounds.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "bounds list length differs from variable count");
  }
  for (std::size_t j = 0; j < program.bounds.size(); ++j) {
    const Bounds& b = program.bounds[j];
    if (b.lower && b.upper && *b.lower > *b.upper) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variable " + std::to_string(j) + " has lower bound above upper bound");
    }
  }
}

Rational dual_objective(const LinearProgram& program, const DualVector& dual) {
  Rational value = 0;
  for (std::size_t i = 0; i < program.constraints.size() && i < dual.rows.size(); ++i) {
    value += dual.rows[i] * program.constraints[i].rhs;
  }
  for (std::size_t j = 0; j < program.bounds.size(); ++j) {
    const Bounds& b = program.bounds[j];
    if (b.lower && j < dual.lower.size()) value += dual.lower[j] * *b.lower;
    if (b.upper && j < dual.upper.size()) value += dual.upper[j] * *b.upper;
  }
  return value;
}

Outcome solve(const LinearProgram& program) {
  validate(program);
  const std::size_t n = program.variable_count();

  // Variable substitution onto nonnegative columns.
  std::vector<VariableMap> vars(n);
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = bounds_of(program, j);
    if (b.lower) {
      vars[j] = {Substitution::kShiftLower, *b.lower, structural++};
    } else if (b.upper) {
      vars[j] = {Substitution::kShiftUpper, *b.upper, structural++};
    } else {
      vars[j] = {Substitution::kSplit, Rational(0), structural};
      structural += 2;
    }
  }

  // Rows: deduplicated constraints, then upper bounds of doubly bounded
  // variables.
  std::vector<InternalRow> rows;
  std::vector<std::size_t> row_of_constraint(program.constraints.size(), kNone);
  for (std::size_t i = 0; i < program.constraints.size(); ++i) {
    bool duplicate = false;
    for (std::size_t k = 0; k < i; ++k) {
      if (row_of_constraint[k] != kNone &&
          same_constraint(program.constraints[k], program.constraints[i])) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    row_of_constraint[i] = rows.size();
    const Constraint& c = program.constraints[i];
    rows.push_back({&c.coefficients, c.relation, c.rhs, i, kNone});
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = bounds_of(program, j);
    if (b.lower && b.upper) {
      rows.push_back({nullptr, Relation::kLessEqual, *b.upper, kNone, j});
    }
  }

  const std::size_t m = rows.size();
  std::size_t slack_count = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::kEqual) ++slack_count;
  }

  // Row data in substituted coordinates: rhs' = b - A shift, then sign-normalized.
  std::vector<std::vector<Rational>> hat(m, std::vector<Rational>(structural));
  std::vector<Rational> hat_rhs(m);
  std::vector<int> slack_sign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    hat_rhs[i] = rows[i].rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = row_coefficient(rows[i], j);
      if (a == 0) continue;
      const VariableMap& v = vars[j];
      switch (v.kind) {
        case Substitution::kShiftLower:
          hat[i][v.column] = a;
          hat_rhs[i] -= a * v.shift;
          break;
        case Substitution::kShiftUpper:
          hat[i][v.column] = -a;
          hat_rhs[i] -= a * v.shift;
          break;
        case Substitution::kSplit:
          hat[i][v.column] = a;
          hat[i][v.column + 1] = -a;
          break;
      }
    }
    if (rows[i].relation == Relation::kLessEqual) slack_sign[i] = 1;
    if (rows[i].relation == Relation::kGreaterEqual) slack_sign[i] = -1;
  }

  std::vector<int> row_sign(m, 1);
  std::size_t artificial_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (hat_rhs[i] < 0) row_sign[i] = -1;
    if (slack_sign[i] * row_sign[i] != 1) ++artificial_count;
  }

  const std::size_t first_slack = structural;
  const std::size_t first_artificial = structural + slack_count;
  const std::size_t columns = first_artificial + artificial_count;
  Tableau tab(m, columns);
  std::vector<std::size_t> unit_column(m, kNone);
  {
    std::size_t next_slack = first_slack;
    std::size_t next_artificial = first_artificial;
    for (std::size_t i = 0; i < m; ++i) {
      const int s = row_sign[i];
      for (std::size_t c = 0; c < structural; ++c) {
        if (hat[i][c] != 0) tab.at(i, c) = s * hat[i][c];
      }
      tab.rhs(i) = s * hat_rhs[i];
      if (slack_sign[i] != 0) {
        tab.at(i, next_slack) = s * slack_sign[i];
        if (s * slack_sign[i] == 1) unit_column[i] = next_slack;
        ++next_slack;
      }
      if (unit_column[i] == kNone) {
        tab.at(i, next_artificial) = 1;
        unit_column[i] = next_artificial++;
      }
      tab.basis()[i] = unit_column[i];
    }
  }

  // Multipliers y = c_B B^{-1}, read off the columns that started as identity.
  auto row_multipliers = [&](const std::vector<Rational>& costs) {
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational s = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const Rational& cb = costs[tab.basis()[k]];
        if (cb != 0 && tab.at(k, unit_column[i]) != 0) s += cb * tab.at(k, unit_column[i]);
      }
      y[i] = row_sign[i] * s;
    }
    return y;
  };

  // Maps internal row multipliers onto the original constraints and bounds;
  // the residual target_j - (A^T y)_j lands on the bound the substitution used.
  auto to_dual = [&](const std::vector<Rational>& y, const std::vector<Rational>& target) {
    DualVector d;
    d.rows.assign(program.constraints.size(), Rational(0));
    d.lower.assign(n, Rational(0));
    d.upper.assign(n, Rational(0));
    std::vector<Rational> weighted(n);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].constraint != kNone) d.rows[rows[i].constraint] = y[i];
      if (rows[i].bound_of != kNone) d.upper[rows[i].bound_of] = y[i];
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& a = row_coefficient(rows[i], j);
        if (a != 0) weighted[j] += y[i] * a;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      Rational residual = target[j] - weighted[j];
      if (vars[j].kind == Substitution::kShiftLower) d.lower[j] = std::move(residual);
      if (vars[j].kind == Substitution::kShiftUpper) d.upper[j] = std::move(residual);
    }
    return d;
  };

  auto current_column_values = [&]() {
    std::vector<Rational> values(columns);
    for (std::size_t i = 0; i < m; ++i) values[tab.basis()[i]] = tab.rhs(i);
    return values;
  };

  auto to_original = [&](const std::vector<Rational>& values, bool with_shift) {
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const VariableMap& v = vars[j];
      switch (v.kind) {
        case Substitution::kShiftLower:
          x[j] = (with_shift ? v.shift : Rational(0)) + values[v.column];
          break;
        case Substitution::kShiftUpper:
          x[j] = (with_shift ? v.shift : Rational(0)) - values[v.column];
          break;
        case Substitution::kSplit:
          x[j] = values[v.column] - values[v.column + 1];
          break;
      }
    }
    return x;
  };

  std::vector<bool> may_enter(columns, true);
  std::size_t unbounded_column = kNone;

  // Phase 1: maximize minus the sum of artificials.
  if (artificial_count > 0) {
    std::vector<Rational> phase1(columns, Rational(0));
    for (std::size_t c = first_artificial; c < columns; ++c) phase1[c] = -1;
    tab.price(phase1);
    if (tab.run(may_enter, &unbounded_column) != Tableau::Stop::kOptimal) {
      throw Error(ErrorCode::kInternal, "phase 1 reported an unbounded direction");
    }
    if (-tab.objective_row().back() < 0) {
      return Infeasible{to_dual(row_multipliers(phase1), std::vector<Rational>(n))};
    }
    // Drive zero-level artificials out of the basis where a structural or
    // slack column allows it; rows with none left are redundant.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_artificial) continue;
      for (std::size_t c = 0; c < first_artificial; ++c) {
        if (tab.at(i, c) != 0) {
          tab.pivot(i, c);
          break;
        }
      }
    }
    for (std::size_t c = first_artificial; c < columns; ++c) may_enter[c] = false;
  }

  // Phase 2 costs in substituted coordinates.
  std::vector<Rational> phase2(columns, Rational(0));
  Rational constant = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const VariableMap& v = vars[j];
    const Rational& c = program.objective[j];
    switch (v.kind) {
      case Substitution::kShiftLower:
        phase2[v.column] = c;
        constant += c * v.shift;
        break;
      case Substitution::kShiftUpper:
        phase2[v.column] = -c;
        constant += c * v.shift;
        break;
      case Substitution::kSplit:
        phase2[v.column] = c;
        phase2[v.column + 1] = -c;
        break;
    }
  }
  tab.price(phase2);
  if (tab.run(may_enter, &unbounded_column) == Tableau::Stop::kUnbounded) {
    std::vector<Rational> direction(columns, Rational(0));
    direction[unbounded_column] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      direction[tab.basis()[i]] = -tab.at(i, unbounded_column);
    }
    return Unbounded{to_original(current_column_values(), true),
                     to_original(direction, false)};
  }

  Optimal opt;
  opt.x = to_original(current_column_values(), true);
  opt.value = -tab.objective_row().back() + constant;
  opt.dual = to_dual(row_multipliers(phase2), program.objective);
  return opt;
}

bool verify_outcome(const LinearProgram& program, const Outcome& outcome) {
  try {
    validate(program);
  } catch (const Error&) {
    return false;
  }
  const std::size_t n = program.variable_count();

  if (const auto* opt = std::get_if<Optimal>(&outcome)) {
    if (!primal_feasible(program, opt->x)) return false;
    if (dot(program.objective, opt->x) != opt->value) return false;
    if (!dual_shape_ok(program, opt->dual, program.objective)) return false;
    if (dual_objective(program, opt->dual) != opt->value) return false;
    // Complementary slackness, checked explicitly.
    for (std::size_t i = 0; i < program.constraints.size(); ++i) {
      const auto& c = program.constraints[i];
      if (opt->dual.rows[i] != 0 && dot(c.coefficients, opt->x) != c.rhs) return false;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Bounds& b = bounds_of(program, j);
      if (opt->dual.lower[j] != 0 && opt->x[j] != *b.lower) return false;
      if (opt->dual.upper[j] != 0 && opt->x[j] != *b.upper) return false;
    }
    return true;
  }

  if (const auto* inf = std::get_if<Infeasible>(&outcome)) {
    if (!dual_shape_ok(program, inf->ray, std::vector<Rational>(n))) return false;
    return dual_objective(program, inf->ray) < 0;
  }

  const auto& unb = std::get<Unbounded>(outcome);
  if (!primal_feasible(program, unb.point)) return false;
  if (unb.ray.size() != n) return false;
  for (const auto& c : program.constraints) {
    if (!relation_holds(c.relation, dot(c.coefficients, unb.ray), Rational(0))) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = bounds_of(program, j);
    if (b.lower && unb.ray[j] < 0) return false;
    if (b.upper && unb.ray[j] > 0) return false;
  }
  return dot(program.objective, unb.ray) > 0;
}

}  // namespace kelvin::lp
