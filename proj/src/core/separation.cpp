#include "core/separation.hpp"

#include <string>
#include <utility>

namespace kelvin {

std::vector<Rational> ClausiusDuhemPair::temperature() const {
  std::vector<Rational> t;
  t.reserve(beta.size());
  for (const auto& b : beta) {
    if (b == 0) throw Error(ErrorCode::kInvalidArgument, "coldness is zero; temperature undefined");
    t.emplace_back(1 / b);
  }
  return t;
}

lp::LinearProgram violation_program(const TheorySpec& theory) {
  const auto& procs = theory.processes();
  const std::size_t k = procs.size();
  const std::size_t n = theory.space()->size();

  lp::LinearProgram prog;
  prog.objective.assign(k, Rational(-1));
  prog.bounds.assign(k, lp::Bounds{Rational(0), std::nullopt});
  for (std::size_t s = 0; s < n; ++s) {
    lp::Constraint mass{std::vector<Rational>(k), lp::Relation::kEqual, Rational(0)};
    lp::Constraint heat{std::vector<Rational>(k), lp::Relation::kGreaterEqual, Rational(0)};
    for (std::size_t i = 0; i < k; ++i) {
      mass.coefficients[i] = procs[i].delta_m()[s];
      heat.coefficients[i] = procs[i].q()[s];
    }
    prog.constraints.push_back(std::move(mass));
    prog.constraints.push_back(std::move(heat));
  }
  lp::Constraint normalization{std::vector<Rational>(k), lp::Relation::kEqual, Rational(1)};
  for (std::size_t i = 0; i < k; ++i) normalization.coefficients[i] = total(procs[i].q());
  prog.constraints.push_back(std::move(normalization));
  return prog;
}

lp::LinearProgram synthesis_program(const TheorySpec& theory) {
  const auto& procs = theory.processes();
  const std::size_t n = theory.space()->size();
  const std::size_t vars = 2 * n + 1;
  const std::size_t t_index = 2 * n;

  lp::LinearProgram prog;
  prog.objective.assign(vars, Rational(0));
  prog.objective[t_index] = 1;
  prog.bounds.resize(vars);
  for (std::size_t s = 0; s < n; ++s) {
    prog.bounds[s] = {Rational(-1), Rational(1)};
    prog.bounds[n + s] = {Rational(0), Rational(1)};
  }
  prog.bounds[t_index] = {Rational(0), std::nullopt};

  for (const auto& p : procs) {
    lp::Constraint c{std::vector<Rational>(vars), lp::Relation::kGreaterEqual, Rational(0)};
    for (std::size_t s = 0; s < n; ++s) {
      c.coefficients[s] = p.delta_m()[s];
      c.coefficients[n + s] = -p.q()[s];
    }
    prog.constraints.push_back(std::move(c));
  }
  for (std::size_t s = 0; s < n; ++s) {
    lp::Constraint c{std::vector<Rational>(vars), lp::Relation::kLessEqual, Rational(0)};
    c.coefficients[t_index] = 1;
    c.coefficients[n + s] = -1;
    prog.constraints.push_back(std::move(c));
  }
  return prog;
}

std::optional<ViolationCertificate> find_violation(const TheorySpec& theory) {
  const auto prog = violation_program(theory);
  const auto outcome = lp::solve(prog);
  if (std::holds_alternative<lp::Infeasible>(outcome)) return std::nullopt;
  const auto* opt = std::get_if<lp::Optimal>(&outcome);
  if (!opt) throw Error(ErrorCode::kInternal, "violation program reported unbounded");
  Process witness = combine_processes(theory.space(), opt->x, theory.processes());
  return ViolationCertificate{opt->x, std::move(witness)};
}

SynthesisOptimum solve_synthesis(const TheorySpec& theory) {
  const auto prog = synthesis_program(theory);
  const auto outcome = lp::solve(prog);
  const auto* opt = std::get_if<lp::Optimal>(&outcome);
  if (!opt) throw Error(ErrorCode::kInternal, "synthesis program has no optimum");
  const std::size_t n = theory.space()->size();
  ClausiusDuhemPair pair;
  pair.eta.assign(opt->x.begin(), opt->x.begin() + static_cast<std::ptrdiff_t>(n));
  pair.beta.assign(opt->x.begin() + static_cast<std::ptrdiff_t>(n),
                   opt->x.begin() + static_cast<std::ptrdiff_t>(2 * n));
  return SynthesisOptimum{opt->value, std::move(pair)};
}

ClausiusDuhemPair synthesize_cd_pair(const TheorySpec& theory,
                                     std::optional<std::string_view> gauge_state) {
  const std::size_t gauge = gauge_state ? theory.space()->index_of(*gauge_state) : 0;
  auto optimum = solve_synthesis(theory);
  if (optimum.t_star <= 0) {
    auto certificate = find_violation(theory);
    if (!certificate) {
      throw Error(ErrorCode::kInternal,
                  "synthesis optimum is zero but the violation program is infeasible");
    }
    throw NotKelvinPlanckError(std::move(*certificate));
  }
  // Every dm totals zero, so a constant shift of eta leaves all margins fixed.
  const Rational offset = optimum.pair.eta[gauge];
  for (auto& e : optimum.pair.eta) e -= offset;
  return std::move(optimum.pair);
}

KPVerdict check_kelvin_planck(const TheorySpec& theory) {
  if (auto certificate = find_violation(theory)) {
    return Violated{std::move(*certificate)};
  }
  try {
    return Compliant{synthesize_cd_pair(theory)};
  } catch (const NotKelvinPlanckError&) {
    throw Error(ErrorCode::kInternal,
                "violation program infeasible yet no Clausius-Duhem pair was found");
  }
}

MarginReport verify_cd_pair(const TheorySpec& theory, const ClausiusDuhemPair& pair) {
  MarginReport report;
  const std::size_t n = theory.space()->size();
  if (pair.eta.size() != n || pair.beta.size() != n) return report;
  report.beta_positive = true;
  for (const auto& b : pair.beta) {
    if (b <= 0) report.beta_positive = false;
  }
  bool margins_ok = true;
  for (const auto& p : theory.processes()) {
    Rational margin = p.delta_m().integrate(pair.eta) - p.q().integrate(pair.beta);
    if (margin < 0) margins_ok = false;
    report.margins.push_back(std::move(margin));
  }
  report.passed = report.beta_positive && margins_ok;
  return report;
}

ViolationChecks inspect_violation(const TheorySpec& theory, std::span<const Rational> lambda) {
  ViolationChecks checks;
  const auto& procs = theory.processes();
  if (lambda.size() != procs.size()) return checks;
  checks.weights_match = true;
  checks.nonnegative = true;
  for (const auto& l : lambda) {
    if (l < 0) checks.nonnegative = false;
  }
  const Process w = combine_processes(theory.space(), lambda, procs);
  checks.cyclic = w.delta_m().is_zero();
  checks.heat_nonnegative = w.q().is_nonnegative();
  checks.normalized = total(w.q()) == 1;
  return checks;
}

bool verify_violation(const TheorySpec& theory, const ViolationCertificate& certificate) {
  if (!inspect_violation(theory, certificate.lambda).passed()) return false;
  const Process expected = combine_processes(theory.space(), certificate.lambda, theory.processes());
  return same_space(certificate.witness.space(), theory.space()) && certificate.witness == expected;
}

DirectionReport analyze_directions(std::span<const Process> family) {
  if (family.empty()) throw Error(ErrorCode::kInvalidArgument, "direction analysis needs a nonempty family");
  const SpacePtr& space = family.front().space();
  DirectionReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Process& p = family[i];
    if (!same_space(space, p.space())) {
      throw Error(ErrorCode::kSpaceMismatch, "family member " + std::to_string(i) + " lives on another space");
    }
    Rational norm = l1_norm(p.delta_m()) + l1_norm(p.q());
    if (norm == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "family member " + std::to_string(i) + " is the zero process and has no direction");
    }
    Process normalized = cone_element(1 / norm, p);
    Rational distance = l1_norm(normalized.delta_m()) + total(negative_part(normalized.q()));
    Process nearest(SignedMeasure(space), positive_part(normalized.q()).measure());
    report.entries.push_back({std::move(norm), std::move(normalized), std::move(distance),
                              std::move(nearest)});
  }
  report.strictly_decreasing = report.entries.size() >= 2;
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    if (!(report.entries[i].distance < report.entries[i - 1].distance)) {
      report.strictly_decreasing = false;
    }
  }
  const Process& last = report.entries.back().nearest;
  const Rational heat = total(last.q());
  if (heat > 0) report.limit_direction = cone_element(1 / heat, last);
  return report;
}

}  // namespace kelvin
