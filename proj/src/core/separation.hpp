#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "core/error.hpp"
#include "core/exactlp.hpp"
#include "core/theory.hpp"

namespace kelvin {

// Per-state specific entropy eta and coldness beta = 1/T. A pair certifies a
// theory when eta . dm - beta . q >= 0 for every generator and beta > 0.
struct ClausiusDuhemPair {
  std::vector<Rational> eta;
  std::vector<Rational> beta;

  // 1/beta per state. Throws kInvalidArgument when some beta is zero.
  std::vector<Rational> temperature() const;
};

// Nonnegative weights on the generators whose combination is cyclic with a
// nonnegative heating measure of total 1.
struct ViolationCertificate {
  std::vector<Rational> lambda;
  Process witness;
};

struct Compliant {
  ClausiusDuhemPair pair;
};

struct Violated {
  ViolationCertificate certificate;
};

using KPVerdict = std::variant<Compliant, Violated>;

class NotKelvinPlanckError : public Error {
 public:
  explicit NotKelvinPlanckError(ViolationCertificate certificate)
      : Error(ErrorCode::kNotKelvinPlanck,
              "theory violates the Kelvin-Planck condition; no Clausius-Duhem pair exists"),
        certificate_(std::move(certificate)) {}

  const ViolationCertificate& certificate() const { return certificate_; }

 private:
  ViolationCertificate certificate_;
};

// Feasibility LP over lambda >= 0:
//   sum lambda_i dm_i = 0,  sum lambda_i q_i >= 0,  total(sum lambda_i q_i) = 1,
// maximizing -sum lambda_i so the returned weights are small.
lp::LinearProgram violation_program(const TheorySpec& theory);

// Variables (eta_0.., beta_0.., t); maximize t subject to
//   eta . dm_i - beta . q_i >= 0,  t <= beta_s <= 1,  -1 <= eta_s <= 1,
// with beta, t >= 0 (the zero point is feasible, so t* >= 0 either way).
lp::LinearProgram synthesis_program(const TheorySpec& theory);

std::optional<ViolationCertificate> find_violation(const TheorySpec& theory);

struct SynthesisOptimum {
  Rational t_star;
  ClausiusDuhemPair pair;  // raw optimizer, before gauging
};
SynthesisOptimum solve_synthesis(const TheorySpec& theory);

// Throws NotKelvinPlanckError when t* = 0 and kUnknownLabel for a bad gauge
// state. The returned eta vanishes at the gauge state (default: first state).
ClausiusDuhemPair synthesize_cd_pair(const TheorySpec& theory,
                                     std::optional<std::string_view> gauge_state = std::nullopt);

// Violation LP first; synthesis only when it is infeasible. Throws
// kInternal if neither branch produces a certificate.
KPVerdict check_kelvin_planck(const TheorySpec& theory);

struct MarginReport {
  std::vector<Rational> margins;  // eta . dm_i - beta . q_i, per generator
  bool beta_positive = false;
  bool passed = false;
};
MarginReport verify_cd_pair(const TheorySpec& theory, const ClausiusDuhemPair& pair);

// Individual certificate conditions, for diagnostics.
struct ViolationChecks {
  bool weights_match = false;  // one weight per generator
  bool nonnegative = false;
  bool cyclic = false;
  bool heat_nonnegative = false;
  bool normalized = false;  // total heat exactly 1

  bool passed() const {
    return weights_match && nonnegative && cyclic && heat_nonnegative && normalized;
  }
};
ViolationChecks inspect_violation(const TheorySpec& theory, std::span<const Rational> lambda);

// All of inspect_violation plus an exact match of the stored witness.
bool verify_violation(const TheorySpec& theory, const ViolationCertificate& certificate);

struct DirectionEntry {
  Rational norm;       // ||dm||_1 + ||q||_1
  Process normalized;  // p / norm
  Rational distance;   // ||dm^||_1 + ||(q^)^-||_1, L1 distance to the forbidden cone
  Process nearest;     // (0, (q^)^+), the closest element of (0, M+)
};

struct DirectionReport {
  std::vector<DirectionEntry> entries;
  // True when there are at least two entries and each distance is strictly
  // smaller than the previous one.
  bool strictly_decreasing = false;
  // The nearest forbidden element of the last entry, rescaled to unit heat;
  // absent when that heating measure has no positive part.
  std::optional<Process> limit_direction;
};

// Throws kInvalidArgument for an empty family or a zero process,
// kSpaceMismatch when the family spans several spaces.
DirectionReport analyze_directions(std::span<const Process> family);

}  // namespace kelvin
