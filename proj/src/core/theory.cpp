#include "core/theory.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "core/error.hpp"

namespace kelvin {

Process::Process(SignedMeasure delta_m, SignedMeasure q, std::optional<std::string> id)
    : delta_m_(std::move(delta_m)), q_(std::move(q)), id_(std::move(id)) {
  if (!same_space(delta_m_.space(), q_.space())) {
    throw Error(ErrorCode::kSpaceMismatch, "delta_m and q live on different state spaces");
  }
  const Rational mass = total(delta_m_);
  if (mass != 0) {
    throw Error(ErrorCode::kMassNotConserved,
                "change of condition has total " + format_rational(mass) + ", expected 0" +
                    (id_ ? " (process \"" + *id_ + "\")" : std::string()));
  }
}

Process Process::zero(const SpacePtr& space) {
  return Process(SignedMeasure(space), SignedMeasure(space));
}

Process Process::with_id(std::optional<std::string> id) const {
  Process out(*this);
  out.id_ = std::move(id);
  return out;
}

Process Process::operator+(const Process& other) const {
  return Process(delta_m_ + other.delta_m_, q_ + other.q_);
}

Process Process::operator-(const Process& other) const {
  return Process(delta_m_ - other.delta_m_, q_ - other.q_);
}

bool Process::operator==(const Process& other) const {
  return delta_m_ == other.delta_m_ && q_ == other.q_;
}

bool is_cyclic(const Process& p) { return p.delta_m().is_zero(); }

bool is_forbidden(const Process& p) {
  return is_cyclic(p) && p.q().is_nonnegative() && !p.q().is_zero();
}

Process cone_element(const Rational& alpha, const Process& p) {
  if (alpha < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cone scaling must be nonnegative, got " + format_rational(alpha));
  }
  return Process(alpha * p.delta_m(), alpha * p.q(), p.id());
}

Process combine_processes(const SpacePtr& space, std::span<const Rational> weights,
                          std::span<const Process> processes) {
  if (weights.size() != processes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weight count differs from process count");
  }
  SignedMeasure dm(space);
  SignedMeasure q(space);
  for (std::size_t i = 0; i < processes.size(); ++i) {
    if (weights[i] == 0) continue;
    dm += weights[i] * processes[i].delta_m();
    q += weights[i] * processes[i].q();
  }
  return Process(std::move(dm), std::move(q));
}

TheorySpec::TheorySpec(SpacePtr space, std::vector<Process> processes)
    : space_(std::move(space)), processes_(std::move(processes)) {
  if (!space_) throw Error(ErrorCode::kInvalidArgument, "theory requires a state space");
  std::set<std::string> ids;
  for (const auto& p : processes_) {
    if (!same_space(space_, p.space())) {
      throw Error(ErrorCode::kSpaceMismatch, "process does not live on the theory's state space");
    }
    if (p.id() && !ids.insert(*p.id()).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate process id \"" + *p.id() + "\"");
    }
  }
}

TheorySpec TheorySpec::with_process(Process p) const {
  auto processes = processes_;
  processes.push_back(std::move(p));
  return TheorySpec(space_, std::move(processes));
}

TheorySpec generate_example(ExampleFamily family, int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "N must be at least 1, got " + std::to_string(n));
  }
  std::vector<Rational> coords;
  if (family == ExampleFamily::kA) {
    coords = {Rational(0), Rational(1)};
  } else {
    coords.push_back(Rational(0));
    for (int k = 1; k <= n; ++k) coords.emplace_back(1, k);
    coords.emplace_back(1, 2);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  }
  std::vector<std::string> labels;
  for (const auto& c : coords) labels.push_back(format_rational(c));
  auto space = StateSpace::create(labels, coords);

  std::vector<Process> processes;
  for (int k = 1; k <= n; ++k) {
    const std::string id = "n=" + std::to_string(k);
    if (family == ExampleFamily::kA) {
      SignedMeasure q = Rational(k) * dirac(space, "1").measure() - dirac(space, "0").measure();
      processes.emplace_back(SignedMeasure(space), std::move(q), id);
    } else {
      const std::string at = format_rational(Rational(1, k));
      SignedMeasure dm = dirac(space, at).measure() - dirac(space, "0").measure();
      SignedMeasure q = Rational(k) * dirac(space, "1/2").measure();
      processes.emplace_back(std::move(dm), std::move(q), id);
    }
  }
  return TheorySpec(std::move(space), std::move(processes));
}

}  // namespace kelvin
