#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/measures.hpp"

namespace kelvin {

// A pair (change of condition, heating measure). Construction validates that
// the change of condition conserves mass, so every live instance does.
class Process {
 public:
  // Throws kSpaceMismatch or kMassNotConserved (message reports the total).
  Process(SignedMeasure delta_m, SignedMeasure q, std::optional<std::string> id = std::nullopt);

  static Process zero(const SpacePtr& space);

  const SignedMeasure& delta_m() const { return delta_m_; }
  const SignedMeasure& q() const { return q_; }
  const std::optional<std::string>& id() const { return id_; }
  const SpacePtr& space() const { return delta_m_.space(); }

  Process with_id(std::optional<std::string> id) const;

  Process operator+(const Process& other) const;
  Process operator-(const Process& other) const;
  // Componentwise equality of both measures; ids are ignored.
  bool operator==(const Process& other) const;

 private:
  SignedMeasure delta_m_;
  SignedMeasure q_;
  std::optional<std::string> id_;
};

inline Process make_process(SignedMeasure delta_m, SignedMeasure q) {
  return Process(std::move(delta_m), std::move(q));
}

bool is_cyclic(const Process& p);
// Cyclic with a nonzero, nonnegative heating measure.
bool is_forbidden(const Process& p);
// (alpha * delta_m, alpha * q). Throws kInvalidArgument for negative alpha.
Process cone_element(const Rational& alpha, const Process& p);
// Linear combination with arbitrary rational weights (used for certificate
// witnesses and history endpoints).
Process combine_processes(const SpacePtr& space, std::span<const Rational> weights,
                          std::span<const Process> processes);

// A finite state space with a generating set of processes; the theory's
// process set is the conic hull of the generators.
class TheorySpec {
 public:
  // Throws kSpaceMismatch when a process lives elsewhere and
  // kInvalidArgument on duplicate process ids.
  TheorySpec(SpacePtr space, std::vector<Process> processes);

  const SpacePtr& space() const { return space_; }
  const std::vector<Process>& processes() const { return processes_; }

  TheorySpec with_process(Process p) const;

 private:
  SpacePtr space_;
  std::vector<Process> processes_;
};

// Truncations of the two cautionary sequences over states in [0, 1]:
//   family A: (0, n d_1 - d_0),             n = 1..N
//   family B: (d_{1/n} - d_0, n d_{1/2}),    n = 1..N
// Labels are the coordinates written as rationals ("0", "1/3", "1/2", "1").
enum class ExampleFamily { kA, kB };

// Throws kInvalidArgument for n < 1.
TheorySpec generate_example(ExampleFamily family, int n);

}  // namespace kelvin
