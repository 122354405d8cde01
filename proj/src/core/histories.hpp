#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/theory.hpp"

namespace kelvin {

struct HistorySample {
  Rational time;
  SignedMeasure delta_m;  // cumulative change of condition since time 0
  SignedMeasure q;        // cumulative heating measure since time 0
};

// A time-sampled trajectory (delta_m(t), q(t)) on [0, duration]. Between
// samples the trajectory holds the value of the latest sample at or before
// t, so inserting extra grid points never changes it.
class ProcessHistory {
 public:
  // Validates: at least two samples, times strictly increasing from 0 to a
  // positive duration, both measures zero at time 0, mass conserved at every
  // sample, and a single shared space.
  explicit ProcessHistory(std::vector<HistorySample> samples);

  // Zero trajectory sampled at 0 and duration.
  static ProcessHistory zero(const SpacePtr& space, const Rational& duration);

  const SpacePtr& space() const { return samples_.front().delta_m.space(); }
  const Rational& duration() const { return samples_.back().time; }
  const std::vector<HistorySample>& samples() const { return samples_; }
  std::vector<Rational> times() const;

  bool on_grid(const Rational& t) const;
  // Step-interpolated value at t in [0, duration]. Throws kInvalidArgument
  // outside that range.
  Process value_at(const Rational& t) const;

  // Same trajectory sampled on the union of the current grid and `extra`.
  ProcessHistory refine(std::span<const Rational> extra) const;

 private:
  std::vector<HistorySample> samples_;
};

Process endpoint_process(const ProcessHistory& h);

// (dm(b) - dm(a), q(b) - q(a)). Throws kOffGrid unless both ends are grid
// points and kInvalidArgument unless 0 <= a < b <= duration.
Process restrict_history(const ProcessHistory& h, const Rational& a, const Rational& b);

// Pointwise sum on the union grid. Throws kDurationMismatch.
ProcessHistory parallel_compose(const ProcessHistory& h1, const ProcessHistory& h2);

// The N consecutive segments of length d/N run simultaneously: the result
// has duration d/N and value sum_k [x(k d/N + s) - x(k d/N)] at local time s.
// The grid is refined with the points k d/N first when needed.
ProcessHistory subdivide(const ProcessHistory& h, std::uint64_t n);

// n-fold parallel replication (n >= 1), built by repeated composition.
ProcessHistory replicate(const ProcessHistory& h, std::uint64_t n);

// Trajectory multiplied by a positive rational factor.
ProcessHistory scale(const ProcessHistory& h, const Rational& factor);

struct CombinedHistory {
  Process endpoint;
  ProcessHistory history;
};

// With d1/d2 = N1/N2 in lowest terms, composes subdivide(h1, N1) with
// subdivide(h2, N2); both have duration d1/N1 = d2/N2.
CombinedHistory rational_sum(const ProcessHistory& h1, const ProcessHistory& h2);

struct ConicCombination {
  Process endpoint;               // sum alpha_i endpoint(h_i)
  ProcessHistory history;         // replicated sum, scaled by 1/common_denominator
  Rational common_denominator;    // lcm of the coefficient denominators
  std::vector<Rational> replicas; // integer copies of each h_i before scaling
};

// Writes alpha_i = n_i/m_i, replicates h_i n_i * (M/m_i) times with M the
// common denominator, folds the replicas with rational_sum, and scales the
// resulting trajectory by 1/M. Throws kInvalidArgument for an empty list or
// a nonpositive coefficient.
ConicCombination conic_combination(std::span<const std::pair<Rational, ProcessHistory>> items);

}  // namespace kelvin
