#pragma once

#include <string>
#include <vector>

#include "core/histories.hpp"

namespace kelvin {

struct MaterialPoint {
  std::string id;
  Rational mass;
};

// Body-level record of a process: material points with atomic masses, a
// time grid t_0 < ... < t_K, the state of every point at every grid time and
// the heat each point receives over every grid interval.
struct BodyProcessRecord {
  std::vector<MaterialPoint> points;
  std::vector<Rational> times;
  std::vector<std::vector<std::string>> states;  // [point][time index]
  std::vector<std::vector<Rational>> heat;        // [point][interval index]
};

// Throws kInvalidArgument for missing entries, nonpositive masses, repeated
// point ids, or a time grid that is not strictly increasing with K >= 1.
void validate(const BodyProcessRecord& record);

// Pushforward: q[s] sums the heat of every (point, interval) whose state at
// the interval's left end is s; dm is the final minus the initial mass
// distribution over states. Throws kUnknownLabel for states outside `space`.
Process derive_process(const BodyProcessRecord& record, const SpacePtr& space);

// Cumulative trajectory on the grid t_k - t_0; its endpoint equals
// derive_process(record, space).
ProcessHistory derive_history(const BodyProcessRecord& record, const SpacePtr& space);

// Union of two records over disjoint point sets sharing one time grid.
// Throws kInvalidArgument when the grids differ or point ids collide.
BodyProcessRecord merge_records(const BodyProcessRecord& a, const BodyProcessRecord& b);

}  // namespace kelvin
