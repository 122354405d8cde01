#include "core/ingest.hpp"

#include <set>

#include "core/error.hpp"

namespace kelvin {

void validate(const BodyProcessRecord& record) {
  if (record.times.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "record needs at least two sample times");
  }
  for (std::size_t k = 1; k < record.times.size(); ++k) {
    if (!(record.times[k - 1] < record.times[k])) {
      throw Error(ErrorCode::kInvalidArgument, "record times must be strictly increasing");
    }
  }
  if (record.states.size() != record.points.size() || record.heat.size() != record.points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "state and heat tables must cover every point");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < record.points.size(); ++i) {
    const auto& pt = record.points[i];
    if (!ids.insert(pt.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate point id \"" + pt.id + "\"");
    }
    if (pt.mass <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "point \"" + pt.id + "\" has nonpositive mass");
    }
    if (record.states[i].size() != record.times.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "point \"" + pt.id + "\" needs " + std::to_string(record.times.size()) +
                      " states, has " + std::to_string(record.states[i].size()));
    }
    if (record.heat[i].size() + 1 != record.times.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "point \"" + pt.id + "\" needs " + std::to_string(record.times.size() - 1) +
                      " heat increments, has " + std::to_string(record.heat[i].size()));
    }
  }
}

ProcessHistory derive_history(const BodyProcessRecord& record, const SpacePtr& space) {
  validate(record);
  const std::size_t points = record.points.size();
  const std::size_t samples = record.times.size();

  // State indices up front so unknown labels fail before any arithmetic.
  std::vector<std::vector<std::size_t>> state_index(points);
  for (std::size_t i = 0; i < points; ++i) {
    for (const auto& label : record.states[i]) state_index[i].push_back(space->index_of(label));
  }

  std::vector<HistorySample> out;
  std::vector<Rational> initial(space->size());
  for (std::size_t i = 0; i < points; ++i) initial[state_index[i][0]] += record.points[i].mass;

  std::vector<Rational> heat(space->size());
  for (std::size_t k = 0; k < samples; ++k) {
    if (k > 0) {
      for (std::size_t i = 0; i < points; ++i) heat[state_index[i][k - 1]] += record.heat[i][k - 1];
    }
    std::vector<Rational> current(space->size());
    for (std::size_t i = 0; i < points; ++i) current[state_index[i][k]] += record.points[i].mass;
    for (std::size_t s = 0; s < current.size(); ++s) current[s] -= initial[s];
    out.push_back({record.times[k] - record.times[0], SignedMeasure(space, std::move(current)),
                   SignedMeasure(space, heat)});
  }
  return ProcessHistory(std::move(out));
}

Process derive_process(const BodyProcessRecord& record, const SpacePtr& space) {
  validate(record);
  const std::size_t last = record.times.size() - 1;
  std::vector<Rational> dm(space->size());
  std::vector<Rational> q(space->size());
  for (std::size_t i = 0; i < record.points.size(); ++i) {
    const Rational& mass = record.points[i].mass;
    dm[space->index_of(record.states[i][last])] += mass;
    dm[space->index_of(record.states[i][0])] -= mass;
    for (std::size_t k = 0; k < last; ++k) {
      q[space->index_of(record.states[i][k])] += record.heat[i][k];
    }
  }
  return Process(SignedMeasure(space, std::move(dm)), SignedMeasure(space, std::move(q)));
}

BodyProcessRecord merge_records(const BodyProcessRecord& a, const BodyProcessRecord& b) {
  if (a.times != b.times) {
    throw Error(ErrorCode::kInvalidArgument, "merged records must share a time grid");
  }
  BodyProcessRecord out = a;
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  out.states.insert(out.states.end(), b.states.begin(), b.states.end());
  out.heat.insert(out.heat.end(), b.heat.begin(), b.heat.end());
  validate(out);
  return out;
}

}  // namespace kelvin
