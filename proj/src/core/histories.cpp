#include "core/histories.hpp"

#include <algorithm>
#include <string>

#include "core/error.hpp"

namespace kelvin {
namespace {

std::uint64_t to_count(const mpz_class& value, const char* what) {
  if (value < 1 || !value.fits_ulong_p()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " out of range: " + value.get_str());
  }
  return value.get_ui();
}

std::vector<Rational> merged_grid(std::vector<Rational> times) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

HistorySample sample_of(const Rational& t, Process value) {
  return HistorySample{t, value.delta_m(), value.q()};
}

}  // namespace

ProcessHistory::ProcessHistory(std::vector<HistorySample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a history needs at least two samples");
  }
  const SpacePtr& sp = samples_.front().delta_m.space();
  if (samples_.front().time != 0) {
    throw Error(ErrorCode::kInvalidArgument, "history must start at time 0");
  }
  if (!samples_.front().delta_m.is_zero() || !samples_.front().q.is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "history must be zero at time 0");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (i > 0 && !(samples_[i - 1].time < s.time)) {
      throw Error(ErrorCode::kInvalidArgument, "sample times must be strictly increasing");
    }
    if (!same_space(sp, s.delta_m.space()) || !same_space(sp, s.q.space())) {
      throw Error(ErrorCode::kSpaceMismatch, "history samples live on different state spaces");
    }
    const Rational mass = total(s.delta_m);
    if (mass != 0) {
      throw Error(ErrorCode::kMassNotConserved, "sample at t=" + format_rational(s.time) +
                                                    " has delta_m total " + format_rational(mass));
    }
  }
}

ProcessHistory ProcessHistory::zero(const SpacePtr& space, const Rational& duration) {
  if (duration <= 0) throw Error(ErrorCode::kInvalidArgument, "duration must be positive");
  std::vector<HistorySample> samples;
  samples.push_back({Rational(0), SignedMeasure(space), SignedMeasure(space)});
  samples.push_back({duration, SignedMeasure(space), SignedMeasure(space)});
  return ProcessHistory(std::move(samples));
}

std::vector<Rational> ProcessHistory::times() const {
  std::vector<Rational> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.time);
  return out;
}

bool ProcessHistory::on_grid(const Rational& t) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const HistorySample& s, const Rational& v) { return s.time < v; });
  return it != samples_.end() && it->time == t;
}

Process ProcessHistory::value_at(const Rational& t) const {
  if (t < 0 || t > duration()) {
    throw Error(ErrorCode::kInvalidArgument,
                "time " + format_rational(t) + " outside [0, " + format_rational(duration()) + "]");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](const Rational& v, const HistorySample& s) { return v < s.time; });
  --it;
  return Process(it->delta_m, it->q);
}

ProcessHistory ProcessHistory::refine(std::span<const Rational> extra) const {
  std::vector<Rational> grid = times();
  for (const auto& t : extra) {
    if (t < 0 || t > duration()) {
      throw Error(ErrorCode::kInvalidArgument, "refinement point outside the history's interval");
    }
    grid.push_back(t);
  }
  grid = merged_grid(std::move(grid));
  std::vector<HistorySample> samples;
  samples.reserve(grid.size());
  for (const auto& t : grid) samples.push_back(sample_of(t, value_at(t)));
  return ProcessHistory(std::move(samples));
}

Process endpoint_process(const ProcessHistory& h) {
  const auto& last = h.samples().back();
  return Process(last.delta_m, last.q);
}

Process restrict_history(const ProcessHistory& h, const Rational& a, const Rational& b) {
  if (!(0 <= a && a < b && b <= h.duration())) {
    throw Error(ErrorCode::kInvalidArgument, "restriction needs 0 <= a < b <= duration, got [" +
                                                 format_rational(a) + ", " + format_rational(b) + "]");
  }
  for (const Rational* t : {&a, &b}) {
    if (!h.on_grid(*t)) {
      throw Error(ErrorCode::kOffGrid,
                  "time " + format_rational(*t) + " is not a sample point; refine the grid first");
    }
  }
  return h.value_at(b) - h.value_at(a);
}

ProcessHistory parallel_compose(const ProcessHistory& h1, const ProcessHistory& h2) {
  if (h1.duration() != h2.duration()) {
    throw Error(ErrorCode::kDurationMismatch, "durations differ: " + format_rational(h1.duration()) +
                                                  " vs " + format_rational(h2.duration()));
  }
  if (!same_space(h1.space(), h2.space())) {
    throw Error(ErrorCode::kSpaceMismatch, "histories live on different state spaces");
  }
  std::vector<Rational> grid = h1.times();
  for (const auto& s : h2.samples()) grid.push_back(s.time);
  grid = merged_grid(std::move(grid));
  std::vector<HistorySample> samples;
  samples.reserve(grid.size());
  for (const auto& t : grid) samples.push_back(sample_of(t, h1.value_at(t) + h2.value_at(t)));
  return ProcessHistory(std::move(samples));
}

ProcessHistory subdivide(const ProcessHistory& h, std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "subdivision count must be at least 1");
  if (n == 1) return h;
  const Rational length = h.duration() / Rational(mpz_class(n));

  std::vector<Rational> cuts;
  for (std::uint64_t k = 0; k <= n; ++k) cuts.emplace_back(length * mpz_class(k));
  const ProcessHistory fine = h.refine(cuts);

  std::vector<Rational> local;
  for (const auto& s : fine.samples()) {
    const Rational offset = s.time / length;
    mpz_class k = offset.get_num() / offset.get_den();
    Rational shifted = s.time - length * k;
    // The right end of a segment also belongs to the segment before it.
    if (shifted == 0 && k > 0) shifted = length;
    local.push_back(shifted);
  }
  local = merged_grid(std::move(local));

  std::vector<Process> bases;
  for (std::uint64_t k = 0; k < n; ++k) bases.push_back(fine.value_at(cuts[k]));

  std::vector<HistorySample> samples;
  samples.reserve(local.size());
  for (const auto& s : local) {
    Process acc = Process::zero(h.space());
    for (std::uint64_t k = 0; k < n; ++k) acc = acc + (fine.value_at(cuts[k] + s) - bases[k]);
    samples.push_back(sample_of(s, std::move(acc)));
  }
  return ProcessHistory(std::move(samples));
}

ProcessHistory replicate(const ProcessHistory& h, std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "replication count must be at least 1");
  // Binary doubling: each step is a parallel composition.
  std::optional<ProcessHistory> result;
  ProcessHistory power = h;
  for (;;) {
    if (n & 1U) result = result ? parallel_compose(*result, power) : power;
    n >>= 1U;
    if (n == 0) break;
    power = parallel_compose(power, power);
  }
  return *result;
}

ProcessHistory scale(const ProcessHistory& h, const Rational& factor) {
  if (factor <= 0) throw Error(ErrorCode::kInvalidArgument, "history scale factor must be positive");
  std::vector<HistorySample> samples;
  samples.reserve(h.samples().size());
  for (const auto& s : h.samples()) samples.push_back({s.time, factor * s.delta_m, factor * s.q});
  return ProcessHistory(std::move(samples));
}

CombinedHistory rational_sum(const ProcessHistory& h1, const ProcessHistory& h2) {
  const Rational ratio = h1.duration() / h2.duration();
  const std::uint64_t n1 = to_count(ratio.get_num(), "duration ratio numerator");
  const std::uint64_t n2 = to_count(ratio.get_den(), "duration ratio denominator");
  ProcessHistory sum = parallel_compose(subdivide(h1, n1), subdivide(h2, n2));
  Process endpoint = endpoint_process(sum);
  return CombinedHistory{std::move(endpoint), std::move(sum)};
}

ConicCombination conic_combination(std::span<const std::pair<Rational, ProcessHistory>> items) {
  if (items.empty()) throw Error(ErrorCode::kInvalidArgument, "conic combination needs at least one item");
  mpz_class common = 1;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Rational& alpha = items[i].first;
    if (alpha <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "coefficient " + std::to_string(i) +
                                                   " must be positive, got " + format_rational(alpha));
    }
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), alpha.get_den().get_mpz_t());
  }

  std::vector<Rational> replicas;
  std::optional<ProcessHistory> acc;
  for (const auto& [alpha, history] : items) {
    const mpz_class copies = alpha.get_num() * (common / alpha.get_den());
    replicas.emplace_back(copies);
    ProcessHistory replicated = replicate(history, to_count(copies, "replication count"));
    acc = acc ? rational_sum(*acc, replicated).history : std::move(replicated);
  }
  ProcessHistory scaled = scale(*acc, Rational(1) / Rational(common));
  Process endpoint = endpoint_process(scaled);
  return ConicCombination{std::move(endpoint), std::move(scaled), Rational(common),
                          std::move(replicas)};
}

}  // namespace kelvin
