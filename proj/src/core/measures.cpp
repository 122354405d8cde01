#include "core/measures.hpp"

#include <utility>

#include "core/error.hpp"

namespace kelvin {

std::shared_ptr<const StateSpace> StateSpace::create(
    std::vector<std::string> labels, std::optional<std::vector<Rational>> coordinates) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "state space must contain at least one state");
  }
  if (coordinates && coordinates->size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "coordinate count differs from state count");
  }
  std::shared_ptr<StateSpace> space(new StateSpace());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!space->index_.emplace(labels[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate state label \"" + labels[i] + "\"");
    }
  }
  space->labels_ = std::move(labels);
  space->coordinates_ = std::move(coordinates);
  return space;
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorCode::kUnknownLabel, "unknown state label \"" + std::string(label) + "\"");
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

SignedMeasure::SignedMeasure(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw Error(ErrorCode::kInvalidArgument, "measure requires a state space");
  values_.assign(space_->size(), Rational(0));
}

SignedMeasure::SignedMeasure(SpacePtr space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(ErrorCode::kInvalidArgument, "measure requires a state space");
  if (values_.size() != space_->size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "measure has " + std::to_string(values_.size()) + " components, space has " +
                    std::to_string(space_->size()) + " states");
  }
}

const Rational& SignedMeasure::at(std::string_view label) const {
  return values_[space_->index_of(label)];
}

bool SignedMeasure::is_zero() const {
  for (const auto& v : values_) {
    if (v != 0) return false;
  }
  return true;
}

bool SignedMeasure::is_nonnegative() const {
  for (const auto& v : values_) {
    if (v < 0) return false;
  }
  return true;
}

Rational SignedMeasure::integrate(std::span<const Rational> function) const {
  if (function.size() != values_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "function length differs from state count");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += function[i] * values_[i];
  return sum;
}

SignedMeasure SignedMeasure::operator-() const {
  SignedMeasure out(*this);
  for (auto& v : out.values_) v = -v;
  return out;
}

void SignedMeasure::require_same_space(const SignedMeasure& other) const {
  if (!same_space(space_, other.space_)) {
    throw Error(ErrorCode::kSpaceMismatch, "measures live on different state spaces");
  }
}

SignedMeasure& SignedMeasure::operator+=(const SignedMeasure& other) {
  require_same_space(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SignedMeasure& SignedMeasure::operator-=(const SignedMeasure& other) {
  require_same_space(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SignedMeasure& SignedMeasure::operator*=(const Rational& factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

bool SignedMeasure::operator==(const SignedMeasure& other) const {
  return same_space(space_, other.space_) && values_ == other.values_;
}

Condition::Condition(SignedMeasure measure) : measure_(std::move(measure)) {
  if (!measure_.is_nonnegative()) {
    throw Error(ErrorCode::kInvalidArgument, "condition must be a nonnegative measure");
  }
}

Rational total(const SignedMeasure& m) {
  Rational sum = 0;
  for (const auto& v : m.values()) sum += v;
  return sum;
}

Rational l1_norm(const SignedMeasure& m) {
  Rational sum = 0;
  for (const auto& v : m.values()) sum += abs(v);
  return sum;
}

Condition dirac(const SpacePtr& space, std::string_view label) {
  std::vector<Rational> values(space->size(), Rational(0));
  values[space->index_of(label)] = 1;
  return Condition(SignedMeasure(space, std::move(values)));
}

SignedMeasure combine(std::span<const Rational> coefficients,
                      std::span<const SignedMeasure> measures) {
  if (measures.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty combination needs an explicit state space");
  }
  return combine(measures.front().space(), coefficients, measures);
}

SignedMeasure combine(const SpacePtr& space, std::span<const Rational> coefficients,
                      std::span<const SignedMeasure> measures) {
  if (coefficients.size() != measures.size()) {
    throw Error(ErrorCode::kInvalidArgument, "coefficient count differs from measure count");
  }
  SignedMeasure out(space);
  for (std::size_t i = 0; i < measures.size(); ++i) {
    out += coefficients[i] * measures[i];
  }
  return out;
}

Condition negative_part(const SignedMeasure& m) {
  std::vector<Rational> values(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) values[i] = m[i] < 0 ? Rational(-m[i]) : Rational(0);
  return Condition(SignedMeasure(m.space(), std::move(values)));
}

Condition positive_part(const SignedMeasure& m) {
  std::vector<Rational> values(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) values[i] = m[i] > 0 ? m[i] : Rational(0);
  return Condition(SignedMeasure(m.space(), std::move(values)));
}

}  // namespace kelvin
