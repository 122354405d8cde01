#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/rational.hpp"

namespace kelvin {

// A finite, ordered set of opaque state labels. The order fixes the index of
// every measure component built on the space.
class StateSpace {
 public:
  // Throws kInvalidArgument when empty, when labels repeat, or when the
  // coordinate list length differs from the label count.
  static std::shared_ptr<const StateSpace> create(
      std::vector<std::string> labels,
      std::optional<std::vector<Rational>> coordinates = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::optional<std::vector<Rational>>& coordinates() const { return coordinates_; }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws kUnknownLabel naming the label.
  std::size_t index_of(std::string_view label) const;

  bool operator==(const StateSpace& other) const { return labels_ == other.labels_; }

 private:
  StateSpace() = default;

  std::vector<std::string> labels_;
  std::optional<std::vector<Rational>> coordinates_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

// Two handles denote the same space when their label sequences agree.
bool same_space(const SpacePtr& a, const SpacePtr& b);

// Exact rational set function on a finite state space, stored densely in
// state order.
class SignedMeasure {
 public:
  explicit SignedMeasure(SpacePtr space);
  SignedMeasure(SpacePtr space, std::vector<Rational> values);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Rational> values() const { return values_; }
  const Rational& operator[](std::size_t index) const { return values_[index]; }
  const Rational& at(std::string_view label) const;

  bool is_zero() const;
  bool is_nonnegative() const;

  // Integral of a per-state function against this measure.
  Rational integrate(std::span<const Rational> function) const;

  SignedMeasure operator-() const;
  SignedMeasure& operator+=(const SignedMeasure& other);
  SignedMeasure& operator-=(const SignedMeasure& other);
  SignedMeasure& operator*=(const Rational& factor);

  friend SignedMeasure operator+(SignedMeasure a, const SignedMeasure& b) { return a += b; }
  friend SignedMeasure operator-(SignedMeasure a, const SignedMeasure& b) { return a -= b; }
  friend SignedMeasure operator*(const Rational& c, SignedMeasure m) { return m *= c; }

  bool operator==(const SignedMeasure& other) const;

 private:
  void require_same_space(const SignedMeasure& other) const;

  SpacePtr space_;
  std::vector<Rational> values_;
};

// A nonnegative measure: the condition of a body.
class Condition {
 public:
  // Throws kInvalidArgument when any component is negative.
  explicit Condition(SignedMeasure measure);

  const SignedMeasure& measure() const { return measure_; }
  operator const SignedMeasure&() const { return measure_; }  // NOLINT

 private:
  SignedMeasure measure_;
};

Rational total(const SignedMeasure& m);
Rational l1_norm(const SignedMeasure& m);

Condition dirac(const SpacePtr& space, std::string_view label);

// Componentwise linear combination. Throws kInvalidArgument on length
// mismatch, kSpaceMismatch when the measures disagree on the space. An empty
// combination needs the space supplied explicitly.
SignedMeasure combine(std::span<const Rational> coefficients,
                      std::span<const SignedMeasure> measures);
SignedMeasure combine(const SpacePtr& space, std::span<const Rational> coefficients,
                      std::span<const SignedMeasure> measures);

// Componentwise max(-value, 0).
Condition negative_part(const SignedMeasure& m);
// Componentwise max(value, 0).
Condition positive_part(const SignedMeasure& m);

}  // namespace kelvin
