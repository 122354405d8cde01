#include "doctest.h"

#include "core/error.hpp"
#include "core/ingest.hpp"
#include "support/generators.hpp"

using namespace kelvin;

namespace {

SignedMeasure m(const SpacePtr& s, std::vector<Rational> v) { return SignedMeasure(s, std::move(v)); }

BodyProcessRecord two_points() {
  BodyProcessRecord r;
  r.points = {{"p", 2}, {"q", 3}};
  r.times = {0, 1};
  r.states = {{"a", "b"}, {"a", "a"}};
  r.heat = {{5}, {-1}};
  return r;
}

}  // namespace

TEST_CASE("pushforward of a two-point record") {
  auto s = StateSpace::create({"a", "b"});
  const Process p = derive_process(two_points(), s);
  CHECK(p.delta_m() == m(s, {-2, 2}));
  CHECK(p.q() == m(s, {4, 0}));
  const auto h = derive_history(two_points(), s);
  CHECK(endpoint_process(h) == p);
}

TEST_CASE("heat is attributed to the state at the start of each interval") {
  auto s = StateSpace::create({"a", "b", "c"});
  BodyProcessRecord r;
  r.points = {{"x", 1}};
  r.times = {10, 11, 13, 14};
  r.states = {{"a", "b", "c", "a"}};
  r.heat = {{0, 7, 0}};
  const auto h = derive_history(r, s);
  CHECK(h.times() == std::vector<Rational>{0, 1, 3, 4});
  CHECK(h.value_at(1).q().is_zero());
  CHECK(h.value_at(3).q() == m(s, {0, 7, 0}));
  CHECK(h.value_at(4).q() == m(s, {0, 7, 0}));
  CHECK(h.value_at(1).delta_m() == m(s, {-1, 1, 0}));
  CHECK(endpoint_process(h).delta_m().is_zero());
  CHECK(restrict_history(h, 1, 3).q() == m(s, {0, 7, 0}));
}

TEST_CASE("malformed records are rejected") {
  auto s = StateSpace::create({"a", "b"});
  auto r = two_points();
  r.points[1].mass = 0;
  CHECK_THROWS_AS(derive_process(r, s), Error);
  r = two_points();
  r.points[1].id = "p";
  CHECK_THROWS_AS(derive_process(r, s), Error);
  r = two_points();
  r.times = {1, 1};
  CHECK_THROWS_AS(derive_process(r, s), Error);
  r = two_points();
  r.heat[0].push_back(1);
  CHECK_THROWS_AS(derive_process(r, s), Error);
  r = two_points();
  r.states[0][1] = "z";
  try {
    derive_process(r, s);
    FAIL("expected unknown label");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownLabel);
  }
}

TEST_CASE("property: ingestion is additive over disjoint point sets") {
  testing::Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = testing::labeled_space(static_cast<std::size_t>(g.integer(1, 4)));
    std::vector<Rational> times{0};
    for (int k = g.integer(1, 4); k > 0; --k) times.push_back(times.back() + g.positive_rational(3, 2));
    const auto a = testing::random_record(g, s, "a", times);
    const auto b = testing::random_record(g, s, "b", times);
    const auto merged = merge_records(a, b);
    CHECK(derive_process(merged, s) == derive_process(a, s) + derive_process(b, s));
    CHECK(endpoint_process(derive_history(merged, s)) == derive_process(merged, s));
    CHECK(total(derive_process(a, s).delta_m()) == 0);
  }
  CHECK_THROWS_AS(merge_records(two_points(), two_points()), Error);
}
