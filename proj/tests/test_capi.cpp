#include "doctest.h"

#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "kelvin/kelvin.h"

using Json = nlohmann::ordered_json;

namespace {

// Takes ownership of a returned string and parses it.
Json take(char* text) {
  REQUIRE(text != nullptr);
  Json doc = Json::parse(text);
  kv_string_free(text);
  return doc;
}

const char* kLeak = R"({"states": ["a"], "processes": [{"id": "leak", "delta_m": {}, "q": {"a": 1}}]})";

}  // namespace

TEST_CASE("status names and null arguments") {
  CHECK(std::string(kv_status_name(KV_ERR_PARSE)) == "parse_error");
  CHECK(std::string(kv_version()) == "1.0.0");
  kv_theory* t = nullptr;
  CHECK(kv_theory_parse(nullptr, &t) == KV_ERR_NULL_ARGUMENT);
  CHECK(kv_check(nullptr, nullptr) == KV_ERR_NULL_ARGUMENT);
  CHECK(std::string(kv_last_error()).find("null") != std::string::npos);
}

TEST_CASE("parse errors carry codes and diagnostics") {
  kv_theory* t = nullptr;
  CHECK(kv_theory_parse("{", &t) == KV_ERR_PARSE);
  CHECK(t == nullptr);
  CHECK(std::string(kv_last_error()).size() > 0);
  CHECK(kv_theory_parse(R"({"states":["a"],"processes":[{"delta_m":{"b":1},"q":{}}]})", &t) ==
        KV_ERR_UNKNOWN_LABEL);
  CHECK(kv_theory_parse(R"({"states":["a","b"],"processes":[{"delta_m":{"a":1},"q":{}}]})", &t) ==
        KV_ERR_MASS_NOT_CONSERVED);
  CHECK(kv_theory_generate(KV_EXAMPLE_A, 0, &t) == KV_ERR_INVALID_ARGUMENT);
}

TEST_CASE("check, synthesize and verify a compliant theory") {
  kv_theory* t = nullptr;
  REQUIRE(kv_theory_generate(KV_EXAMPLE_B, 5, &t) == KV_OK);
  CHECK(kv_theory_state_count(t) == 6);
  CHECK(kv_theory_process_count(t) == 5);

  kv_verdict* v = nullptr;
  REQUIRE(kv_check(t, &v) == KV_OK);
  CHECK(kv_verdict_is_compliant(v) == 1);
  char* text = nullptr;
  REQUIRE(kv_verdict_to_json(v, &text) == KV_OK);
  const Json verdict = take(text);
  CHECK(verdict["verdict"] == "compliant");
  kv_verdict_free(v);

  REQUIRE(kv_synthesize(t, "1/2", &text) == KV_OK);
  Json pair = take(text);
  CHECK(pair["eta"]["1/2"] == "0");

  int passed = -1;
  REQUIRE(kv_verify(t, pair.dump().c_str(), &passed, &text) == KV_OK);
  Json report = take(text);
  CHECK(passed == 1);
  CHECK(report["kind"] == "margin_report");

  pair["beta"]["1/2"] = "0";
  pair.erase("temperature");
  REQUIRE(kv_verify(t, pair.dump().c_str(), &passed, &text) == KV_OK);
  kv_string_free(text);
  CHECK(passed == 0);

  REQUIRE(kv_verify(t, verdict.dump().c_str(), &passed, &text) == KV_OK);
  kv_string_free(text);
  CHECK(passed == 1);

  CHECK(kv_synthesize(t, "9", &text) == KV_ERR_UNKNOWN_LABEL);
  kv_theory_free(t);
}

TEST_CASE("violated theory yields a certificate") {
  kv_theory* t = nullptr;
  REQUIRE(kv_theory_parse(kLeak, &t) == KV_OK);
  char* text = nullptr;
  REQUIRE(kv_synthesize(t, nullptr, &text) == KV_ERR_NOT_KELVIN_PLANCK);
  Json cert = take(text);
  CHECK(cert["kind"] == "violation_certificate");
  CHECK(cert["lambda"] == Json::array({"1"}));

  int passed = -1;
  REQUIRE(kv_verify(t, cert.dump().c_str(), &passed, &text) == KV_OK);
  kv_string_free(text);
  CHECK(passed == 1);

  cert["witness"]["q"]["a"] = "0";
  REQUIRE(kv_verify(t, cert.dump().c_str(), &passed, &text) == KV_OK);
  const Json checks = take(text);
  CHECK(passed == 0);
  CHECK(checks["checks"]["witness_matches_weights"] == false);

  CHECK(kv_verify(t, R"({"unrelated": 1})", &passed, &text) == KV_ERR_PARSE);
  kv_theory_free(t);
}

TEST_CASE("adding a process flips example A") {
  kv_theory* a = nullptr;
  REQUIRE(kv_theory_generate(KV_EXAMPLE_A, 3, &a) == KV_OK);
  kv_theory* b = nullptr;
  REQUIRE(kv_theory_add_process(a, R"({"id": "free", "delta_m": {}, "q": {"1": 1}})", &b) == KV_OK);
  kv_verdict* v = nullptr;
  REQUIRE(kv_check(b, &v) == KV_OK);
  CHECK(kv_verdict_is_compliant(v) == 0);
  kv_verdict_free(v);
  kv_theory_free(b);
  kv_theory_free(a);
}

TEST_CASE("analysis, ingest and history handles") {
  kv_theory* a = nullptr;
  REQUIRE(kv_theory_generate(KV_EXAMPLE_A, 4, &a) == KV_OK);
  char* text = nullptr;
  REQUIRE(kv_analyze(a, &text) == KV_OK);
  const Json d = take(text);
  CHECK(d["entries"][3]["distance"] == "1/5");
  kv_theory_free(a);

  const char* record = R"({"points": [{"id": "p", "mass": 2}, {"id": "q", "mass": 3}], "times": [0, 1],
    "states": {"p": ["a", "b"], "q": ["a", "a"]}, "heat": {"p": [5], "q": [-1]}})";
  REQUIRE(kv_ingest(record, R"({"states": ["a", "b"]})", 0, &text) == KV_OK);
  const Json p = take(text);
  CHECK(p["delta_m"]["a"] == "-2");
  CHECK(p["q"]["a"] == "4");

  const char* hdoc = R"({"states": ["h", "c"], "samples": [{"t": 0}, {"t": 1, "q": {"h": 1}},
    {"t": 2, "q": {"h": 1, "c": -1}}]})";
  kv_history* h = nullptr;
  REQUIRE(kv_history_parse(hdoc, &h) == KV_OK);
  REQUIRE(kv_history_restrict(h, "1", "2", &text) == KV_OK);
  const Json r = take(text);
  CHECK(r["q"]["c"] == "-1");
  CHECK(kv_history_restrict(h, "1/2", "2", &text) == KV_ERR_OFF_GRID);

  kv_history* sub = nullptr;
  REQUIRE(kv_history_subdivide(h, 2, &sub) == KV_OK);
  REQUIRE(kv_history_endpoint(sub, &text) == KV_OK);
  CHECK(take(text)["q"]["h"] == "1");

  const kv_history* hs[] = {h, sub};
  const char* coefs[] = {"1/2", "1/3"};
  kv_history* conic = nullptr;
  REQUIRE(kv_history_conic(hs, coefs, 2, &conic, &text) == KV_OK);
  CHECK(take(text)["common_denominator"] == "6");
  REQUIRE(kv_history_endpoint(conic, &text) == KV_OK);
  CHECK(take(text)["q"]["c"] == "-5/6");

  kv_history* composed = nullptr;
  CHECK(kv_history_compose(h, sub, &composed) == KV_ERR_DURATION_MISMATCH);
  kv_history_free(conic);
  kv_history_free(sub);
  kv_history_free(h);
}

TEST_CASE("handles are shareable across threads") {
  kv_theory* t = nullptr;
  REQUIRE(kv_theory_generate(KV_EXAMPLE_B, 6, &t) == KV_OK);
  std::vector<int> compliant(8, -1);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < compliant.size(); ++i) {
    workers.emplace_back([&, i] {
      kv_verdict* v = nullptr;
      if (kv_check(t, &v) == KV_OK) {
        compliant[i] = kv_verdict_is_compliant(v);
        kv_verdict_free(v);
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int c : compliant) CHECK(c == 1);
  kv_theory_free(t);
}

TEST_CASE("rational approximation") {
  char* text = nullptr;
  REQUIRE(kv_rational_approx("1/3", 3, &text) == KV_OK);
  CHECK(std::string(text) == "0.333");
  kv_string_free(text);
  CHECK(kv_rational_approx("x", 3, &text) == KV_ERR_PARSE);
}
