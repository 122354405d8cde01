#include "kelvin/kelvin.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/error.hpp"
#include "core/histories.hpp"
#include "core/ingest.hpp"
#include "core/json_io.hpp"
#include "core/separation.hpp"

struct kv_theory {
  kelvin::TheorySpec spec;
};

struct kv_verdict {
  kelvin::TheorySpec theory;
  kelvin::KPVerdict verdict;
};

struct kv_history {
  kelvin::ProcessHistory history;
};

namespace {

using kelvin::io::Json;

thread_local std::string g_last_error;

kv_status to_status(kelvin::ErrorCode code) {
  switch (code) {
    case kelvin::ErrorCode::kParse: return KV_ERR_PARSE;
    case kelvin::ErrorCode::kUnknownLabel: return KV_ERR_UNKNOWN_LABEL;
    case kelvin::ErrorCode::kSpaceMismatch: return KV_ERR_SPACE_MISMATCH;
    case kelvin::ErrorCode::kMassNotConserved: return KV_ERR_MASS_NOT_CONSERVED;
    case kelvin::ErrorCode::kInvalidArgument: return KV_ERR_INVALID_ARGUMENT;
    case kelvin::ErrorCode::kNotKelvinPlanck: return KV_ERR_NOT_KELVIN_PLANCK;
    case kelvin::ErrorCode::kDurationMismatch: return KV_ERR_DURATION_MISMATCH;
    case kelvin::ErrorCode::kOffGrid: return KV_ERR_OFF_GRID;
    case kelvin::ErrorCode::kInternal: return KV_ERR_INTERNAL;
  }
  return KV_ERR_INTERNAL;
}

template <typename F>
kv_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const kelvin::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KV_ERR_INTERNAL;
  }
}

kv_status null_argument(const char* name) {
  g_last_error = std::string("argument \"") + name + "\" is null";
  return KV_ERR_NULL_ARGUMENT;
}

char* copy_out(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

char* json_out(const Json& doc) { return copy_out(kelvin::io::dump(doc)); }

Json history_document(const kelvin::ProcessHistory& h) { return kelvin::io::history_to(h); }

// Finds the object to verify: a bare payload, a verdict, or a run report.
const Json* locate_payload(const Json& doc, std::string* kind) {
  if (!doc.is_object()) return nullptr;
  if (doc.contains("kind") && doc["kind"].is_string()) {
    const std::string k = doc["kind"].get<std::string>();
    if (k == "clausius_duhem_pair" || k == "violation_certificate") {
      *kind = k;
      return &doc;
    }
  }
  if (doc.contains("pair")) return locate_payload(doc["pair"], kind);
  if (doc.contains("certificate")) return locate_payload(doc["certificate"], kind);
  if (doc.contains("result")) return locate_payload(doc["result"], kind);
  if (doc.contains("eta")) {
    *kind = "clausius_duhem_pair";
    return &doc;
  }
  if (doc.contains("lambda")) {
    *kind = "violation_certificate";
    return &doc;
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* kv_version(void) { return "1.0.0"; }

const char* kv_status_name(kv_status status) {
  switch (status) {
    case KV_OK: return "ok";
    case KV_ERR_NULL_ARGUMENT: return "null_argument";
    case KV_ERR_PARSE: return "parse_error";
    case KV_ERR_UNKNOWN_LABEL: return "unknown_label";
    case KV_ERR_SPACE_MISMATCH: return "space_mismatch";
    case KV_ERR_MASS_NOT_CONSERVED: return "mass_not_conserved";
    case KV_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KV_ERR_NOT_KELVIN_PLANCK: return "not_kelvin_planck";
    case KV_ERR_DURATION_MISMATCH: return "duration_mismatch";
    case KV_ERR_OFF_GRID: return "off_grid";
    case KV_ERR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* kv_last_error(void) { return g_last_error.c_str(); }

void kv_string_free(char* text) { std::free(text); }

kv_status kv_rational_approx(const char* rational, int digits, char** out) {
  if (!rational) return null_argument("rational");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = copy_out(kelvin::approximate_rational(kelvin::parse_rational(rational), digits));
    return KV_OK;
  });
}

kv_status kv_theory_parse(const char* json, kv_theory** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto spec = kelvin::io::theory_from(kelvin::io::parse_document(json));
    *out = new kv_theory{std::move(spec)};
    return KV_OK;
  });
}

kv_status kv_theory_generate(kv_example example, int n, kv_theory** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    if (example != KV_EXAMPLE_A && example != KV_EXAMPLE_B) {
      throw kelvin::Error(kelvin::ErrorCode::kInvalidArgument, "unknown example family");
    }
    const auto family =
        example == KV_EXAMPLE_A ? kelvin::ExampleFamily::kA : kelvin::ExampleFamily::kB;
    *out = new kv_theory{kelvin::generate_example(family, n)};
    return KV_OK;
  });
}

kv_status kv_theory_add_process(const kv_theory* theory, const char* process_json,
                                kv_theory** out) {
  if (!theory) return null_argument("theory");
  if (!process_json) return null_argument("process_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto p = kelvin::io::process_from(kelvin::io::parse_document(process_json),
                                      theory->spec.space(), "process");
    *out = new kv_theory{theory->spec.with_process(std::move(p))};
    return KV_OK;
  });
}

kv_status kv_theory_to_json(const kv_theory* theory, char** out) {
  if (!theory) return null_argument("theory");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = json_out(kelvin::io::theory_to(theory->spec));
    return KV_OK;
  });
}

size_t kv_theory_state_count(const kv_theory* theory) {
  return theory ? theory->spec.space()->size() : 0;
}

size_t kv_theory_process_count(const kv_theory* theory) {
  return theory ? theory->spec.processes().size() : 0;
}

void kv_theory_free(kv_theory* theory) { delete theory; }

kv_status kv_check(const kv_theory* theory, kv_verdict** out) {
  if (!theory) return null_argument("theory");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto verdict = kelvin::check_kelvin_planck(theory->spec);
    *out = new kv_verdict{theory->spec, std::move(verdict)};
    return KV_OK;
  });
}

int kv_verdict_is_compliant(const kv_verdict* verdict) {
  return verdict && std::holds_alternative<kelvin::Compliant>(verdict->verdict) ? 1 : 0;
}

kv_status kv_verdict_to_json(const kv_verdict* verdict, char** out) {
  if (!verdict) return null_argument("verdict");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = json_out(kelvin::io::verdict_to(verdict->verdict, verdict->theory));
    return KV_OK;
  });
}

void kv_verdict_free(kv_verdict* verdict) { delete verdict; }

kv_status kv_synthesize(const kv_theory* theory, const char* gauge_state, char** out) {
  if (!theory) return null_argument("theory");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& spec = theory->spec;
    std::optional<std::string_view> gauge;
    if (gauge_state) gauge = gauge_state;
    try {
      auto pair = kelvin::synthesize_cd_pair(spec, gauge);
      const std::string label = gauge ? std::string(*gauge) : spec.space()->label(0);
      *out = json_out(kelvin::io::pair_to(pair, *spec.space(), label));
      return KV_OK;
    } catch (const kelvin::NotKelvinPlanckError& e) {
      *out = json_out(kelvin::io::certificate_to(e.certificate(), spec));
      g_last_error = e.what();
      return KV_ERR_NOT_KELVIN_PLANCK;
    }
  });
}

kv_status kv_verify(const kv_theory* theory, const char* payload_json, int* passed, char** out) {
  if (!theory) return null_argument("theory");
  if (!payload_json) return null_argument("payload_json");
  if (!passed) return null_argument("passed");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& spec = theory->spec;
    const Json doc = kelvin::io::parse_document(payload_json);
    std::string kind;
    const Json* payload = locate_payload(doc, &kind);
    if (!payload) {
      throw kelvin::Error(kelvin::ErrorCode::kParse,
                          "payload is neither a Clausius-Duhem pair nor a violation certificate");
    }

    Json report = Json::object();
    if (kind == "clausius_duhem_pair") {
      const auto pair = kelvin::io::pair_from(*payload, spec.space());
      const auto margins = kelvin::verify_cd_pair(spec, pair);
      report["kind"] = "margin_report";
      const Json details = kelvin::io::margins_to(margins, spec);
      for (auto& [key, value] : details.items()) report[key] = value;
      *passed = margins.passed ? 1 : 0;
    } else {
      const auto cert = kelvin::io::certificate_from(*payload, spec.space());
      const auto checks = kelvin::inspect_violation(spec, cert.lambda);
      bool witness_matches = checks.weights_match;
      if (checks.weights_match && cert.witness_delta_m) {
        const auto expected =
            kelvin::combine_processes(spec.space(), cert.lambda, spec.processes());
        witness_matches =
            expected.delta_m() == *cert.witness_delta_m && expected.q() == *cert.witness_q;
      }
      const bool ok = checks.passed() && witness_matches;
      report["kind"] = "certificate_checks";
      report["passed"] = ok;
      Json c = Json::object();
      c["weights_match_generators"] = checks.weights_match;
      c["weights_nonnegative"] = checks.nonnegative;
      c["witness_cyclic"] = checks.cyclic;
      c["witness_heat_nonnegative"] = checks.heat_nonnegative;
      c["witness_heat_total_one"] = checks.normalized;
      c["witness_matches_weights"] = witness_matches;
      report["checks"] = std::move(c);
      *passed = ok ? 1 : 0;
    }
    *out = json_out(report);
    return KV_OK;
  });
}

kv_status kv_analyze(const kv_theory* family, char** out) {
  if (!family) return null_argument("family");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& procs = family->spec.processes();
    const auto report = kelvin::analyze_directions(procs);
    *out = json_out(kelvin::io::directions_to(report, procs));
    return KV_OK;
  });
}

kv_status kv_ingest(const char* record_json, const char* space_json, int as_history, char** out) {
  if (!record_json) return null_argument("record_json");
  if (!space_json) return null_argument("space_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto record = kelvin::io::record_from(kelvin::io::parse_document(record_json));
    const auto space = kelvin::io::space_from(kelvin::io::parse_document(space_json));
    if (as_history) {
      *out = json_out(history_document(kelvin::derive_history(record, space)));
    } else {
      *out = json_out(kelvin::io::process_to(kelvin::derive_process(record, space)));
    }
    return KV_OK;
  });
}

kv_status kv_history_parse(const char* json, kv_history** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new kv_history{kelvin::io::history_from(kelvin::io::parse_document(json))};
    return KV_OK;
  });
}

kv_status kv_history_to_json(const kv_history* history, char** out) {
  if (!history) return null_argument("history");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = json_out(history_document(history->history));
    return KV_OK;
  });
}

kv_status kv_history_endpoint(const kv_history* history, char** out) {
  if (!history) return null_argument("history");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = json_out(kelvin::io::process_to(kelvin::endpoint_process(history->history)));
    return KV_OK;
  });
}

kv_status kv_history_restrict(const kv_history* history, const char* from, const char* to,
                              char** out) {
  if (!history) return null_argument("history");
  if (!from) return null_argument("from");
  if (!to) return null_argument("to");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto p = kelvin::restrict_history(history->history, kelvin::parse_rational(from),
                                            kelvin::parse_rational(to));
    *out = json_out(kelvin::io::process_to(p));
    return KV_OK;
  });
}

kv_status kv_history_compose(const kv_history* first, const kv_history* second,
                             kv_history** out) {
  if (!first) return null_argument("first");
  if (!second) return null_argument("second");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new kv_history{kelvin::parallel_compose(first->history, second->history)};
    return KV_OK;
  });
}

kv_status kv_history_subdivide(const kv_history* history, unsigned long n, kv_history** out) {
  if (!history) return null_argument("history");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new kv_history{kelvin::subdivide(history->history, n)};
    return KV_OK;
  });
}

kv_status kv_history_rational_sum(const kv_history* first, const kv_history* second,
                                  kv_history** out) {
  if (!first) return null_argument("first");
  if (!second) return null_argument("second");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new kv_history{kelvin::rational_sum(first->history, second->history).history};
    return KV_OK;
  });
}

kv_status kv_history_conic(const kv_history* const* histories, const char* const* coefficients,
                           size_t count, kv_history** out, char** info) {
  if (!histories) return null_argument("histories");
  if (!coefficients) return null_argument("coefficients");
  if (!out) return null_argument("out");
  return guarded([&] {
    std::vector<std::pair<kelvin::Rational, kelvin::ProcessHistory>> items;
    for (size_t i = 0; i < count; ++i) {
      if (!histories[i] || !coefficients[i]) {
        return null_argument("histories/coefficients entry");
      }
      items.emplace_back(kelvin::parse_rational(coefficients[i]), histories[i]->history);
    }
    auto result = kelvin::conic_combination(items);
    if (info) {
      Json doc = Json::object();
      doc["common_denominator"] = kelvin::io::rational_to(result.common_denominator);
      Json replicas = Json::array();
      for (const auto& r : result.replicas) replicas.push_back(kelvin::io::rational_to(r));
      doc["replicas"] = std::move(replicas);
      *info = json_out(doc);
    }
    *out = new kv_history{std::move(result.history)};
    return KV_OK;
  });
}

void kv_history_free(kv_history* history) { delete history; }

}  // extern "C"
