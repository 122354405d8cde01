#include "core/json_io.hpp"

#include <set>

#include "core/error.hpp"

namespace kelvin::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string string_from(const Json& value, const std::string& where) {
  if (!value.is_string()) fail(where, "expected a string");
  return value.get<std::string>();
}

const Json& array_from(const Json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "expected an array");
  return value;
}

// Re-labels errors from nested constructors with the field they came from.
template <typename F>
auto at_field(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    throw Error(e.code(), where + ": " + e.what());
  }
}

}  // namespace

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Rational rational_from(const Json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(mpz_class(value.dump(), 10));
  if (!value.is_string()) fail(where, "expected a rational string \"p/q\"");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Json rational_to(const Rational& value) { return format_rational(value); }

SpacePtr space_from(const Json& doc) {
  const Json& states = doc.is_array() ? doc : member(doc, "states", "$");
  array_from(states, "states");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < states.size(); ++i) {
    labels.push_back(string_from(states[i], "states[" + std::to_string(i) + "]"));
  }
  std::optional<std::vector<Rational>> coords;
  if (doc.is_object() && doc.contains("coordinates")) {
    const Json& c = doc["coordinates"];
    if (!c.is_object()) fail("coordinates", "expected an object");
    coords.emplace();
    for (const auto& label : labels) {
      if (!c.contains(label)) fail("coordinates", "missing coordinate for \"" + label + "\"");
      coords->push_back(rational_from(c[label], "coordinates." + label));
    }
  }
  return at_field("states", [&] { return StateSpace::create(labels, coords); });
}

Json space_to(const StateSpace& space) {
  Json doc = Json::object();
  doc["states"] = space.labels();
  if (space.coordinates()) {
    doc["coordinates"] = function_to(space, *space.coordinates());
  }
  return doc;
}

SignedMeasure measure_from(const Json& value, const SpacePtr& space, const std::string& where) {
  if (!value.is_object()) fail(where, "expected an object mapping state label to rational");
  std::vector<Rational> values(space->size());
  for (auto it = value.begin(); it != value.end(); ++it) {
    const auto index = space->find(it.key());
    if (!index) {
      throw Error(ErrorCode::kUnknownLabel, where + ": unknown state label \"" + it.key() + "\"");
    }
    values[*index] = rational_from(it.value(), where + "." + it.key());
  }
  return SignedMeasure(space, std::move(values));
}

Json measure_to(const SignedMeasure& m) { return function_to(*m.space(), m.values()); }

Json function_to(const StateSpace& space, std::span<const Rational> values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < space.size(); ++i) out[space.label(i)] = rational_to(values[i]);
  return out;
}

Process process_from(const Json& value, const SpacePtr& space, const std::string& where) {
  if (!value.is_object()) fail(where, "expected a process object");
  std::optional<std::string> id;
  if (value.contains("id") && !value["id"].is_null()) id = string_from(value["id"], where + ".id");
  SignedMeasure dm = value.contains("delta_m")
                         ? measure_from(value["delta_m"], space, where + ".delta_m")
                         : SignedMeasure(space);
  SignedMeasure q =
      value.contains("q") ? measure_from(value["q"], space, where + ".q") : SignedMeasure(space);
  return at_field(where, [&] { return Process(std::move(dm), std::move(q), id); });
}

Json process_to(const Process& p) {
  Json out = Json::object();
  if (p.id()) out["id"] = *p.id();
  out["delta_m"] = measure_to(p.delta_m());
  out["q"] = measure_to(p.q());
  return out;
}

TheorySpec theory_from(const Json& doc) {
  if (!doc.is_object()) fail("$", "expected a theory object");
  SpacePtr space = space_from(doc);
  std::vector<Process> processes;
  if (doc.contains("processes")) {
    const Json& list = array_from(doc["processes"], "processes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      processes.push_back(process_from(list[i], space, "processes[" + std::to_string(i) + "]"));
    }
  }
  return at_field("processes", [&] { return TheorySpec(space, std::move(processes)); });
}

Json theory_to(const TheorySpec& theory) {
  Json doc = space_to(*theory.space());
  Json list = Json::array();
  for (const auto& p : theory.processes()) list.push_back(process_to(p));
  doc["processes"] = std::move(list);
  return doc;
}

ProcessHistory history_from(const Json& input) {
  const Json& doc = input.is_object() && input.contains("history") ? input["history"] : input;
  if (!doc.is_object()) fail("$", "expected a history object");
  const Json& samples = array_from(member(doc, "samples", "$"), "samples");

  SpacePtr space;
  if (doc.contains("states")) {
    space = space_from(doc);
  } else {
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& s : samples) {
      for (const char* key : {"delta_m", "q"}) {
        if (!s.is_object() || !s.contains(key) || !s[key].is_object()) continue;
        for (auto it = s[key].begin(); it != s[key].end(); ++it) {
          if (seen.insert(it.key()).second) labels.push_back(it.key());
        }
      }
    }
    if (labels.empty()) fail("samples", "cannot infer states; add a \"states\" field");
    space = StateSpace::create(labels);
  }

  std::vector<HistorySample> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string where = "samples[" + std::to_string(i) + "]";
    const Json& s = samples[i];
    Rational t = rational_from(member(s, "t", where), where + ".t");
    SignedMeasure dm = s.contains("delta_m") ? measure_from(s["delta_m"], space, where + ".delta_m")
                                             : SignedMeasure(space);
    SignedMeasure q =
        s.contains("q") ? measure_from(s["q"], space, where + ".q") : SignedMeasure(space);
    out.push_back({std::move(t), std::move(dm), std::move(q)});
  }
  ProcessHistory h = at_field("samples", [&] { return ProcessHistory(std::move(out)); });
  if (doc.contains("duration")) {
    if (rational_from(doc["duration"], "duration") != h.duration()) {
      fail("duration", "does not match the final sample time " + format_rational(h.duration()));
    }
  }
  return h;
}

Json history_to(const ProcessHistory& h) {
  Json doc = Json::object();
  doc["states"] = h.space()->labels();
  doc["duration"] = rational_to(h.duration());
  Json samples = Json::array();
  for (const auto& s : h.samples()) {
    Json sample = Json::object();
    sample["t"] = rational_to(s.time);
    sample["delta_m"] = measure_to(s.delta_m);
    sample["q"] = measure_to(s.q);
    samples.push_back(std::move(sample));
  }
  doc["samples"] = std::move(samples);
  return doc;
}

BodyProcessRecord record_from(const Json& doc) {
  if (!doc.is_object()) fail("$", "expected a record object");
  BodyProcessRecord rec;
  const Json& points = array_from(member(doc, "points", "$"), "points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    rec.points.push_back({string_from(member(points[i], "id", where), where + ".id"),
                          rational_from(member(points[i], "mass", where), where + ".mass")});
  }
  const Json& times = array_from(member(doc, "times", "$"), "times");
  for (std::size_t k = 0; k < times.size(); ++k) {
    rec.times.push_back(rational_from(times[k], "times[" + std::to_string(k) + "]"));
  }
  const Json& states = member(doc, "states", "$");
  const Json& heat = member(doc, "heat", "$");
  for (const auto& pt : rec.points) {
    const std::string sw = "states." + pt.id;
    const Json& row = array_from(member(states, pt.id.c_str(), "states"), sw);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < row.size(); ++k) {
      labels.push_back(string_from(row[k], sw + "[" + std::to_string(k) + "]"));
    }
    rec.states.push_back(std::move(labels));

    const std::string hw = "heat." + pt.id;
    const Json& hrow = array_from(member(heat, pt.id.c_str(), "heat"), hw);
    std::vector<Rational> increments;
    for (std::size_t k = 0; k < hrow.size(); ++k) {
      increments.push_back(rational_from(hrow[k], hw + "[" + std::to_string(k) + "]"));
    }
    rec.heat.push_back(std::move(increments));
  }
  at_field("record", [&] { validate(rec); });
  return rec;
}

ClausiusDuhemPair pair_from(const Json& doc, const SpacePtr& space) {
  if (!doc.is_object()) fail("$", "expected a pair object");
  ClausiusDuhemPair pair;
  const SignedMeasure eta = measure_from(member(doc, "eta", "$"), space, "eta");
  pair.eta.assign(eta.values().begin(), eta.values().end());
  if (doc.contains("beta")) {
    const SignedMeasure beta = measure_from(doc["beta"], space, "beta");
    pair.beta.assign(beta.values().begin(), beta.values().end());
  } else {
    const SignedMeasure temp =
        measure_from(member(doc, "temperature", "$"), space, "temperature");
    // A nonpositive temperature maps to a nonpositive coldness so the
    // verifier rejects it.
    for (const auto& t : temp.values()) pair.beta.push_back(t > 0 ? Rational(1 / t) : Rational(0));
  }
  return pair;
}

Json pair_to(const ClausiusDuhemPair& pair, const StateSpace& space,
             std::optional<std::string> gauge_state) {
  Json doc = Json::object();
  doc["kind"] = "clausius_duhem_pair";
  if (gauge_state) doc["gauge_state"] = *gauge_state;
  doc["eta"] = function_to(space, pair.eta);
  doc["beta"] = function_to(space, pair.beta);
  bool positive = true;
  for (const auto& b : pair.beta) positive = positive && b > 0;
  if (positive) doc["temperature"] = function_to(space, pair.temperature());
  return doc;
}

CertificatePayload certificate_from(const Json& doc, const SpacePtr& space) {
  if (!doc.is_object()) fail("$", "expected a certificate object");
  CertificatePayload out;
  const Json& lambda = array_from(member(doc, "lambda", "$"), "lambda");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    out.lambda.push_back(rational_from(lambda[i], "lambda[" + std::to_string(i) + "]"));
  }
  if (doc.contains("witness")) {
    const Json& w = doc["witness"];
    if (!w.is_object()) fail("witness", "expected a process object");
    out.witness_delta_m = w.contains("delta_m") ? measure_from(w["delta_m"], space, "witness.delta_m")
                                                : SignedMeasure(space);
    out.witness_q = w.contains("q") ? measure_from(w["q"], space, "witness.q") : SignedMeasure(space);
  }
  return out;
}

Json certificate_to(const ViolationCertificate& cert, const TheorySpec& theory) {
  Json doc = Json::object();
  doc["kind"] = "violation_certificate";
  Json lambda = Json::array();
  for (const auto& l : cert.lambda) lambda.push_back(rational_to(l));
  doc["lambda"] = std::move(lambda);
  Json support = Json::array();
  for (std::size_t i = 0; i < cert.lambda.size(); ++i) {
    if (cert.lambda[i] != 0) support.push_back(process_name(theory, i));
  }
  doc["support"] = std::move(support);
  doc["witness"] = process_to(cert.witness);
  return doc;
}

std::string process_name(const TheorySpec& theory, std::size_t index) {
  const auto& p = theory.processes().at(index);
  return p.id() ? *p.id() : "#" + std::to_string(index);
}

Json margins_to(const MarginReport& report, const TheorySpec& theory) {
  Json doc = Json::object();
  doc["passed"] = report.passed;
  doc["beta_positive"] = report.beta_positive;
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.margins.size(); ++i) {
    Json row = Json::object();
    row["process"] = process_name(theory, i);
    row["margin"] = rational_to(report.margins[i]);
    row["ok"] = report.margins[i] >= 0;
    rows.push_back(std::move(row));
  }
  doc["margins"] = std::move(rows);
  return doc;
}

Json verdict_to(const KPVerdict& verdict, const TheorySpec& theory) {
  Json doc = Json::object();
  if (const auto* ok = std::get_if<Compliant>(&verdict)) {
    doc["verdict"] = "compliant";
    doc["pair"] = pair_to(ok->pair, *theory.space(), theory.space()->label(0));
    doc["margin_report"] = margins_to(verify_cd_pair(theory, ok->pair), theory);
  } else {
    const auto& bad = std::get<Violated>(verdict);
    doc["verdict"] = "violated";
    doc["certificate"] = certificate_to(bad.certificate, theory);
  }
  return doc;
}

Json directions_to(const DirectionReport& report, std::span<const Process> family) {
  Json doc = Json::object();
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    Json row = Json::object();
    row["index"] = i;
    if (family[i].id()) row["id"] = *family[i].id();
    row["norm"] = rational_to(e.norm);
    row["distance"] = rational_to(e.distance);
    row["normalized"] = process_to(e.normalized);
    row["nearest_forbidden"] = process_to(e.nearest);
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  doc["strictly_decreasing"] = report.strictly_decreasing;
  doc["final_nearest_forbidden"] = process_to(report.entries.back().nearest);
  doc["limit_direction"] =
      report.limit_direction ? process_to(*report.limit_direction) : Json(nullptr);
  return doc;
}

}  // namespace kelvin::io
