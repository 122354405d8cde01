#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "core/histories.hpp"
#include "core/ingest.hpp"
#include "core/separation.hpp"

namespace kelvin::io {

// Insertion-ordered so documents list states in state-space order.
using Json = nlohmann::ordered_json;

// Parses text into a document. Throws Error(kParse) carrying the parser's
// position diagnostic.
Json parse_document(std::string_view text);
std::string dump(const Json& doc);

Rational rational_from(const Json& value, const std::string& where);
Json rational_to(const Rational& value);

// Accepts {"states": [...], "coordinates"?: {...}} or a bare label array.
SpacePtr space_from(const Json& doc);
Json space_to(const StateSpace& space);

// Objects mapping label -> rational string; omitted labels mean 0.
SignedMeasure measure_from(const Json& value, const SpacePtr& space, const std::string& where);
Json measure_to(const SignedMeasure& m);
Json function_to(const StateSpace& space, std::span<const Rational> values);

Process process_from(const Json& value, const SpacePtr& space, const std::string& where);
Json process_to(const Process& p);

// { "states": [...], "processes": [ { "id", "delta_m", "q" } ] }
TheorySpec theory_from(const Json& doc);
Json theory_to(const TheorySpec& theory);

// { "states"?: [...], "duration": "p/q", "samples": [ { "t", "delta_m", "q" } ] }.
// Without "states", labels are taken in order of first appearance. A
// wrapper object with a "history" member is unwrapped.
ProcessHistory history_from(const Json& doc);
Json history_to(const ProcessHistory& h);

// { "points": [{"id","mass"}], "times": [...], "states": {id: [...]}, "heat": {id: [...]} }
BodyProcessRecord record_from(const Json& doc);

// Pair documents carry "eta" and either "beta" or "temperature".
ClausiusDuhemPair pair_from(const Json& doc, const SpacePtr& space);
Json pair_to(const ClausiusDuhemPair& pair, const StateSpace& space,
             std::optional<std::string> gauge_state);

struct CertificatePayload {
  std::vector<Rational> lambda;
  std::optional<SignedMeasure> witness_delta_m;
  std::optional<SignedMeasure> witness_q;
};
CertificatePayload certificate_from(const Json& doc, const SpacePtr& space);
Json certificate_to(const ViolationCertificate& cert, const TheorySpec& theory);

Json margins_to(const MarginReport& report, const TheorySpec& theory);
Json verdict_to(const KPVerdict& verdict, const TheorySpec& theory);
Json directions_to(const DirectionReport& report, std::span<const Process> family);

// Display name of generator i: its id when present, otherwise "#i".
std::string process_name(const TheorySpec& theory, std::size_t index);

}  // namespace kelvin::io
