// Command-line front end for libkelvin. Everything goes through the C API.
//
// Exit codes: 0 compliant / success, 3 violated, 2 verification failed,
// 1 input or usage error.

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kelvin/kelvin.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitViolated = 3;

// ---- logging ---------------------------------------------------------------

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("KELVIN_LOG");
    if (!env) return LogLevel::kWarn;
    const std::string v = env;
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    if (v == "error") return LogLevel::kError;
    if (v == "off") return LogLevel::kOff;
    return LogLevel::kWarn;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level < log_threshold()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::cerr << "[kelvin " << names[static_cast<int>(level)] << "] " << message << "\n";
}

// ---- C API glue ------------------------------------------------------------

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FreeString {
  void operator()(char* s) const { kv_string_free(s); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

struct FreeTheory {
  void operator()(kv_theory* t) const { kv_theory_free(t); }
};
using Theory = std::unique_ptr<kv_theory, FreeTheory>;

struct FreeVerdict {
  void operator()(kv_verdict* v) const { kv_verdict_free(v); }
};
using Verdict = std::unique_ptr<kv_verdict, FreeVerdict>;

struct FreeHistory {
  void operator()(kv_history* h) const { kv_history_free(h); }
};
using History = std::unique_ptr<kv_history, FreeHistory>;

void expect_ok(kv_status status, const std::string& context) {
  if (status == KV_OK) return;
  throw InputError(context + ": " + kv_status_name(status) + ": " + kv_last_error());
}

Json take_json(char* raw) {
  OwnedString owned(raw);
  return Json::parse(owned.get());
}

// ---- inputs ------------------------------------------------------------------

struct Input {
  std::string path;
  std::string text;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Input read_input(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    buffer << in.rdbuf();
  }
  log(LogLevel::kDebug, "read " + path);
  return Input{path, buffer.str()};
}

Theory load_theory(const Input& in) {
  kv_theory* raw = nullptr;
  expect_ok(kv_theory_parse(in.text.c_str(), &raw), in.path);
  return Theory(raw);
}

History load_history(const Input& in) {
  kv_history* raw = nullptr;
  expect_ok(kv_history_parse(in.text.c_str(), &raw), in.path);
  return History(raw);
}

Json history_json(const kv_history* h) {
  char* out = nullptr;
  expect_ok(kv_history_to_json(h, &out), "history");
  return take_json(out);
}

// ---- reports -----------------------------------------------------------------

struct Options {
  bool approx = false;
  int digits = 12;
  std::string output;
  std::vector<std::string> argv;
};

const std::vector<std::string> kVerbatimKeys = {"kind", "id", "gauge_state", "verdict",
                                                 "process", "support", "states"};

// Copy of `value` with every rational string replaced by a decimal rendering.
Json approximate(const Json& value, int digits, const std::string& key = "") {
  if (std::find(kVerbatimKeys.begin(), kVerbatimKeys.end(), key) != kVerbatimKeys.end()) {
    return value;
  }
  if (value.is_object()) {
    Json out = Json::object();
    for (auto it = value.begin(); it != value.end(); ++it) {
      out[it.key()] = approximate(it.value(), digits, it.key());
    }
    return out;
  }
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto& v : value) out.push_back(approximate(v, digits, key));
    return out;
  }
  if (value.is_string()) {
    char* text = nullptr;
    if (kv_rational_approx(value.get<std::string>().c_str(), digits, &text) == KV_OK) {
      OwnedString owned(text);
      return std::string(owned.get());
    }
  }
  return value;
}

Json make_report(const std::string& command, const Options& opts, const std::vector<Input>& inputs,
                 Json result, const std::string& summary, int exit_code) {
  Json report = Json::object();
  report["command"] = command;
  report["arguments"] = opts.argv;
  Json digests = Json::array();
  for (const auto& in : inputs) {
    Json d = Json::object();
    d["path"] = in.path;
    d["sha256"] = sha256_hex(in.text);
    digests.push_back(std::move(d));
  }
  report["inputs"] = std::move(digests);
  if (opts.approx) {
    report["approx"] = Json::object();
    report["approx"]["note"] = "decimal renderings, not authoritative";
    report["approx"]["result"] = approximate(result, opts.digits);
  }
  report["result"] = std::move(result);
  report["summary"] = summary;
  report["exit_code"] = exit_code;
  return report;
}

void emit(const Json& doc, const Options& opts) {
  const std::string text = doc.dump(2) + "\n";
  if (opts.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw InputError(opts.output + ": cannot write file");
  out << text;
}

// ---- commands ----------------------------------------------------------------

int cmd_generate(const std::string& example, int n, const Options& opts) {
  kv_example which;
  if (example == "A" || example == "a") {
    which = KV_EXAMPLE_A;
  } else if (example == "B" || example == "b") {
    which = KV_EXAMPLE_B;
  } else {
    throw InputError("unknown example \"" + example + "\"; expected A or B");
  }
  kv_theory* raw = nullptr;
  expect_ok(kv_theory_generate(which, n, &raw), "generate");
  Theory theory(raw);
  char* out = nullptr;
  expect_ok(kv_theory_to_json(theory.get(), &out), "generate");
  emit(take_json(out), opts);
  return kExitOk;
}

struct CheckOutcome {
  Json report;
  int exit_code = kExitInput;
  std::string error;
};

CheckOutcome check_one(const std::string& path, const Options& opts) {
  CheckOutcome outcome;
  try {
    const Input in = read_input(path);
    Theory theory = load_theory(in);
    log(LogLevel::kInfo, "checking " + path + " (" + std::to_string(kv_theory_state_count(theory.get())) +
                             " states, " + std::to_string(kv_theory_process_count(theory.get())) +
                             " processes)");
    kv_verdict* raw = nullptr;
    expect_ok(kv_check(theory.get(), &raw), path);
    Verdict verdict(raw);
    char* text = nullptr;
    expect_ok(kv_verdict_to_json(verdict.get(), &text), path);
    Json result = take_json(text);
    const bool compliant = kv_verdict_is_compliant(verdict.get()) == 1;
    outcome.exit_code = compliant ? kExitOk : kExitViolated;
    std::string summary;
    if (compliant) {
      summary = "Kelvin-Planck compliant: Clausius-Duhem pair found, all " +
                std::to_string(result["margin_report"]["margins"].size()) + " margins >= 0";
    } else {
      summary = "Kelvin-Planck violated: a conic combination of " +
                std::to_string(result["certificate"]["support"].size()) +
                " generator(s) absorbs heat in a cycle without emitting any";
    }
    outcome.report = make_report("check", opts, {in}, std::move(result), summary, outcome.exit_code);
  } catch (const InputError& e) {
    outcome.error = e.what();
    outcome.exit_code = kExitInput;
  }
  return outcome;
}

int cmd_check(const std::vector<std::string>& files, int jobs, const Options& opts) {
  if (files.size() == 1) {
    CheckOutcome one = check_one(files.front(), opts);
    if (one.exit_code == kExitInput) throw InputError(one.error);
    emit(one.report, opts);
    return one.exit_code;
  }

  std::vector<CheckOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)),
                                                     files.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < files.size(); i = next++) outcomes[i] = check_one(files[i], opts);
    });
  }
  for (auto& t : pool) t.join();

  Json reports = Json::array();
  bool any_input = false;
  bool any_violated = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (outcomes[i].exit_code == kExitInput) {
      any_input = true;
      std::cerr << "error: " << outcomes[i].error << "\n";
      Json failed = Json::object();
      failed["path"] = files[i];
      failed["error"] = outcomes[i].error;
      failed["exit_code"] = kExitInput;
      reports.push_back(std::move(failed));
    } else {
      any_violated = any_violated || outcomes[i].exit_code == kExitViolated;
      reports.push_back(std::move(outcomes[i].report));
    }
  }
  const int code = any_input ? kExitInput : (any_violated ? kExitViolated : kExitOk);
  Json doc = Json::object();
  doc["reports"] = std::move(reports);
  doc["exit_code"] = code;
  emit(doc, opts);
  return code;
}

int cmd_synthesize(const std::string& file, const std::optional<std::string>& gauge,
                   const Options& opts) {
  const Input in = read_input(file);
  Theory theory = load_theory(in);
  char* text = nullptr;
  const kv_status status = kv_synthesize(theory.get(), gauge ? gauge->c_str() : nullptr, &text);
  if (status == KV_ERR_NOT_KELVIN_PLANCK) {
    Json result = Json::object();
    result["certificate"] = take_json(text);
    emit(make_report("synthesize", opts, {in}, std::move(result),
                     "no Clausius-Duhem pair exists: the theory violates Kelvin-Planck",
                     kExitViolated),
         opts);
    return kExitViolated;
  }
  expect_ok(status, file);
  Json pair = take_json(text);

  // Margins come from the independent verifier, not the synthesizer.
  int passed = 0;
  char* margins = nullptr;
  expect_ok(kv_verify(theory.get(), pair.dump().c_str(), &passed, &margins), file);
  Json result = Json::object();
  result["pair"] = std::move(pair);
  result["margin_report"] = take_json(margins);
  if (!passed) {
    throw InputError("internal: synthesized pair failed verification");
  }
  emit(make_report("synthesize", opts, {in}, std::move(result),
                   "Clausius-Duhem pair synthesized and verified", kExitOk),
       opts);
  return kExitOk;
}

int cmd_verify(const std::string& theory_file, const std::string& payload_file,
               const Options& opts) {
  const Input theory_in = read_input(theory_file);
  const Input payload_in = read_input(payload_file);
  Theory theory = load_theory(theory_in);
  int passed = 0;
  char* text = nullptr;
  expect_ok(kv_verify(theory.get(), payload_in.text.c_str(), &passed, &text), payload_file);
  Json result = take_json(text);
  const int code = passed ? kExitOk : kExitVerifyFailed;
  const std::string what =
      result["kind"] == "margin_report" ? "Clausius-Duhem pair" : "violation certificate";
  const std::string summary = what + (passed ? " verified" : " FAILED verification");
  emit(make_report("verify", opts, {theory_in, payload_in}, std::move(result), summary, code), opts);
  return code;
}

int cmd_analyze(const std::optional<std::string>& file, const std::optional<std::string>& example,
                int n_max, const Options& opts) {
  std::vector<Input> inputs;
  Theory family;
  if (file) {
    inputs.push_back(read_input(*file));
    family = load_theory(inputs.back());
  } else if (example) {
    const kv_example which = (*example == "A" || *example == "a") ? KV_EXAMPLE_A
                             : (*example == "B" || *example == "b")
                                 ? KV_EXAMPLE_B
                                 : throw InputError("unknown example \"" + *example + "\"");
    kv_theory* raw = nullptr;
    expect_ok(kv_theory_generate(which, n_max, &raw), "analyze");
    family.reset(raw);
  } else {
    throw InputError("analyze needs a family file or --example with --n-max");
  }
  char* text = nullptr;
  expect_ok(kv_analyze(family.get(), &text), "analyze");
  Json result = take_json(text);
  const auto& entries = result["entries"];
  std::string summary = "forbidden-distance " +
                        std::string(result["strictly_decreasing"].get<bool>() ? "strictly decreasing"
                                                                              : "not strictly decreasing") +
                        " over " + std::to_string(entries.size()) + " term(s); final distance " +
                        entries.back()["distance"].get<std::string>();
  emit(make_report("analyze", opts, inputs, std::move(result), summary, kExitOk), opts);
  return kExitOk;
}

int cmd_ingest(const std::string& record_file, const std::string& space_file, bool history,
               const Options& opts) {
  const Input record = read_input(record_file);
  const Input space = read_input(space_file);
  char* text = nullptr;
  expect_ok(kv_ingest(record.text.c_str(), space.text.c_str(), history ? 1 : 0, &text), record_file);
  emit(take_json(text), opts);
  return kExitOk;
}

// "COEF:PATH"
std::pair<std::string, std::string> split_item(const std::string& item) {
  const auto colon = item.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
    throw InputError("conic item \"" + item + "\" must look like COEF:PATH");
  }
  return {item.substr(0, colon), item.substr(colon + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kelvin: exact Kelvin-Planck decision and Clausius-Duhem synthesis"};
  app.require_subcommand(1);

  Options opts;
  for (int i = 1; i < argc; ++i) opts.argv.emplace_back(argv[i]);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opts.output, "Write the document to a file instead of stdout");
  };
  auto add_approx = [&](CLI::App* sub) {
    sub->add_flag("--approx", opts.approx, "Add non-authoritative decimal renderings");
    sub->add_option("--digits", opts.digits, "Fractional digits for --approx")->capture_default_str();
  };

  std::string example;
  int n = 0;
  auto* generate = app.add_subcommand("generate", "Emit a truncated example family as a theory");
  generate->add_option("example", example, "A or B")->required();
  generate->add_option("--n", n, "Truncation N >= 1")->required();
  add_common(generate);

  std::vector<std::string> check_files;
  int jobs = 1;
  auto* check = app.add_subcommand("check", "Decide the Kelvin-Planck condition");
  check->add_option("theory", check_files, "Theory file(s)")->required();
  check->add_option("--jobs", jobs, "Check several files concurrently")->capture_default_str();
  add_common(check);
  add_approx(check);

  std::string theory_file;
  std::optional<std::string> gauge;
  auto* synthesize = app.add_subcommand("synthesize", "Synthesize a Clausius-Duhem pair");
  synthesize->add_option("theory", theory_file)->required();
  synthesize->add_option("--gauge", gauge, "State where entropy is set to zero");
  add_common(synthesize);
  add_approx(synthesize);

  std::string payload_file;
  auto* verify = app.add_subcommand("verify", "Verify a pair or certificate against a theory");
  verify->add_option("theory", theory_file)->required();
  verify->add_option("payload", payload_file, "Pair, certificate, or report")->required();
  add_common(verify);
  add_approx(verify);

  std::optional<std::string> family_file;
  std::optional<std::string> analyze_example;
  int n_max = 0;
  auto* analyze = app.add_subcommand("analyze", "Forbidden-direction analysis of a process family");
  analyze->add_option("family", family_file, "Theory file whose processes form the family");
  analyze->add_option("--example", analyze_example, "A or B");
  analyze->add_option("--n-max", n_max, "Family length for --example");
  add_common(analyze);
  add_approx(analyze);

  std::string record_file;
  std::string space_file;
  bool as_history = false;
  auto* ingest = app.add_subcommand("ingest", "Derive a process from a body-process record");
  ingest->add_option("record", record_file)->required();
  ingest->add_option("--space", space_file, "File with a \"states\" list")->required();
  ingest->add_flag("--history", as_history, "Emit the cumulative history instead");
  add_common(ingest);

  auto* hist = app.add_subcommand("history-ops", "Process-history algebra");
  hist->require_subcommand(1);
  std::vector<std::string> hfiles;
  std::string from;
  std::string to;
  unsigned long pieces = 1;
  std::vector<std::string> items;

  auto* h_endpoint = hist->add_subcommand("endpoint", "Process at the final time");
  h_endpoint->add_option("history", hfiles)->required()->expected(1);
  auto* h_restrict = hist->add_subcommand("restrict", "Process of a sub-interval");
  h_restrict->add_option("history", hfiles)->required()->expected(1);
  h_restrict->add_option("--from", from)->required();
  h_restrict->add_option("--to", to)->required();
  auto* h_compose = hist->add_subcommand("compose", "Parallel composition of equal durations");
  h_compose->add_option("histories", hfiles)->required()->expected(2);
  auto* h_subdivide = hist->add_subcommand("subdivide", "Run N segments simultaneously");
  h_subdivide->add_option("history", hfiles)->required()->expected(1);
  h_subdivide->add_option("--n", pieces)->required();
  auto* h_sum = hist->add_subcommand("rational-sum", "Sum of histories with rational duration ratio");
  h_sum->add_option("histories", hfiles)->required()->expected(2);
  auto* h_conic = hist->add_subcommand("conic-combination", "Conic combination with rational weights");
  h_conic->alias("conic");
  h_conic->add_option("--item", items, "COEF:PATH, repeatable")->required();
  for (auto* sub : {h_endpoint, h_restrict, h_compose, h_subdivide, h_sum, h_conic}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate) return cmd_generate(example, n, opts);
    if (*check) return cmd_check(check_files, jobs, opts);
    if (*synthesize) return cmd_synthesize(theory_file, gauge, opts);
    if (*verify) return cmd_verify(theory_file, payload_file, opts);
    if (*analyze) return cmd_analyze(family_file, analyze_example, n_max, opts);
    if (*ingest) return cmd_ingest(record_file, space_file, as_history, opts);

    std::vector<Input> inputs;
    std::vector<History> histories;
    for (const auto& f : hfiles) {
      inputs.push_back(read_input(f));
      histories.push_back(load_history(inputs.back()));
    }
    if (*h_endpoint || *h_restrict) {
      char* text = nullptr;
      if (*h_endpoint) {
        expect_ok(kv_history_endpoint(histories[0].get(), &text), hfiles[0]);
      } else {
        expect_ok(kv_history_restrict(histories[0].get(), from.c_str(), to.c_str(), &text), hfiles[0]);
      }
      emit(take_json(text), opts);
      return kExitOk;
    }
    kv_history* raw = nullptr;
    if (*h_compose) {
      expect_ok(kv_history_compose(histories[0].get(), histories[1].get(), &raw), "compose");
      emit(history_json(History(raw).get()), opts);
      return kExitOk;
    }
    if (*h_subdivide) {
      expect_ok(kv_history_subdivide(histories[0].get(), pieces, &raw), "subdivide");
      emit(history_json(History(raw).get()), opts);
      return kExitOk;
    }

    Json doc = Json::object();
    if (*h_sum) {
      expect_ok(kv_history_rational_sum(histories[0].get(), histories[1].get(), &raw), "rational-sum");
    } else {
      std::vector<std::string> coefficients;
      for (const auto& item : items) {
        auto [coef, path] = split_item(item);
        coefficients.push_back(coef);
        inputs.push_back(read_input(path));
        histories.push_back(load_history(inputs.back()));
      }
      std::vector<const kv_history*> handles;
      std::vector<const char*> coef_ptrs;
      for (std::size_t i = 0; i < histories.size(); ++i) {
        handles.push_back(histories[i].get());
        coef_ptrs.push_back(coefficients[i].c_str());
      }
      char* info = nullptr;
      expect_ok(kv_history_conic(handles.data(), coef_ptrs.data(), handles.size(), &raw, &info),
                "conic-combination");
      Json extra = take_json(info);
      doc["common_denominator"] = extra["common_denominator"];
      doc["replicas"] = extra["replicas"];
    }
    History result(raw);
    char* endpoint = nullptr;
    expect_ok(kv_history_endpoint(result.get(), &endpoint), "endpoint");
    Json out = Json::object();
    out["endpoint"] = take_json(endpoint);
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = it.value();
    out["history"] = history_json(result.get());
    emit(out, opts);
    return kExitOk;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
