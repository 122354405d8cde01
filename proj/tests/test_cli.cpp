#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Run run(const std::string& args) {
  const std::string command = std::string(KELVIN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(KELVIN_TEST_DATA) + "/" + name; }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("kelvin_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents) const {
    const fs::path p = path / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate and check example A") {
  TempDir tmp;
  Run gen = run("generate A --n 10 -o " + tmp.at("a.json"));
  REQUIRE(gen.exit_code == 0);
  Run check = run("check " + tmp.at("a.json"));
  CHECK(check.exit_code == 0);
  const Json report = check.json();
  CHECK(report["command"] == "check");
  CHECK(report["result"]["verdict"] == "compliant");
  CHECK(report["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(report["exit_code"] == 0);
  CHECK(run("generate A --n 0").exit_code == 1);
  CHECK(run("generate C --n 2").exit_code == 1);
}

TEST_CASE("input errors exit 1") {
  CHECK(run("check " + data("malformed.json")).exit_code == 1);
  CHECK(run("check " + data("unbalanced.json")).exit_code == 1);
  CHECK(run("check /nonexistent/theory.json").exit_code == 1);
  CHECK(run("frobnicate").exit_code == 1);
}

TEST_CASE("violated theory exits 3 with a unit certificate") {
  Run check = run("check " + data("leak.json"));
  CHECK(check.exit_code == 3);
  const Json r = check.json();
  CHECK(r["result"]["verdict"] == "violated");
  CHECK(r["result"]["certificate"]["lambda"] == Json::array({"1"}));
  CHECK(r["result"]["certificate"]["support"] == Json::array({"leak"}));

  Run synth = run("synthesize " + data("leak.json"));
  CHECK(synth.exit_code == 3);
  CHECK(synth.json()["result"]["certificate"]["kind"] == "violation_certificate");
}

TEST_CASE("synthesize, verify and tamper") {
  TempDir tmp;
  Run synth = run("synthesize " + data("reversible.json") + " --gauge b");
  REQUIRE(synth.exit_code == 0);
  Json report = synth.json();
  const Json pair = report["result"]["pair"];
  CHECK(pair["gauge_state"] == "b");
  CHECK(pair["eta"]["b"] == "0");
  CHECK(report["result"]["margin_report"]["passed"] == true);

  const std::string report_path = tmp.file("report.json", report.dump());
  CHECK(run("verify " + data("reversible.json") + " " + report_path).exit_code == 0);

  Json tampered = pair;
  tampered["beta"]["h"] = "0";
  tampered.erase("temperature");
  Run bad = run("verify " + data("reversible.json") + " " + tmp.file("bad.json", tampered.dump()));
  CHECK(bad.exit_code == 2);
  CHECK(bad.json()["result"]["beta_positive"] == false);

  CHECK(run("synthesize " + data("reversible.json") + " --gauge zz").exit_code == 1);
}

TEST_CASE("certificate verification") {
  TempDir tmp;
  Json cert = run("check " + data("leak.json")).json()["result"]["certificate"];
  CHECK(run("verify " + data("leak.json") + " " + tmp.file("c.json", cert.dump())).exit_code == 0);
  cert["witness"]["q"]["a"] = "0";
  Run zero = run("verify " + data("leak.json") + " " + tmp.file("z.json", cert.dump()));
  CHECK(zero.exit_code == 2);
  CHECK(zero.json()["result"]["checks"]["witness_matches_weights"] == false);
  const std::string unit = tmp.file("u.json", R"({"lambda": ["0"]})");
  CHECK(run("verify " + data("leak.json") + " " + unit).exit_code == 2);
}

TEST_CASE("approx rendering is additive") {
  Run r = run("check " + data("reversible.json") + " --approx --digits 3");
  REQUIRE(r.exit_code == 0);
  const Json j = r.json();
  CHECK(j.contains("approx"));
  CHECK(j["result"]["verdict"] == "compliant");
}

TEST_CASE("multi-file check") {
  Run r = run("check " + data("reversible.json") + " " + data("leak.json") + " --jobs 2");
  CHECK(r.exit_code == 3);
  const Json j = r.json();
  CHECK(j["reports"].size() == 2);
  CHECK(j["reports"][0]["exit_code"] == 0);
  CHECK(j["reports"][1]["exit_code"] == 3);
  CHECK(run("check " + data("reversible.json") + " " + data("malformed.json")).exit_code == 1);
}

TEST_CASE("analyze") {
  Run r = run("analyze --example B --n-max 5");
  REQUIRE(r.exit_code == 0);
  const Json j = r.json();
  CHECK(j["result"]["entries"][0]["distance"] == "2/3");
  CHECK(j["result"]["entries"][4]["distance"] == "2/7");
  CHECK(j["result"]["strictly_decreasing"] == true);
  CHECK(j["result"]["limit_direction"]["q"]["1/2"] == "1");
}

TEST_CASE("ingest") {
  Run r = run("ingest " + data("record.json") + " --space " + data("space.json"));
  REQUIRE(r.exit_code == 0);
  const Json p = r.json();
  CHECK(p["delta_m"]["a"] == "-2");
  CHECK(p["delta_m"]["b"] == "2");
  CHECK(p["q"]["a"] == "4");
  Run h = run("ingest " + data("record.json") + " --space " + data("space.json") + " --history");
  REQUIRE(h.exit_code == 0);
  CHECK(h.json()["samples"].size() == 2);
}

TEST_CASE("history operations") {
  Run e = run("history-ops endpoint " + data("history.json"));
  REQUIRE(e.exit_code == 0);
  CHECK(e.json()["q"]["c"] == "-1");

  Run r = run("history-ops restrict " + data("history.json") + " --from 1 --to 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.json()["q"]["h"] == "0");
  CHECK(r.json()["q"]["c"] == "-1");
  CHECK(run("history-ops restrict " + data("history.json") + " --from 1/2 --to 2").exit_code == 1);

  CHECK(run("history-ops compose " + data("history.json") + " " + data("history_short.json")).exit_code == 1);

  Run s = run("history-ops subdivide " + data("history.json") + " --n 2");
  REQUIRE(s.exit_code == 0);
  CHECK(s.json()["duration"] == "1");

  Run sum = run("history-ops rational-sum " + data("history.json") + " " + data("history_short.json"));
  REQUIRE(sum.exit_code == 0);
  CHECK(sum.json()["endpoint"]["q"]["h"] == "0");
  CHECK(sum.json()["endpoint"]["q"]["c"] == "1");

  Run c = run("history-ops conic --item 1/2:" + data("history.json") + " --item 2/3:" + data("history_short.json"));
  REQUIRE(c.exit_code == 0);
  const Json cj = c.json();
  CHECK(cj["common_denominator"] == "6");
  CHECK(cj["endpoint"]["q"]["h"] == "-1/6");
  CHECK(cj["endpoint"]["q"]["c"] == "5/6");
}
