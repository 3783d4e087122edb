#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using crn::cli::run;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Compares against tests/golden/<name>; CRN_UPDATE_GOLDEN=1 rewrites the file instead.
void check_golden(const std::string& name, const std::string& text) {
  auto path = std::filesystem::path(CRN_GOLDEN_DIR) / name;
  if (const char* u = std::getenv("CRN_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << text;
    return;
  }
  REQUIRE(std::filesystem::exists(path));
  CHECK(Json::parse(text) == Json::parse(slurp(path)));
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("crntool-test-" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("fnv1a") {
  CHECK(crn::cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(crn::cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(crn::cli::fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("help and usage errors") {
  auto h = call({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("sweep-test") != std::string::npos);
  for (auto sub : {"analyze", "sweep-test", "polygon", "simulate", "verify", "gac3"}) {
    auto r = call({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  CHECK(call({"verify", "--help"}).out.find("--claim") != std::string::npos);
  CHECK(call({"polygon", "--help"}).out.find("--alpha") != std::string::npos);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"analyze"}).code == 2);
  CHECK(call({"polygon", network_path("eq31.crn"), "--eta", "2"}).code == 2);
  CHECK(call({"analyze", "/nonexistent/net.crn"}).code == 2);
}

TEST_CASE("input errors exit with 2") {
  auto dir = scratch_dir("bad");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.crn") << "A -> B\nA + -> C\n";
  auto r = call({"analyze", (dir / "bad.crn").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::ofstream(dir / "self.crn") << "A -> A\n";
  CHECK(call({"analyze", (dir / "self.crn").string()}).code == 2);
  CHECK(call({"gac3", network_path("eq31.crn")}).code == 2);
}

TEST_CASE("analyze and sweep-test golden output") {
  auto a = call({"analyze", network_path("eq31.crn")});
  CHECK(a.code == 0);
  check_golden("analyze_eq31.json", a.out);

  auto s = call({"sweep-test", network_path("lotka.crn")});
  CHECK(s.code == 0);
  check_golden("sweep_lotka.json", s.out);
  auto j = Json::parse(s.out);
  CHECK(j["verdict"]["endotactic"] == false);
  CHECK(j["manifest"]["subcommand"] == "sweep-test");
  CHECK(j["manifest"]["version"] == crn::cli::version);

  auto e = call({"sweep-test", network_path("eq31.crn")});
  CHECK(Json::parse(e.out)["verdict"]["endotactic"] == true);
}

TEST_CASE("polygon output") {
  auto r = call({"polygon", network_path("eq31.crn"), "--eta", "0.5"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j.contains("manifest"));
  CHECK(j.contains("family"));
  CHECK(j.contains("polygon"));
  CHECK(j["polygon"]["vertices"].size() == 10);

  CHECK(call({"polygon", network_path("lotka.crn")}).code == 1);
  auto svg = call({"polygon", network_path("eq31.crn"), "--format", "svg"});
  CHECK(svg.out.rfind("<svg", 0) == 0);
  auto csv = call({"polygon", network_path("eq31.crn"), "--format", "csv"});
  CHECK(csv.out.find(',') != std::string::npos);

  auto dir = scratch_dir("poly");
  CHECK(call({"polygon", network_path("eq31.crn"), "--out-dir", dir.string()}).code == 0);
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  auto m = Json::parse(slurp(dir / "manifest.json"));
  CHECK(m["subcommand"] == "polygon");
  CHECK(m["input"] == "eq31.crn");
  CHECK(m["input_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("simulate is reproducible") {
  std::vector<std::string> args{"simulate", network_path("eq31.crn"), "--c0", "0.5,2", "--schedule", "piecewise",
                                "--horizon", "10", "--seed", "3", "--format", "csv"};
  auto a = call(args), b = call(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  args[9] = "4";
  CHECK(call(args).out != a.out);
  CHECK(call({"simulate", network_path("eq31.crn"), "--c0", "1,2,3"}).code == 2);
}

TEST_CASE("verify verdicts and exit codes") {
  auto p = call({"verify", "--claim", "permanence", network_path("eq31.crn"), "--eta", "0.5", "--seed", "7",
                 "--ensemble", "6", "--horizon", "300"});
  CHECK(p.code == 0);
  auto pj = Json::parse(p.out);
  CHECK(pj["verdict"] == "PASS");

  auto again = call({"verify", "--claim", "permanence", network_path("eq31.crn"), "--eta", "0.5", "--seed", "7",
                     "--ensemble", "6", "--horizon", "300"});
  CHECK(again.out == p.out);

  auto c = call({"verify", "--claim", "containment", network_path("eq31.crn"), "--ensemble", "4", "--horizon", "50"});
  CHECK(c.code == 0);

  auto lv = call({"verify", "--claim", "lower-endotactic-persistence", network_path("lotka.crn"), "--ensemble", "2",
                  "--horizon", "10"});
  CHECK(lv.code == 1);
  CHECK(Json::parse(lv.out)["verdict"] == "INAPPLICABLE");
}

TEST_CASE("gac3") {
  auto dir = scratch_dir("gac");
  auto r = call({"gac3", network_path("gac-a.crn"), "--kappa", "1", "--seed", "2", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(call({"gac3", network_path("gac-b.crn"), "--kappa", "1,2"}).code == 2);
}
