#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Run run(const std::string& args, bool merge_stderr = true) {
  const std::string cmd = std::string("\"") + MINIMAX_CLI_PATH + "\" " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string("\"") + MINIMAX_TEST_DATA + "/" + name + "\""; }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("solve") {
  SUBCASE("pick-smaller file") {
    const auto r = run("solve " + data("pick_smaller_4.json"), false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["value"] == 0.0);
    CHECK(doc["certified"] == true);
  }
  SUBCASE("binary test file") {
    const auto r = run("solve --input " + data("binary_test.json"), false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["value"] == 0.25);
    CHECK(doc["prior"] == json::array({0.5, 0.5}));
    CHECK(doc.contains("procedure"));
    CHECK(doc.contains("gap"));
  }
  SUBCASE("builtin") {
    const auto r = run("solve --builtin clamp -n 6", false);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["value"] == 0.0);
  }
  SUBCASE("malformed kernel row") {
    const auto r = run("solve " + data("bad_kernel.json"));
    CHECK(r.code == 2);
    CHECK(contains(r.out, "kernel row 1"));
    CHECK(contains(r.out, "0.9"));
  }
  SUBCASE("JSON syntax error carries the line") {
    const auto r = run("solve " + data("malformed.json"));
    CHECK(r.code == 2);
    CHECK(contains(r.out, "line 4"));
  }
  SUBCASE("missing file") {
    CHECK(run("solve " + data("does_not_exist.json")).code == 2);
  }
  SUBCASE("pretty table") {
    const auto r = run("solve --pretty " + data("binary_test.json"));
    CHECK(r.code == 0);
    CHECK(contains(r.out, "0.25"));
  }
}

TEST_CASE("approximate") {
  SUBCASE("location schedule") {
    const auto r = run("approximate --family location --mesh 0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125 "
                       "--deterministic",
                       false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["family"] == "location");
    CHECK_FALSE(doc.contains("timestamp"));
    REQUIRE(doc["results"].size() == 7);
    for (const auto& e : doc["results"]) {
      CHECK(e["interval"][0].get<double>() <= 0.5);
      CHECK(e["interval"][1].get<double>() >= 0.5);
    }
  }
  SUBCASE("bernoulli") {
    const auto r = run("approximate --family bernoulli --mesh 0.01", false);
    REQUIRE(r.code == 0);
    const double v = json::parse(r.out)["results"][0]["value"].get<double>();
    CHECK(std::abs(v - 0.0625) <= 5e-3);
  }
  SUBCASE("empty schedule") { CHECK(run("approximate --family location").code == 2); }
  SUBCASE("increasing schedule") { CHECK(run("approximate --family location --mesh 0.1,0.2").code == 2); }
  SUBCASE("unknown family lists the alternatives") {
    const auto r = run("approximate --family gaussian --mesh 0.5");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "location"));
    CHECK(contains(r.out, "bernoulli"));
    CHECK(contains(r.out, "clamp"));
  }
}

TEST_CASE("wasserstein") {
  SUBCASE("unit translation") {
    const auto r = run("wasserstein " + data("dirac0.json") + " " + data("dirac1.json") + " --k 1", false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["distance"] == 1.0);
    CHECK(doc["cdf_oracle"] == 1.0);
    CHECK(doc["oracle_agrees"] == true);
  }
  SUBCASE("k = 3") {
    const auto r = run("wasserstein " + data("dirac0.json") + " " + data("dirac1.json") + " --k 3", false);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["distance"] == 3.0);
  }
  SUBCASE("spread measure against a Dirac") {
    const auto r = run("wasserstein " + data("spread.json") + " " + data("dirac0.json"), false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["distance"].get<double>() == doctest::Approx(0.25 + 0.25 + 0.5));
    CHECK(doc["oracle_agrees"] == true);
  }
  SUBCASE("bad k and missing inputs") {
    CHECK(run("wasserstein " + data("dirac0.json") + " " + data("dirac1.json") + " --k 0").code == 2);
    CHECK(run("wasserstein " + data("dirac0.json")).code == 2);
  }
}

TEST_CASE("fp") {
  SUBCASE("binary test") {
    const auto r = run("fp " + data("binary_test.json") + " --iters 20000", false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["lower"].get<double>() <= 0.25);
    CHECK(doc["upper"].get<double>() >= 0.25);
    CHECK(doc["width"].get<double>() < 0.05);
  }
  SUBCASE("pick-smaller") {
    const auto doc = json::parse(run("fp " + data("pick_smaller_4.json") + " --iters 10000", false).out);
    CHECK(doc["lower"].get<double>() <= 0.0);
    CHECK(doc["upper"].get<double>() >= 0.0);
  }
  SUBCASE("zero iterations") { CHECK(run("fp " + data("binary_test.json") + " --iters 0").code == 2); }
}

TEST_CASE("verify") {
  SUBCASE("filter") {
    const auto r = run("verify --filter=transport --deterministic", false);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    REQUIRE(doc["checks"].size() == 1);
    CHECK(doc["checks"][0]["group"] == "transport");
    CHECK(doc["passed"] == true);
  }
  SUBCASE("injected loss perturbation is a named failure") {
    const auto r = run("verify --filter minimax --inject-loss-perturbation --pretty");
    CHECK(r.code == 1);
    CHECK(contains(r.out, "FAIL"));
    CHECK(contains(r.out, "minimax-equality"));
    CHECK(contains(r.out, "loss perturbation"));
  }
  SUBCASE("no match") { CHECK(run("verify --filter nothing-matches-this").code == 2); }
}

TEST_CASE("deterministic output is byte-identical") {
  for (const std::string args : {"approximate --family bernoulli --mesh 0.1,0.05 --deterministic",
                                 "verify --filter core --deterministic", "solve --builtin binary_test --deterministic",
                                 "fp --builtin clamp -n 5 --iters 500 --deterministic"}) {
    const auto a = run(args, false);
    const auto b = run(args, false);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(contains(a.out, "timestamp"));
  }
  CHECK(contains(run("solve --builtin binary_test", false).out, "timestamp"));
  CHECK(contains(run("approximate --family location --mesh 0.5", false).out, "timestamp"));
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("solve").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("build round-trips through solve") {
  const auto r = run("build --builtin matching_pennies", false);
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["loss"] == json::parse("[[1.0,-1.0],[-1.0,1.0]]"));
}
