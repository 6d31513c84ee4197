#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nlreg/config.hpp"
#include "nlreg/report.hpp"

using namespace nlreg;
namespace fs = std::filesystem;

namespace {
std::string tmp_file(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("config parsing: sections, comments, errors") {
  const auto cfg = ConfigFile::parse("[a]\nx = 1.5 # trailing\n# full comment\n[b]\nname=hi\n");
  CHECK(cfg.get_double("a", "x", 0.0) == 1.5);
  CHECK(cfg.get_string("b", "name", "") == "hi");
  CHECK(cfg.get_int("a", "missing", 7) == 7);
  CHECK_THROWS_AS(ConfigFile::parse("[broken\n"), std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse("[s]\nno_equals_here\n"), std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse("[s]\nx = 1.5oops\n").get_double("s", "x", 0.0),
                  std::runtime_error);
}

TEST_CASE("kernel spec round-trips through its config block") {
  TailModel tail;
  tail.kind = TailKind::exponential_damping;
  tail.rate = 2.25;
  const auto k = make_kernel(1, make_log_perturbed_scaling(1.0, 1.0), tail);
  const auto cls = make_class(0.75, 2.5, true, k);

  const std::string text = kernel_to_config(k, cls);
  const auto cfg = ConfigFile::parse(text);
  const auto k2 = kernel_from_config(cfg);
  const auto cls2 = class_from_config(cfg);

  CHECK(k2.dim == k.dim);
  CHECK(k2.scaling.alpha == k.scaling.alpha);
  CHECK(k2.scaling.a2 == k.scaling.a2);
  CHECK(k2.scaling.delta2 == k.scaling.delta2);
  CHECK(k2.tail.kind == k.tail.kind);
  CHECK(k2.tail.rate == k.tail.rate);
  CHECK(k2.m0 == doctest::Approx(k.m0).epsilon(1e-12));
  CHECK(cls2.lambda == 0.75);
  CHECK(cls2.Lambda == 2.5);
  CHECK(cls2.symmetric);
}

TEST_CASE("json records: schema, escaping, determinism") {
  std::vector<CheckRecord> recs;
  CheckRecord a;
  a.check = "lemma31.f0";
  a.inputs = "r=0.5 \"quoted\"";
  a.lhs = 1.0 / 3.0;
  a.rhs = 2.0 / 3.0;
  a.margin = 0.5;
  a.pass = true;
  recs.push_back(a);
  a.check = "lemma32.wedge";
  a.pass = false;
  recs.push_back(a);

  const std::string path = tmp_file("nlreg_records.jsonl");
  write_json_records(path, recs);
  const std::string bytes1 = slurp(path);
  write_json_records(path, recs);
  CHECK(bytes1 == slurp(path));  // byte-stable

  std::istringstream in(bytes1);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);  // throws on malformed output
    CHECK(j.contains("check"));
    CHECK(j["check"].is_string());
    CHECK(j["inputs"].is_string());
    CHECK(j["lhs"].is_number());
    CHECK(j["rhs"].is_number());
    CHECK(j["margin"].is_number());
    CHECK(j["pass"].is_boolean());
    ++n;
  }
  CHECK(n == 2);

  // empty record list: a valid empty file
  write_json_records(path, {});
  CHECK(slurp(path).empty());
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(std::stod(format_g17(x)) == x);
  }
}

TEST_CASE("solution CSV round-trips to full precision") {
  SmoothFunction f;
  f.value = [](const Point& p) { return std::sin(3.0 * p[0]) + 0.1 * p[0]; };
  Box box;
  box.dim = 1;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 0.0};
  const auto u = sample_to_grid(f, box, 0.125);

  const std::string path = tmp_file("nlreg_solution.csv");
  write_solution_csv(path, u);
  const auto v = read_solution_csv(path);
  REQUIRE(v.values.size() == u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);
  CHECK(v.h == u.h);
  CHECK(v.bound == u.bound);
}

TEST_CASE("manifest and profile outputs are parseable") {
  RunManifest m;
  m.command = "verify-lemmas";
  m.config_hash = fnv1a_hash("abc");
  m.wall_seconds = 1.25;
  m.checks_total = 10;
  m.checks_passed = 10;
  m.outputs = {"records.jsonl"};
  m.extra.emplace_back("note", "x");
  const std::string path = tmp_file("nlreg_manifest.json");
  write_manifest(path, m);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["checks_total"] == 10);
  CHECK(j["command"] == "verify-lemmas");

  OscillationProfile prof;
  prof.radii = {0.5, 0.25};
  prof.osc = {1.0, 0.5};
  prof.usable = {1, 1};
  const std::string csv = tmp_file("nlreg_profile.csv");
  write_profile_csv(csv, prof);
  CHECK(slurp(csv) == "k,radius,osc\n0,0.5,1\n1,0.25,0.5\n");
}

TEST_CASE("exterior closures parse from their specs") {
  CHECK(exterior_from_spec("constant:0.5")({1.0, 0.0}) == 0.5);
  CHECK(exterior_from_spec("indicator:1:2")({1.5, 0.0}) == 1.0);
  CHECK(exterior_from_spec("indicator:1:2")({2.5, 0.0}) == 0.0);
  CHECK_THROWS_AS(exterior_from_spec("whatever:1"), std::runtime_error);
}
