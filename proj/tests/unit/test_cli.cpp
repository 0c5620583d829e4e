#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include "owb/commands.hpp"
#include "owb/config.hpp"

using namespace owb;
using nlohmann::json;

namespace {

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(OWB_SOURCE_DIR) / "configs" / (name + ".config");
}

json minimal() {
  return json::parse(R"({
    "schema_version": 1,
    "group": {"named": "cyclic", "n": 2},
    "algebra": {"named": "scalars"},
    "reps": [{"named": "left_regular"}]
  })");
}

std::string config_error_path(const json& doc) {
  try {
    load_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "no error";
}

const Entry* find(const Report& r, const std::string& name) {
  for (const auto& e : r.entries)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("schema errors carry paths") {
  CHECK_NOTHROW(load_config(minimal()));

  auto j = minimal();
  j["schema_version"] = 2;
  CHECK(config_error_path(j) == "$.schema_version");

  j = minimal();
  j.erase("schema_version");
  CHECK(config_error_path(j) == "$.schema_version");

  j = minimal();
  j["colour"] = "red";
  CHECK(config_error_path(j) == "$.colour");

  j = minimal();
  j["group"] = json::parse(R"({"table": [[0, 1], [1, "x"]]})");
  CHECK(config_error_path(j) == "$.group.table[1][1]");

  j = minimal();
  j["algebra"] = json::parse(R"({"named": "octonions"})");
  CHECK(config_error_path(j).rfind("$.algebra", 0) == 0);

  j = minimal();
  j["group"] = json::parse(R"({"named": "symmetric", "n": 5})");
  CHECK(config_error_path(j).rfind("$.group", 0) == 0);

  try {
    load_config_file(fixture("bad_table"));
    FAIL("malformed table accepted");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "$.group.table[1][1]");
    CHECK(std::string(e.what()).find("$.group.table[1][1]") != std::string::npos);
  }
}

TEST_CASE("mathematical errors are not schema errors") {
  auto j = minimal();
  j["group"] = json::parse(R"({"table": [[0, 1], [0, 1]]})");
  CHECK_THROWS_AS(load_config(j), ValidationError);
}

TEST_CASE("fixtures load") {
  for (const char* name : {"z2_trivial", "z2_swap", "z2_weighted", "classical", "s3_natural", "upper_triangular",
                           "bad_weight"}) {
    CAPTURE(name);
    const auto cfg = load_config_file(fixture(name));
    CHECK(cfg.name == name);
    CHECK_FALSE(cfg.reps.empty());
  }
  const auto z = load_config_file(fixture("z2_weighted"));
  REQUIRE(z.classical);
  REQUIRE(z.weight);
  CHECK(*z.weight == Vec{1, 2});
}

TEST_CASE("check command") {
  const auto r = cmd_check(fixture("z2_trivial"));
  CHECK(r.failures() == 0);
  CHECK(r.command == "check");
  CHECK(r.subject == "z2_trivial");
  CHECK(cmd_check(fixture("z2_swap")).failures() == 0);

  const auto bad = cmd_check(fixture("bad_table"));
  CHECK(bad.failures() == 1);
  const Entry* e = find(bad, "config schema");
  REQUIRE(e);
  CHECK(e->detail.find("$.group.table[1][1]") != std::string::npos);
}

TEST_CASE("crossed command") {
  const auto r = cmd_crossed(fixture("z2_trivial"), {true, true, true});
  CHECK(r.failures() == 0);
  const auto swap = cmd_crossed(fixture("z2_swap"), {true, false, false});
  CHECK(swap.failures() == 0);
}

TEST_CASE("beurling command") {
  const auto r = cmd_beurling(fixture("classical"), {true, true, true});
  CHECK(r.failures() == 0);
  const auto bad = cmd_beurling(fixture("bad_weight"), {true, false, false});
  REQUIRE(bad.failures() >= 1);
  const Entry* e = find(bad, "weight submultiplicative");
  REQUIRE(e);
  CHECK(e->status == Status::fail);
  CHECK(e->detail.find("pair (0, 0)") != std::string::npos);
  // nothing is built from an invalid weight
  CHECK(bad.entries.size() == 1);
}

TEST_CASE("reports are versioned and every number is tagged") {
  const auto r = cmd_beurling(fixture("z2_weighted"), {true, false, true});
  const auto j = r.to_json();
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("command") == "beurling");
  CHECK(j.at("failures") == r.failures());
  for (const auto& entry : j.at("entries")) {
    CHECK(entry.contains("status"));
    CHECK(entry.contains("method"));
    if (!entry.contains("values")) continue;
    for (const auto& [key, v] : entry.at("values").items()) {
      CAPTURE(key);
      CHECK_FALSE(v.is_number());
      if (v.is_boolean()) continue;
      CHECK(v.contains("value"));
      CHECK(v.contains("method"));
    }
  }
}

TEST_CASE("random suite is deterministic") {
  const auto a = cmd_random(42, 15);
  const auto b = cmd_random(42, 15);
  CHECK(a.failures() == 0);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_text() == b.to_text());
  CHECK(cmd_random(43, 15).to_json().dump() != a.to_json().dump());
  CHECK(cmd_crossed(fixture("s3_natural"), {true, true, true}).to_json().dump() ==
        cmd_crossed(fixture("s3_natural"), {true, true, true}).to_json().dump());
}
