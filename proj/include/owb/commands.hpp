#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "owb/cones.hpp"
#include "owb/corpus.hpp"

namespace owb {

enum class Status { pass, fail, sampled, info, skipped };
std::string to_string(Status s);

/// One line of a report.  `values` holds named numbers, each with its method tag.
struct Entry {
  std::string name;
  Status status = Status::pass;
  Method method = Method::exact;
  std::string detail;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
};

struct Report {
  std::string command;
  std::string subject;
  std::vector<Entry> entries;

  Entry& add(std::string name, Status status, Method method = Method::exact, std::string detail = {});
  /// Pass when `ok`, fail otherwise; sampled checks pass as `sampled`.
  Entry& check(std::string name, bool ok, Method method = Method::exact, std::string detail = {});
  std::size_t failures() const;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Stores `t` under `key` as {value, method}.
void put(Entry& e, const std::string& key, const Tagged& t);
void put(Entry& e, const std::string& key, double exact_value);

struct CrossedFlags {
  bool report_cone = false;
  bool correspond = false;
  bool triple = false;
};

struct BeurlingFlags {
  bool bounds = false;
  bool lattice = false;
  bool classical = false;
};

Report cmd_check(const std::filesystem::path& config);
Report cmd_crossed(const std::filesystem::path& config, const CrossedFlags& flags);
Report cmd_beurling(const std::filesystem::path& config, const BeurlingFlags& flags);
Report cmd_random(std::uint64_t seed, std::size_t count, const CorpusOptions& caps = {8, 4, true});

}  // namespace owb
