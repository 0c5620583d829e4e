#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "owb/dynsys.hpp"
#include "owb/reps.hpp"

namespace owb {

inline constexpr int kSchemaVersion = 1;

/// Schema violation; `path` locates the offending value, e.g. $.group.table[1][2].
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Scalar-algebra corollary input: operators U_r on an ordered space.
struct ClassicalSpec {
  OrderedSpace space;
  std::vector<Matrix> u;
};

struct SystemConfig {
  std::string name;
  DynamicalSystem system;
  std::vector<CovariantRep> reps;
  /// Raw weight values; validated by the commands that use them.
  std::optional<Vec> weight;
  std::optional<ClassicalSpec> classical;
};

/// Schema check followed by construction.  Schema problems raise ConfigError;
/// mathematical problems (non-associative table, non-positive action, ...)
/// raise ValidationError.
SystemConfig load_config(const nlohmann::json& doc);
SystemConfig load_config_file(const std::filesystem::path& file);

NormedSpace parse_space(const nlohmann::json& j, const std::string& path);
OrderedSpace parse_ordered_space(const nlohmann::json& j, const std::string& path);

}  // namespace owb
