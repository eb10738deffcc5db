#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ballslep/error.hpp"

namespace ballslep::experiment {

using Json = nlohmann::json;

enum class Kind { Spectrum, Shannon, KernelScan, Conjecture, Optics, Bounds, Verify };

const char* to_string(Kind k);
Kind kind_from_string(const std::string& s);  // throws ConfigError

/// Invalid configuration; `key` is the dotted path of the offending entry.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string key, const std::string& what)
      : ValidationError(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct DomainConfig {
  std::string kind = "full_ball";  // full_ball | shell | tesseroid | sector
  int d = 3;
  double r1 = 0.0;
  double r2 = 1.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  bool operator==(const DomainConfig&) const = default;
};

struct BasisConfig {
  std::string ell = "linear(0)";
  std::string index = "poly(4)";
  bool operator==(const BasisConfig&) const = default;
};

struct NumericConfig {
  int radial = 0;  // 0: default order
  int polar = 0;
  int azimuthal = 0;
  bool vectors = false;
  int threads = 1;  // 0: hardware concurrency
  bool operator==(const NumericConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::string number_format = "sci17";  // sci17 | shortest
  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  Kind kind = Kind::Verify;
  std::string preset;  // informational
  DomainConfig domain;
  BasisConfig basis;
  NumericConfig numeric;
  Json params = Json::object();  // kind-specific, see README
  OutputConfig output;
  bool operator==(const ExperimentConfig&) const = default;
};

Json to_json(const ExperimentConfig& c);
/// Strict: unknown keys and wrong types raise ConfigError.
ExperimentConfig from_json(const Json& j);

/// Overlays `patch` onto `base` (objects merged recursively, other values replaced).
void merge_into(Json& base, const Json& patch);

/// Applies "a.b.c=value"; value is parsed as JSON when possible, else taken as a string.
void apply_override(Json& j, const std::string& assignment);

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

/// Fixed, ordered list.
const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);  // throws ConfigError

/// Checks every parameter and the scale guardrails before any computation.
void validate(const ExperimentConfig& c, bool force);

/// FNV-1a 64 of the canonical JSON, omitting output.dir and numeric.threads.
std::uint64_t config_hash(const ExperimentConfig& c);
std::string hex64(std::uint64_t v);

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "0.1.0";

struct RunResult {
  Json summary;                             // the summary.json document
  std::vector<std::filesystem::path> files;  // written files, all under output.dir
};

/// Validates, runs and writes CSV tables plus summary.json into output.dir.
RunResult run(const ExperimentConfig& c, bool force);

/// Number formatting used in CSV output.
std::string format_number(double v, const std::string& number_format);

}  // namespace ballslep::experiment
