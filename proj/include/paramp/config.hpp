#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "paramp/field.hpp"
#include "paramp/params.hpp"

namespace paramp {

// Subset of TOML used by scenario files: [section] headers, key = value
// with numbers, "strings", true/false and flat arrays, # comments.
using ConfigValue =
    std::variant<std::int64_t, double, bool, std::string, std::vector<std::string>>;

class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t integer_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  std::string string(const std::string& section, const std::string& key) const;
  std::string string_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  std::vector<std::string> strings_or(const std::string& section, const std::string& key,
                                      std::vector<std::string> fallback) const;

  const std::map<std::string, std::map<std::string, ConfigValue>>& sections() const {
    return sections_;
  }

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  const ConfigValue& require(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

enum class ObjectKind { Uniform, Gaussian, TwoGaussian, File };

struct ObjectSpec {
  ObjectKind kind = ObjectKind::Gaussian;
  double amplitude = 0.0;  // peak s, sqrt(photons m^-2 s^-1)
  double width = 0.0;      // Gaussian 1/e amplitude radius (m)
  double offset = 0.0;     // two-gaussian: centres at (+-offset, 0)
  std::filesystem::path path;
};

struct ModesSpec {
  int pmax = 2;
  int lmax = 2;
  std::optional<double> waist;  // defaults to rho0
};

struct Scenario {
  CavityParams cavity;
  OpticalTrain train;
  DetectorParams detector;
  TransverseGrid grid;
  ObjectSpec object;
  ModesSpec modes;
  double validity_threshold = kDefaultValidityThreshold;
  std::uint64_t seed = 1;
  std::size_t shots = 1000;
  std::vector<std::string> emit;
  std::filesystem::path out_dir = ".";
};

// Errors carry the offending key, e.g. "cavity: pump must be < 1 (got 1)".
Scenario scenario_from_document(const ConfigDocument& doc,
                                const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Object amplitude s(rho) on the scenario grid.
RealField make_object(const Scenario& scenario);

}  // namespace paramp
