#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrad/family.hpp"
#include "qrad/grid.hpp"
#include "qrad/quasinorm.hpp"

namespace qrad {

struct PairSpec {
  std::string domain = "disk";  // disk | superellipse | hexagon | square
  Mat2 A = Mat2::identity();
};

struct ExperimentConfig {
  PairSpec pair;
  std::vector<double> deltas{1.0 / 16, 1.0 / 32, 1.0 / 64};
  GridSpec grid{256, 32.0, {}};
  FamilySpec family;
  std::uint64_t seed = 1;
  std::string out = "qrad-out";
  // Subcommand parameters, all numeric lists (see docs/formats.md).
  std::map<std::string, std::vector<double>> params;

  double param(const std::string& key, double fallback) const;
  std::vector<double> param_list(const std::string& key, const std::vector<double>& fallback) const;
};

// Field-wise equality, doubles compared exactly.
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Throws a configuration error naming every offending field.
void validate(const ExperimentConfig& config);

std::string to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// SHA-256 of the canonical JSON form, hex encoded.
std::string config_hash(const ExperimentConfig& config);

CompatiblePair make_pair(const PairSpec& spec);

}  // namespace qrad
