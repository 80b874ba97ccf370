#pragma once

// Versioned JSON documents shared by the pipeline steps: the run
// configuration and fitted model files.

#include <cstdint>
#include <string>
#include <vector>

#include "nsgev/ingest.hpp"
#include "nsgev/nonstationary.hpp"
#include "nsgev/return_levels.hpp"
#include "nsgev/spline.hpp"

namespace nsgev {

inline constexpr int kSchemaVersion = 1;

struct Config {
  BasisSpec basis;
  std::vector<double> lambda_grid = default_lambda_grid();
  std::size_t bootstrap_replicates = 200;
  double min_coverage = kDefaultMinCoverage;
  XiBounds xi_bounds;
};

// Missing keys keep their defaults; unknown schema versions are rejected.
Config config_from_json(const std::string& text);
Config load_config(const std::string& path);
std::string config_to_json(const Config& config);
// FNV-1a of the canonical (compact, sorted-key) serialization.
[[nodiscard]] std::uint64_t config_hash(const Config& config);

struct ModelFile {
  Model model;
  int first_year = 0;  // data window
  int last_year = 0;
  std::string block_kind;  // block size of the fitted maxima
  std::string scenario;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string tool_version;
};

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);
ModelFile load_model(const std::string& path);

}  // namespace nsgev
