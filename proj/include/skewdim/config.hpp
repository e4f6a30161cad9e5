#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewdim/fiber.hpp"
#include "skewdim/theory.hpp"

namespace skewdim {

/// An eigen mode as written in a config; frequency may be "inverse_modulus" (1/|B_d|).
struct EigenModeSpec {
  int direction = 0;  // 0-based
  double amplitude = 0.0;
  std::optional<double> frequency;
  double phase = 0.0;
};

struct RenderParams {
  std::string target = "slice 1";
  int resolution = 1024;
  double delta = 0.13;
  double domain = 1.0;
};

struct AnalysisConfig {
  int k = 0;
  std::vector<std::int64_t> matrix;  // row-major
  double lambda = 0.0;
  std::vector<LatticeMode> lattice_modes;
  std::vector<EigenModeSpec> eigen_modes;
  Vec base_point;
  EstimationParams estimation;
  std::string output_directory = "out";
  RenderParams render;
  bool tamper_eigenvector_sign = false;
  /// Every key = value pair in file order, for provenance echoes.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Flat `key = value` lines; '#' starts a comment; nesting through dotted keys.
/// Throws ConfigError on unknown keys, malformed values or missing required keys.
AnalysisConfig parse_config(std::string_view text);
AnalysisConfig load_config(const std::filesystem::path& path);

/// Real number with optional pi factor: "0.5", "-pi/4", "3*pi/4", "2pi".
double parse_real(std::string_view text);

/// Validates the matrix and assembles the skew product.
SkewProduct build_product(const AnalysisConfig& config);

}  // namespace skewdim
