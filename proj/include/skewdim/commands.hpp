#pragma once

#include <filesystem>
#include <ostream>
#include <string_view>

#include "skewdim/config.hpp"
#include "skewdim/error.hpp"

namespace skewdim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDiscrepancy = 3;
inline constexpr int kExitResource = 4;

int exit_code_for(ErrorCode code);

/// Eigenvalues, moduli, stable count and regime on `out`; eigenvectors.csv and
/// slice_spectra.csv in dir.
int cmd_spectrum(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out);
/// Target from config.render: "slice <i>", "graph" (k <= 2) or "figure1".
int cmd_render(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out);
/// report.txt, slices.csv, boxcounts/*.csv, variation/*.csv; 3 on any discrepancy flag.
int cmd_dims(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out);
/// One PASS/FAIL line per invariant; 0 iff all pass.
int cmd_verify(const AnalysisConfig& config, const std::filesystem::path& dir, std::ostream& out);

/// Dispatches by name and maps library errors onto exit codes, writing the message to err.
int run_command(std::string_view name, const AnalysisConfig& config, const std::filesystem::path& dir,
                std::ostream& out, std::ostream& err);

}  // namespace skewdim
