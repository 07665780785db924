#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moodtone/clustering.hpp"
#include "moodtone/scheme.hpp"
#include "moodtone/selection.hpp"
#include "moodtone/transfer.hpp"

namespace mood {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownEmotionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input_path;
  std::string output_path;
  std::string library_path;
  std::optional<std::string> emotion;
  std::optional<std::string> reference_path;
  double lambda = 20.0;
  double gamma = 0.7;
  std::uint64_t seed = 0;
  enum class Mode { combination, single } mode = Mode::combination;
  bool emit_all = false;
  std::optional<std::string> report_path;
  int workers = 0;  // 0 = number of logical processors
  EmOptions em;
  PoissonOptions poisson;
};

struct RunResult {
  std::string scheme_name;
  std::optional<ScoreReport> report;   // combination mode only
  std::vector<std::string> written;    // output files, selected image first
  bool degenerate_input = false;
  bool degenerate_reference = false;
  bool poisson_converged = true;
  std::vector<std::string> warnings;
};

/// Transfer the input to every combination of the scheme; candidates are
/// computed concurrently up to `workers` threads with results ordered by
/// combination index regardless of completion order.
std::vector<TransferCandidate> transfer_all_combinations(
    const LabImage& input, const ClusterModel& model,
    const EmotionScheme& scheme, double lambda, int workers,
    const PoissonOptions& opts = {});

/// Full pipeline: decode, cluster, resolve the target scheme (keyword or
/// reference image), transfer, select, and write outputs and the report.
/// Throws ConfigError / IoError / SchemeError / UnknownEmotionError.
RunResult run_pipeline(const RunConfig& config);

}  // namespace mood
