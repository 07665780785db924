#include "moodtone/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "moodtone/image_io.hpp"

namespace mood {

namespace {

void validate(const RunConfig& c) {
  if (c.input_path.empty()) throw ConfigError("input: path is required");
  if (c.output_path.empty()) throw ConfigError("output: path is required");
  if (c.library_path.empty()) throw ConfigError("library: path is required");
  if (c.lambda < 0.0) throw ConfigError("lambda: must be >= 0");
  if (c.gamma < 0.0 || c.gamma > 1.0)
    throw ConfigError("gamma: must be in [0,1]");
  if (c.workers < 0) throw ConfigError("workers: must be >= 0");
  if (c.mode == RunConfig::Mode::single) {
    if (!c.emotion)
      throw ConfigError("emotion: single mode needs an emotion keyword");
    if (c.reference_path)
      throw ConfigError("reference: not usable in single mode");
    if (c.report_path)
      throw ConfigError("report: single mode has no selection report");
  } else {
    if (c.emotion.has_value() == c.reference_path.has_value())
      throw ConfigError(
          "emotion/reference: exactly one of the two must be given");
  }
}

ClusterModel cluster_with_fallback(const LabImage& img, const RunConfig& c,
                                   const char* label, RunResult& result,
                                   bool& degenerate) {
  try {
    return fit_em(img, c.seed, c.em);
  } catch (const DegenerateImageError& e) {
    degenerate = true;
    result.warnings.push_back(std::string(label) + " image is degenerate (" +
                              e.what() + "); using the fallback clustering");
    return degenerate_model(img);
  }
}

int resolve_scheme(const RunConfig& c, const SchemeLibrary& lib,
                   RunResult& result) {
  if (c.emotion) {
    const int idx = lib.find(*c.emotion);
    if (idx < 0) {
      std::ostringstream msg;
      msg << "unknown emotion \"" << *c.emotion << "\"; available:";
      std::vector<std::string> names;
      for (const auto& s : lib.schemes) names.push_back(s.name);
      std::sort(names.begin(), names.end());
      for (const auto& n : names) msg << " " << n;
      throw UnknownEmotionError(msg.str());
    }
    return idx;
  }
  const ImageU8 ref_raw = load_image(*c.reference_path);
  const LabImage ref = to_lab(ref_raw);
  const ClusterModel ref_model =
      cluster_with_fallback(ref, c, "reference", result,
                            result.degenerate_reference);
  const ClassifyResult cls =
      classify_reference(extract_main_colors(ref_model), lib);
  return cls.scheme_index;
}

std::string candidate_path(const std::string& output_path,
                           const std::string& scheme_name, int index) {
  const std::filesystem::path out(output_path);
  std::ostringstream name;
  name << out.stem().string() << "_" << scheme_name << "_" << std::setw(2)
       << std::setfill('0') << index << ".png";
  return (out.parent_path() / name.str()).string();
}

}  // namespace

std::vector<TransferCandidate> transfer_all_combinations(
    const LabImage& input, const ClusterModel& model,
    const EmotionScheme& scheme, double lambda, int workers,
    const PoissonOptions& opts) {
  const std::size_t n = scheme.combinations.size();
  std::vector<TransferCandidate> candidates(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto work = [&] {
    try {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= n) break;
        TransferCandidate& cand = candidates[j];
        cand.combination_index = static_cast<int>(j) + 1;
        cand.shifts = solve_shifts(model, scheme.combinations[j]);
        cand.intermediate = apply_shifts(input, model, cand.shifts);
        cand.output = preserve_gradient(input, cand.intermediate, lambda, opts,
                                        &cand.poisson);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  unsigned thread_count = workers > 0
                              ? static_cast<unsigned>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(n));
  if (thread_count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return candidates;
}

RunResult run_pipeline(const RunConfig& config) {
  validate(config);
  RunResult result;

  const SchemeLibrary lib = load_library_file(config.library_path);
  const ImageU8 raw = load_image(config.input_path);
  const LabImage input = to_lab(raw);

  const int scheme_idx = resolve_scheme(config, lib, result);
  const EmotionScheme& scheme = lib.schemes[static_cast<std::size_t>(
      scheme_idx)];
  result.scheme_name = scheme.name;

  if (config.mode == RunConfig::Mode::single) {
    const LabImage main_out =
        transfer_single_color(input, scheme.combinations.front());
    save_png(config.output_path, to_srgb8(main_out, &raw));
    result.written.push_back(config.output_path);
    if (config.emit_all) {
      for (std::size_t j = 0; j < scheme.combinations.size(); ++j) {
        const LabImage out =
            transfer_single_color(input, scheme.combinations[j]);
        const std::string path = candidate_path(
            config.output_path, scheme.name, static_cast<int>(j) + 1);
        save_png(path, to_srgb8(out, &raw));
        result.written.push_back(path);
      }
    }
    return result;
  }

  const ClusterModel model = cluster_with_fallback(
      input, config, "input", result, result.degenerate_input);

  const std::vector<TransferCandidate> candidates = transfer_all_combinations(
      input, model, scheme, config.lambda, config.workers, config.poisson);

  for (const auto& cand : candidates) {
    if (!cand.poisson.converged) {
      result.poisson_converged = false;
      std::ostringstream msg;
      msg << "combination " << cand.combination_index
          << ": gradient solve stopped at relative residual "
          << cand.poisson.max_residual;
      result.warnings.push_back(msg.str());
    }
    if (cand.shifts.any_empty_axis())
      result.warnings.push_back(
          "combination " + std::to_string(cand.combination_index) +
          ": cluster range exceeds a Lab axis; shift pinned to 0 there");
  }

  result.report = select_best(input, candidates, scheme.combinations,
                              config.gamma, scheme.name);

  const auto& selected =
      candidates[static_cast<std::size_t>(result.report->selected_index - 1)];
  save_png(config.output_path, to_srgb8(selected.output, &raw));
  result.written.push_back(config.output_path);

  if (config.emit_all) {
    for (const auto& cand : candidates) {
      const std::string path = candidate_path(config.output_path, scheme.name,
                                              cand.combination_index);
      save_png(path, to_srgb8(cand.output, &raw));
      result.written.push_back(path);
    }
  }

  if (config.report_path) {
    std::ofstream out(*config.report_path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + *config.report_path);
    out << to_json(*result.report);
    result.written.push_back(*config.report_path);
  }
  return result;
}

}  // namespace mood
