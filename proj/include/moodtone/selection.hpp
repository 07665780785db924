#pragma once

#include <string>
#include <vector>

#include "moodtone/image.hpp"
#include "moodtone/scheme.hpp"
#include "moodtone/transfer.hpp"

namespace mood {

struct CandidateScore {
  int combination_index = 0;
  double d_lumin = 0.0;
  double d_color = 0.0;
  double E = 0.0;
};

struct ScoreReport {
  std::vector<CandidateScore> per_candidate;
  int selected_index = 0;  // 1-based combination index of the argmin
  double gamma = 0.7;
  std::string scheme_name;
};

/// Mean absolute L* difference over pixels.
double luminance_distance(const LabImage& input, const LabImage& output);

/// L1 distance between the achieved cluster centers and the combination's
/// colors, summed over the three colors and three Lab components.
double color_distance(const std::array<LabColor, 3>& achieved,
                      const ColorCombination& target);

/// Score E(j) = gamma * d_lumin + (1 - gamma) * d_color for every candidate
/// against its own combination and pick the argmin (ties to the lowest
/// combination index).
ScoreReport select_best(const LabImage& input,
                        const std::vector<TransferCandidate>& candidates,
                        const std::vector<ColorCombination>& targets,
                        double gamma, const std::string& scheme_name);

std::string to_json(const ScoreReport& report);
ScoreReport score_report_from_json(const std::string& text);

}  // namespace mood
