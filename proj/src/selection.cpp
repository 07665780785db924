#include "moodtone/selection.hpp"

#include <json.hpp>

#include <stdexcept>

namespace mood {

double luminance_distance(const LabImage& input, const LabImage& output) {
  if (input.width != output.width || input.height != output.height)
    throw std::invalid_argument("luminance_distance: dimension mismatch");
  return (input.pixels.row(0) - output.pixels.row(0)).cwiseAbs().mean();
}

double color_distance(const std::array<LabColor, 3>& achieved,
                      const ColorCombination& target) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k)
    d += (achieved[k] - target.color(k)).cwiseAbs().sum();
  return d;
}

ScoreReport select_best(const LabImage& input,
                        const std::vector<TransferCandidate>& candidates,
                        const std::vector<ColorCombination>& targets,
                        double gamma, const std::string& scheme_name) {
  if (candidates.empty())
    throw std::invalid_argument("select_best: no candidates");
  if (candidates.size() != targets.size())
    throw std::invalid_argument("select_best: candidate/target count mismatch");
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("select_best: gamma must be in [0,1]");

  ScoreReport report;
  report.gamma = gamma;
  report.scheme_name = scheme_name;
  // Ties go to the lowest combination index, independent of list order.
  const auto better = [](const CandidateScore& a, const CandidateScore& b) {
    return a.E < b.E ||
           (a.E == b.E && a.combination_index < b.combination_index);
  };
  int best = 0;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    CandidateScore row;
    row.combination_index = candidates[j].combination_index;
    row.d_lumin = luminance_distance(input, candidates[j].output);
    row.d_color =
        color_distance(candidates[j].shifts.achieved_targets, targets[j]);
    row.E = gamma * row.d_lumin + (1.0 - gamma) * row.d_color;
    report.per_candidate.push_back(row);
    if (better(row, report.per_candidate[static_cast<std::size_t>(best)]))
      best = static_cast<int>(j);
  }
  report.selected_index = report.per_candidate[static_cast<std::size_t>(best)]
                              .combination_index;
  return report;
}

std::string to_json(const ScoreReport& report) {
  nlohmann::ordered_json doc;
  doc["per_candidate"] = nlohmann::ordered_json::array();
  for (const auto& row : report.per_candidate) {
    doc["per_candidate"].push_back({{"combination_index",
                                     row.combination_index},
                                    {"d_lumin", row.d_lumin},
                                    {"d_color", row.d_color},
                                    {"E", row.E}});
  }
  doc["selected_index"] = report.selected_index;
  doc["gamma"] = report.gamma;
  doc["scheme_name"] = report.scheme_name;
  return doc.dump(2) + "\n";
}

ScoreReport score_report_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  ScoreReport report;
  for (const auto& row : doc.at("per_candidate")) {
    report.per_candidate.push_back({row.at("combination_index").get<int>(),
                                    row.at("d_lumin").get<double>(),
                                    row.at("d_color").get<double>(),
                                    row.at("E").get<double>()});
  }
  report.selected_index = doc.at("selected_index").get<int>();
  report.gamma = doc.at("gamma").get<double>();
  report.scheme_name = doc.at("scheme_name").get<std::string>();
  return report;
}

}  // namespace mood
