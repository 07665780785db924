#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moodtone/colorspace.hpp"

namespace mood {

/// An ordered three-color combination: index 0 dominant, 1 subordinate,
/// 2 accent.
struct ColorCombination {
  LabColor dominant = LabColor::Zero();
  LabColor subordinate = LabColor::Zero();
  LabColor accent = LabColor::Zero();

  const LabColor& color(int k) const {
    return k == 0 ? dominant : (k == 1 ? subordinate : accent);
  }
  LabColor& color(int k) {
    return k == 0 ? dominant : (k == 1 ? subordinate : accent);
  }
};

struct EmotionScheme {
  std::string name;
  std::string description;
  std::vector<ColorCombination> combinations;
};

struct SchemeLibrary {
  std::string source;
  std::vector<EmotionScheme> schemes;

  /// Case-insensitive lookup; returns -1 when the name is unknown.
  int find(std::string_view name) const;
  std::size_t combination_count() const;
};

struct SchemeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse and validate a scheme-library document (UTF-8 JSON). Colors may be
/// authored as {"lab":[L,a,b]}, {"srgb":"#RRGGBB"} or {"cmyk":[c,m,y,k]} and
/// are normalized to Lab. Throws SchemeError on parse or validation failure.
SchemeLibrary load_library(const std::string& text);
SchemeLibrary load_library_file(const std::string& path);

/// The three main colors of an image with their cluster weights, ordered
/// dominant / subordinate / accent (weights non-increasing, summing to 1).
struct MainColors {
  std::array<LabColor, 3> colors{};
  Eigen::Vector3d weights = Eigen::Vector3d::Zero();
};

struct ClassifyResult {
  int scheme_index = -1;
  Eigen::VectorXd scores;  // one weighted squared-distance score per scheme
};

/// Pick the scheme whose combinations are closest to the reference main
/// colors: argmin_i sum_j sum_k w_k |C_R^k - C_ij^k|^2, ties to the lowest
/// scheme index.
ClassifyResult classify_reference(const MainColors& main,
                                  const SchemeLibrary& lib);

}  // namespace mood
