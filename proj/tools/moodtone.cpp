#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>

#include "moodtone/image_io.hpp"
#include "moodtone/pipeline.hpp"

namespace {

int list_emotions(const std::string& library_path) {
  const mood::SchemeLibrary lib = mood::load_library_file(library_path);
  std::vector<const mood::EmotionScheme*> sorted;
  for (const auto& s : lib.schemes) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });
  std::size_t width = 0;
  for (const auto* s : sorted) width = std::max(width, s->name.size());
  for (const auto* s : sorted) {
    std::cout << s->name << std::string(width - s->name.size() + 2, ' ')
              << s->description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Recolor an image toward an emotion using three-color combinations"};

  mood::RunConfig config;
  std::string emotion;
  std::string reference;
  std::string report;
  std::string mode = "combination";
  bool do_list = false;

  app.add_option("--input", config.input_path, "Input image (PNG or JPEG)");
  app.add_option("--output", config.output_path, "Output PNG path");
  app.add_option("--library", config.library_path,
                 "Scheme library JSON file");
  app.add_option("--emotion", emotion, "Target emotion keyword");
  app.add_option("--reference", reference,
                 "Reference image that picks the target scheme");
  app.add_option("--lambda", config.lambda,
                 "Gradient preservation weight (default 20)");
  app.add_option("--gamma", config.gamma,
                 "Selection blend between luminance and color terms "
                 "(default 0.7)");
  app.add_option("--seed", config.seed, "Clustering seed (default 0)");
  app.add_option("--mode", mode, "combination|single (default combination)")
      ->check(CLI::IsMember({"combination", "single"}));
  app.add_flag("--emit-all", config.emit_all,
               "Write all per-combination outputs, not just the selected one");
  app.add_option("--report", report, "Write the selection score report JSON");
  app.add_option("--workers", config.workers,
                 "Worker threads for the per-combination transfers "
                 "(default: logical processors)");
  app.add_flag("--list-emotions", do_list,
               "Print the library's schemes and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!emotion.empty()) config.emotion = emotion;
  if (!reference.empty()) config.reference_path = reference;
  if (!report.empty()) config.report_path = report;
  config.mode = mode == "single" ? mood::RunConfig::Mode::single
                                 : mood::RunConfig::Mode::combination;

  try {
    if (do_list) {
      if (config.library_path.empty()) {
        std::cerr << "error: library: path is required\n";
        return 2;
      }
      return list_emotions(config.library_path);
    }

    const mood::RunResult result = mood::run_pipeline(config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "scheme: " << result.scheme_name << "\n";
    if (result.report)
      std::cout << "selected combination: " << result.report->selected_index
                << "\n";
    for (const auto& path : result.written)
      std::cout << "wrote: " << path << "\n";
    return 0;
  } catch (const mood::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mood::UnknownEmotionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const mood::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mood::SchemeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
