#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "softran/config.hpp"
#include "softran/engine.hpp"
#include "softran/phy_metrics.hpp"
#include "softran/result_table.hpp"

namespace softran {

enum class Preset { Overhead, Rate, Toc };

const char* to_string(Preset preset);
Preset preset_from_string(const std::string& name);

// Shrinks a config to the desk-scale network: 2 RRSs, 8 subcarriers.
ScenarioConfig desk_scale(ScenarioConfig config);

std::vector<std::size_t> desk_user_counts();   // 2, 4, ..., 24
std::vector<std::size_t> full_user_counts();  // 8, 16, ..., 64
std::vector<std::uint64_t> seed_list(std::uint64_t first, std::size_t count);

struct FigureOptions {
  std::size_t seeds = 5;
  std::size_t workers = 0;
  bool full_scale = false;
  std::filesystem::path out_dir = "results";
  // Overrides applied after the preset's schemes and learners when non-empty.
  std::vector<Scheme> schemes;
  std::vector<LearnerKind> learners;
};

struct FigurePlan {
  Preset preset = Preset::Overhead;
  ScenarioConfig config;
  SweepSpec spec;
};

// Desk scale unless options.full_scale is set, in which case the network
// keeps the base config's size.
FigurePlan plan_figure(Preset preset, const ScenarioConfig& base, const FigureOptions& options);

struct FigureOutput {
  std::vector<SweepCell> cells;
  std::vector<ResultRow> rows;
  std::filesystem::path table_path;
  std::filesystem::path plot_path;
  std::size_t failed_cells = 0;
};

// Runs the sweep and writes <out>/<preset>.csv and <out>/<preset>_plot.csv.
FigureOutput run_figure(const FigurePlan& plan, const FigureOptions& options,
                        const std::function<void(const SweepCell&)>& progress = {});

// Fast invariant suite behind `softran validate`.
struct ValidationHooks {
  std::function<double(double rate, double overhead, double complexity, const TocWeights&)>
      toc_centralized = softran::toc_centralized;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_validation(const ValidationHooks& hooks = {});
// One line per check: "PASS name (12.3 ms)" followed by any failure detail.
void print_validation(const std::vector<CheckResult>& checks, std::ostream& out);

}  // namespace softran
