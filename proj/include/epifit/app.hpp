#pragma once

// Batch front end shared by the command-line tool and the tests: resolves
// regions and models, runs the fits in a small thread pool and writes the
// parameter, comparison, forecast and plot files.

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epifit/data_ingest.hpp"
#include "epifit/estimation.hpp"
#include "epifit/metrics.hpp"
#include "epifit/models.hpp"

namespace epifit {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string data_path;   // regional feed CSV
  std::string patch_path;  // optional patch CSV
  std::vector<std::string> regions;  // short keys, official names, or "all"
  std::vector<ModelKind> models;
  std::optional<std::chrono::sys_days> start;  // default: per-region window start
  std::optional<std::chrono::sys_days> end;    // default: 2020-05-03
  std::size_t horizon = 21;
  std::filesystem::path output_dir = ".";
  OutputFormat format = OutputFormat::csv;
  FitConfig fit;
  BicConvention bic = BicConvention::variance_counted;
  bool drop_first_daily = false;
  std::size_t workers = 0;  // 0: one per hardware thread
  std::vector<RegionSeries> preloaded;  // used instead of data_path when non-empty
};

/// The five regions of the study in table order.
const std::vector<std::string>& default_regions();

/// Short file-name token for a region ("Emilia-Romagna" -> "emilia-romagna").
std::string region_key(std::string_view region);

/// Window start used when none is given: 2020-02-24, Tuscany 2020-02-25.
std::chrono::sys_days default_window_start(std::string_view region);
std::chrono::sys_days default_window_end();

/// Expands "all" and checks the config. Throws std::invalid_argument.
RunConfig resolve(RunConfig config);

std::vector<RegionSeries> load_series(const RunConfig& config);

struct FitJob {
  std::size_t region_index = 0;
  ModelKind model = ModelKind::logistic;
  std::optional<FitResult> fit;
  std::string error;  // non-empty when the fit threw
};

/// One job per (region, model) in (region, model) order.
std::vector<FitJob> run_fits(const RunConfig& config, const std::vector<RegionSeries>& series);

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> messages;
  int exit_code = 0;  // 0 all converged, 2 some fit flagged, 1 hard error
};

RunSummary cmd_fit(const RunConfig& config);
RunSummary cmd_compare(const RunConfig& config);
RunSummary cmd_forecast(const RunConfig& config);
RunSummary cmd_clean(const RunConfig& config);

/// Minimal static line chart: observed daily points, fitted and forecast curves.
std::string render_svg(const std::string& title, const std::vector<double>& observed_daily,
                       const std::vector<double>& fitted_daily,
                       const std::vector<double>& forecast_daily);

}  // namespace epifit
