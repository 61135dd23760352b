// epifit: fit epidemic growth models to regional case counts.

#include <CLI11.hpp>
#include <iostream>

#include "epifit/app.hpp"

namespace {

std::vector<epifit::ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<epifit::ModelKind> models;
  for (const auto& name : names) {
    if (epifit::normalize_region_name(name) == "all") {
      models.insert(models.end(), epifit::kAllModels.begin(), epifit::kAllModels.end());
    } else {
      models.push_back(epifit::parse_model(name));
    }
  }
  return models;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit growth-curve and SIRD models to regional COVID-19 counts"};
  app.require_subcommand(1);

  epifit::RunConfig config;
  std::vector<std::string> regions = {"all"};
  std::vector<std::string> models = {"all"};
  std::string start, end, format = "csv", bic = "variance", output = ".";
  bool per_series = false;

  auto add_common = [&](CLI::App* cmd, bool needs_models) {
    cmd->add_option("--data", config.data_path, "Regional daily CSV (civil-protection format)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--patches", config.patch_path, "Patch CSV (region,date,field,value,note)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--region", regions, "Region key or name, or 'all'")->delimiter(',');
    if (needs_models) {
      cmd->add_option("--model", models, "log, gbm, begbm, dmp, dmpseas, dmpsw, sird or 'all'")
          ->delimiter(',');
    }
    cmd->add_option("--start", start, "First day (YYYY-MM-DD)");
    cmd->add_option("--end", end, "Last day (YYYY-MM-DD)");
    cmd->add_option("--out", output, "Output directory");
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", config.fit.seed, "Multistart seed");
    cmd->add_option("--multistarts", config.fit.multistart_count, "Latin-hypercube restarts");
    cmd->add_flag("--per-series-sigma", per_series, "SIRD: separate error variance per series");
    cmd->add_option("--bic-convention", bic, "variance, k-only or gaussian");
    cmd->add_option("--threads", config.workers, "Worker threads (0: all cores)");
  };

  auto* fit = app.add_subcommand("fit", "Parameter tables with standard errors and 95% intervals");
  add_common(fit, true);
  auto* compare = app.add_subcommand("compare", "R2, BIC and rho2 for every region and model");
  add_common(compare, true);
  auto* fc = app.add_subcommand("forecast", "Forecasts, saturation fraction and plot data");
  add_common(fc, true);
  fc->add_option("--horizon", config.horizon, "Days ahead")->check(CLI::NonNegativeNumber);
  auto* clean = app.add_subcommand("clean", "Write the cleaned per-region series");
  add_common(clean, false);

  CLI11_PARSE(app, argc, argv);

  try {
    config.regions = regions;
    config.models = parse_models(models);
    config.output_dir = output;
    config.format = format == "json" ? epifit::OutputFormat::json : epifit::OutputFormat::csv;
    config.bic = epifit::parse_bic_convention(bic);
    if (per_series) config.fit.sird_variance = epifit::VarianceModel::per_series;
    if (!start.empty()) config.start = epifit::parse_iso_date(start);
    if (!end.empty()) config.end = epifit::parse_iso_date(end);

    epifit::RunSummary summary;
    if (fit->parsed()) summary = epifit::cmd_fit(config);
    if (compare->parsed()) summary = epifit::cmd_compare(config);
    if (fc->parsed()) summary = epifit::cmd_forecast(config);
    if (clean->parsed()) summary = epifit::cmd_clean(config);

    for (const auto& m : summary.messages) std::cerr << m << '\n';
    for (const auto& f : summary.files) std::cout << f.string() << '\n';
    return summary.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
