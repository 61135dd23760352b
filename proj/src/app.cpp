#include "epifit/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "epifit/csv.hpp"
#include "epifit/growth_models.hpp"

namespace epifit {

namespace fs = std::filesystem;
using std::chrono::sys_days;
using Json = nlohmann::ordered_json;

namespace {

std::string sig6(double v) { return format_significant(v, 6); }

// NaN and infinities become null in JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
  return path;
}

std::string stem(const RegionSeries& s, ModelKind model) {
  return region_key(s.region) + "_" + std::string(model_spec(model).key);
}

Json fit_json(const FitResult& fit, const RegionSeries& data) {
  Json j;
  j["region"] = data.region;
  j["model"] = std::string(model_spec(fit.model).abbreviation);
  j["first_date"] = format_iso_date(data.dates.front());
  j["last_date"] = format_iso_date(data.dates.back());
  j["n"] = fit.n;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["starts_tried"] = fit.starts_tried;
  j["rss"] = number(fit.rss);
  j["objective"] = number(fit.objective);
  j["condition_number"] = number(fit.condition_number);
  j["interval_method"] = fit.interval_method;
  if (!fit.note.empty()) j["note"] = fit.note;
  if (fit.swab_stats) {
    j["swab_mean"] = fit.swab_stats->mu_B;
    j["swab_sd"] = fit.swab_stats->sigma_B;
  }
  Json params = Json::array();
  for (std::size_t i = 0; i < fit.k(); ++i) {
    Json p;
    p["name"] = fit.parameter_names[i];
    p["estimate"] = number(fit.estimates[i]);
    p["standard_error"] = number(fit.standard_errors[i]);
    p["ci_lower"] = number(fit.confidence_intervals[i].lower);
    p["ci_upper"] = number(fit.confidence_intervals[i].upper);
    p["ci_lower_open"] = fit.confidence_intervals[i].lower_open;
    p["ci_upper_open"] = fit.confidence_intervals[i].upper_open;
    params.push_back(p);
  }
  j["parameters"] = params;
  if (fit.model == ModelKind::sird) {
    const auto& ne = fit.natural_estimates;
    j["natural"] = {{"beta", ne[0]}, {"gamma", ne[1]}, {"delta", ne[2]}, {"N", ne[3]}, {"I0", ne[4]}};
  }
  Json curve = Json::array();
  for (std::size_t i = 0; i < fit.n; ++i) {
    curve.push_back({{"date", format_iso_date(data.dates[i])},
                     {"observed", data.cumulative_cases[i]},
                     {"fitted", fit.fitted_cumulative[i]},
                     {"fitted_daily", fit.fitted_daily[i]}});
  }
  j["fitted"] = curve;
  return j;
}

std::string params_csv(const FitResult& fit, const RegionSeries& data) {
  std::ostringstream out;
  out << "# region: " << data.region << '\n';
  out << "# model: " << model_spec(fit.model).abbreviation << '\n';
  out << "# window: " << format_iso_date(data.dates.front()) << " to "
      << format_iso_date(data.dates.back()) << " (n=" << fit.n << ")\n";
  out << "# rss: " << sig6(fit.rss) << '\n';
  out << "# converged: " << (fit.converged ? "yes" : "no") << '\n';
  out << "# intervals: 95% " << fit.interval_method << '\n';
  if (fit.swab_stats) {
    out << "# swabs: mean " << sig6(fit.swab_stats->mu_B) << ", sd " << sig6(fit.swab_stats->sigma_B)
        << '\n';
  }
  if (!fit.note.empty()) out << "# note: " << fit.note << '\n';
  write_csv_row(out, {"Parameter", "Estimate", "Standard Error", "CI lo", "CI hi"});
  for (std::size_t i = 0; i < fit.k(); ++i) {
    const auto& ci = fit.confidence_intervals[i];
    write_csv_row(out, {fit.parameter_names[i], sig6(fit.estimates[i]), sig6(fit.standard_errors[i]),
                        ci.lower_open ? "open" : sig6(ci.lower),
                        ci.upper_open ? "open" : sig6(ci.upper)});
  }
  return out.str();
}

std::string fitted_csv(const FitResult& fit, const RegionSeries& data) {
  std::ostringstream out;
  const auto observed_daily = daily_increments(data.cumulative_cases);
  write_csv_row(out, {"date", "t", "observed_cumulative", "fitted_cumulative", "observed_daily",
                      "fitted_daily"});
  for (std::size_t i = 0; i < fit.n; ++i) {
    write_csv_row(out, {format_iso_date(data.dates[i]), std::to_string(i + 1),
                        sig6(data.cumulative_cases[i]), sig6(fit.fitted_cumulative[i]),
                        sig6(observed_daily[i]), sig6(fit.fitted_daily[i])});
  }
  return out.str();
}

bool job_ok(const FitJob& job, RunSummary& summary, const std::vector<RegionSeries>& series) {
  const std::string label = series[job.region_index].region + " " +
                            std::string(model_spec(job.model).abbreviation);
  if (!job.fit) {
    summary.messages.push_back(label + ": fit failed: " + job.error);
    summary.exit_code = 1;
    return false;
  }
  if (!job.fit->converged) {
    summary.messages.push_back(label + ": did not converge (best effort reported)");
    if (summary.exit_code == 0) summary.exit_code = 2;
  }
  if (!job.fit->note.empty()) summary.messages.push_back(label + ": " + job.fit->note);
  return true;
}

}  // namespace

const std::vector<std::string>& default_regions() {
  static const std::vector<std::string> regions = {"veneto", "lombardy", "piedmont", "tuscany",
                                                   "emilia-romagna"};
  return regions;
}

std::string region_key(std::string_view region) {
  const std::string norm = normalize_region_name(official_region_name(region));
  if (norm == "lombardia") return "lombardy";
  if (norm == "piemonte") return "piedmont";
  if (norm == "toscana") return "tuscany";
  if (norm == "emiliaromagna") return "emilia-romagna";
  std::string key;
  for (unsigned char c : region) {
    if (std::isalnum(c)) {
      key += static_cast<char>(std::tolower(c));
    } else if (!key.empty() && key.back() != '-') {
      key += '-';
    }
  }
  while (!key.empty() && key.back() == '-') key.pop_back();
  return key.empty() ? "region" : key;
}

sys_days default_window_start(std::string_view region) {
  using namespace std::chrono;
  if (normalize_region_name(official_region_name(region)) == "toscana") {
    return sys_days{2020y / February / 25};
  }
  return sys_days{2020y / February / 24};
}

sys_days default_window_end() {
  using namespace std::chrono;
  return sys_days{2020y / May / 3};
}

RunConfig resolve(RunConfig config) {
  if (config.preloaded.empty()) {
    std::vector<std::string> regions;
    for (const auto& r : config.regions) {
      if (normalize_region_name(r) == "all") {
        regions.insert(regions.end(), default_regions().begin(), default_regions().end());
      } else {
        regions.push_back(r);
      }
    }
    if (regions.empty()) throw std::invalid_argument("no region requested");
    config.regions = std::move(regions);
    if (config.data_path.empty()) throw std::invalid_argument("no data file given (--data)");
  }
  if (config.models.empty()) throw std::invalid_argument("no model requested");
  if (config.start && config.end && *config.start > *config.end) {
    throw std::invalid_argument("window start is after its end");
  }
  return config;
}

std::vector<RegionSeries> load_series(const RunConfig& config) {
  if (!config.preloaded.empty()) return config.preloaded;
  const RegionalTable table = parse_regional_csv(config.data_path);
  const PatchSet patches = config.patch_path.empty() ? PatchSet{} : read_patches(config.patch_path);
  std::vector<RegionSeries> out;
  for (const auto& r : config.regions) {
    const sys_days start = config.start.value_or(default_window_start(r));
    const sys_days end = config.end.value_or(default_window_end());
    out.push_back(load_region(table, r, start, end, patches));
  }
  return out;
}

std::vector<FitJob> run_fits(const RunConfig& config, const std::vector<RegionSeries>& series) {
  std::vector<FitJob> jobs;
  for (std::size_t r = 0; r < series.size(); ++r) {
    for (ModelKind m : config.models) jobs.push_back({r, m, std::nullopt, {}});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto& job = jobs[i];
      try {
        job.fit = fit_model(job.model, series[job.region_index], config.fit);
      } catch (const std::exception& e) {
        job.error = e.what();
      }
    }
  };
  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return jobs;
}

RunSummary cmd_fit(const RunConfig& raw) {
  const RunConfig config = resolve(raw);
  const auto series = load_series(config);
  const auto jobs = run_fits(config, series);
  fs::create_directories(config.output_dir);
  RunSummary summary;
  for (const auto& job : jobs) {
    if (!job_ok(job, summary, series)) continue;
    const auto& data = series[job.region_index];
    const std::string base = stem(data, job.model);
    if (config.format == OutputFormat::json) {
      summary.files.push_back(write_text(config.output_dir / ("params_" + base + ".json"),
                                         fit_json(*job.fit, data).dump(2) + "\n"));
    } else {
      summary.files.push_back(
          write_text(config.output_dir / ("params_" + base + ".csv"), params_csv(*job.fit, data)));
      summary.files.push_back(
          write_text(config.output_dir / ("fitted_" + base + ".csv"), fitted_csv(*job.fit, data)));
    }
  }
  return summary;
}

RunSummary cmd_compare(const RunConfig& raw) {
  RunConfig config = resolve(raw);
  config.fit.sird_profile_intervals = false;
  const auto series = load_series(config);
  const auto jobs = run_fits(config, series);
  fs::create_directories(config.output_dir);
  RunSummary summary;

  std::vector<std::string> header = {"Region", "Metric"};
  for (ModelKind m : config.models) header.emplace_back(model_spec(m).abbreviation);
  header.emplace_back("Best");

  std::ostringstream csv;
  csv << "# BIC: " << bic_convention_name(config.bic) << '\n';
  write_csv_row(csv, header);
  Json json = Json::array();

  const std::size_t models = config.models.size();
  for (std::size_t r = 0; r < series.size(); ++r) {
    std::vector<std::optional<MetricsReport>> reports(models);
    for (std::size_t m = 0; m < models; ++m) {
      const auto& job = jobs[r * models + m];
      if (!job_ok(job, summary, series)) continue;
      try {
        reports[m] = evaluate_fit(*job.fit, series[r], config.bic, config.drop_first_daily);
      } catch (const std::exception& e) {
        summary.messages.push_back(series[r].region + " " +
                                   std::string(model_spec(job.model).abbreviation) +
                                   ": metrics unavailable: " + e.what());
        summary.exit_code = 1;
      }
    }
    struct Row {
      const char* name;
      double MetricsReport::*field;
      bool higher_is_better;
    };
    for (const Row row : {Row{"R2", &MetricsReport::r_squared, true},
                          Row{"BIC", &MetricsReport::bic, false},
                          Row{"rho2", &MetricsReport::rho_squared, true}}) {
      std::vector<std::string> fields = {series[r].region, row.name};
      std::optional<std::size_t> best;
      Json jrow = {{"region", series[r].region}, {"metric", row.name}};
      for (std::size_t m = 0; m < models; ++m) {
        const std::string abbrev(model_spec(config.models[m]).abbreviation);
        if (!reports[m]) {
          fields.emplace_back("NA");
          jrow[abbrev] = nullptr;
          continue;
        }
        const double v = (*reports[m]).*row.field;
        fields.push_back(sig6(v));
        jrow[abbrev] = number(v);
        if (!best || (row.higher_is_better ? v > (*reports[*best]).*row.field
                                           : v < (*reports[*best]).*row.field)) {
          best = m;
        }
      }
      const std::string best_name = best ? std::string(model_spec(config.models[*best]).abbreviation) : "NA";
      fields.push_back(best_name);
      jrow["best"] = best_name;
      write_csv_row(csv, fields);
      json.push_back(jrow);
    }
  }
  summary.files.push_back(write_text(config.output_dir / "compare.csv", csv.str()));
  if (config.format == OutputFormat::json) {
    Json doc = {{"bic_convention", std::string(bic_convention_name(config.bic))}, {"rows", json}};
    summary.files.push_back(write_text(config.output_dir / "compare.json", doc.dump(2) + "\n"));
  }
  return summary;
}

RunSummary cmd_forecast(const RunConfig& raw) {
  const RunConfig config = resolve(raw);
  const auto series = load_series(config);
  const auto jobs = run_fits(config, series);
  fs::create_directories(config.output_dir);
  RunSummary summary;
  for (const auto& job : jobs) {
    if (!job_ok(job, summary, series)) continue;
    const auto& data = series[job.region_index];
    const auto& fit = *job.fit;
    ForecastResult fc;
    try {
      fc = forecast(fit, data, config.horizon);
    } catch (const std::exception& e) {
      summary.messages.push_back(data.region + " " + std::string(model_spec(job.model).abbreviation) +
                                 ": forecast failed: " + e.what());
      summary.exit_code = 1;
      continue;
    }
    const std::string base = stem(data, job.model);
    const auto date_at = [&](double t) {
      return format_iso_date(data.dates.front() + std::chrono::days{static_cast<int>(t) - 1});
    };

    std::ostringstream csv;
    csv << "# region: " << data.region << '\n';
    csv << "# model: " << model_spec(fit.model).abbreviation << '\n';
    csv << "# horizon: " << fc.horizon_days << '\n';
    csv << "# saturation_fraction: " << sig6(fc.saturation_fraction) << '\n';
    write_csv_row(csv, {"date", "t", "predicted_cumulative", "predicted_daily", "assumed_swabs"});
    for (std::size_t h = 0; h < fc.horizon_days; ++h) {
      write_csv_row(csv, {date_at(fc.days[h]), sig6(fc.days[h]), sig6(fc.predicted_cumulative[h]),
                          sig6(fc.predicted_daily[h]),
                          h < fc.assumed_swabs.size() ? sig6(fc.assumed_swabs[h]) : ""});
    }
    summary.files.push_back(write_text(config.output_dir / ("forecast_" + base + ".csv"), csv.str()));

    if (config.format == OutputFormat::json) {
      Json j = {{"region", data.region},
                {"model", std::string(model_spec(fit.model).abbreviation)},
                {"horizon_days", fc.horizon_days},
                {"saturation_fraction", number(fc.saturation_fraction)},
                {"final_size", number(final_size(fit))},
                {"last_observed", data.cumulative_cases.back()},
                {"converged", fit.converged}};
      Json days = Json::array();
      for (std::size_t h = 0; h < fc.horizon_days; ++h) {
        Json d = {{"date", date_at(fc.days[h])},
                  {"t", fc.days[h]},
                  {"predicted_cumulative", fc.predicted_cumulative[h]},
                  {"predicted_daily", fc.predicted_daily[h]}};
        if (h < fc.assumed_swabs.size()) d["assumed_swabs"] = fc.assumed_swabs[h];
        days.push_back(d);
      }
      j["forecast"] = days;
      summary.files.push_back(
          write_text(config.output_dir / ("forecast_" + base + ".json"), j.dump(2) + "\n"));
    }

    // Plot data: observed and fitted in sample, forecast after the last day.
    const auto observed_daily = daily_increments(data.cumulative_cases);
    std::ostringstream plot;
    write_csv_row(plot, {"date", "t", "segment", "observed_cumulative", "observed_daily",
                         "model_cumulative", "model_daily"});
    for (std::size_t i = 0; i < data.size(); ++i) {
      write_csv_row(plot, {format_iso_date(data.dates[i]), std::to_string(i + 1), "fit",
                           sig6(data.cumulative_cases[i]), sig6(observed_daily[i]),
                           sig6(fit.fitted_cumulative[i]), sig6(fit.fitted_daily[i])});
    }
    std::vector<double> ahead;
    for (std::size_t h = 1; h < fc.horizon_days; ++h) {
      ahead.push_back(fc.predicted_daily[h]);
      write_csv_row(plot, {date_at(fc.days[h]), sig6(fc.days[h]), "forecast", "", "",
                           sig6(fc.predicted_cumulative[h]), sig6(fc.predicted_daily[h])});
    }
    summary.files.push_back(write_text(config.output_dir / ("plot_" + base + ".csv"), plot.str()));
    summary.files.push_back(write_text(
        config.output_dir / ("plot_" + base + ".svg"),
        render_svg(data.region + " " + std::string(model_spec(fit.model).abbreviation),
                   observed_daily, fit.fitted_daily, ahead)));
  }
  return summary;
}

RunSummary cmd_clean(const RunConfig& raw) {
  RunConfig config = raw;
  if (config.models.empty()) config.models = {ModelKind::logistic};
  config = resolve(config);
  const auto series = load_series(config);
  fs::create_directories(config.output_dir);
  RunSummary summary;
  for (const auto& s : series) {
    std::ostringstream out;
    write_cleaned_csv(out, s);
    summary.files.push_back(
        write_text(config.output_dir / ("cleaned_" + region_key(s.region) + ".csv"), out.str()));
    for (const auto& line : s.provenance) summary.messages.push_back(s.region + ": " + line);
  }
  return summary;
}

std::string render_svg(const std::string& title, const std::vector<double>& observed_daily,
                       const std::vector<double>& fitted_daily,
                       const std::vector<double>& forecast_daily) {
  constexpr double W = 640, H = 360, left = 60, right = 20, top = 30, bottom = 40;
  const std::size_t days = std::max(observed_daily.size(), fitted_daily.size()) + forecast_daily.size();
  double ymax = 1.0;
  for (const auto* v : {&observed_daily, &fitted_daily, &forecast_daily}) {
    for (double y : *v) {
      if (std::isfinite(y)) ymax = std::max(ymax, y);
    }
  }
  const auto x_of = [&](std::size_t i) {
    return left + (W - left - right) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(days - 1, 1));
  };
  const auto y_of = [&](double y) { return top + (H - top - bottom) * (1.0 - std::max(y, 0.0) / ymax); };
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '&') out += "&amp;";
      else if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else out += c;
    }
    return out;
  };
  const auto polyline = [&](const std::vector<double>& v, std::size_t offset, const char* style) {
    std::string pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!pts.empty()) pts += ' ';
      pts += fmt(x_of(i + offset)) + "," + fmt(y_of(v[i]));
    }
    return "<polyline fill=\"none\" " + std::string(style) + " points=\"" + pts + "\"/>\n";
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" +
                    fmt(H) + "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + " (daily cases)</text>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(H - bottom) + "\" x2=\"" + fmt(W - right) +
         "\" y2=\"" + fmt(H - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(H - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"5\" y=\"" + fmt(top + 5) + "\" font-family=\"sans-serif\" font-size=\"10\">" +
         fmt(ymax) + "</text>\n";
  for (std::size_t i = 0; i < observed_daily.size(); ++i) {
    svg += "<circle cx=\"" + fmt(x_of(i)) + "\" cy=\"" + fmt(y_of(observed_daily[i])) +
           "\" r=\"2\" fill=\"gray\"/>\n";
  }
  svg += polyline(fitted_daily, 0, "stroke=\"steelblue\" stroke-width=\"2\"");
  if (!forecast_daily.empty()) {
    svg += polyline(forecast_daily, fitted_daily.size(),
                    "stroke=\"firebrick\" stroke-width=\"2\" stroke-dasharray=\"4 3\"");
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace epifit
