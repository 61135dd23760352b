#include "epifit/data_ingest.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "epifit/csv.hpp"

namespace epifit {

using std::chrono::sys_days;

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<SeriesField, 6> kFields = {
    SeriesField::cumulative_cases, SeriesField::infected,         SeriesField::recovered,
    SeriesField::deaths,           SeriesField::cumulative_swabs, SeriesField::daily_swabs,
};

int parse_int(std::string_view s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("malformed date '" + std::string(s) + "'");
  }
  return v;
}

std::string where(const std::string& source, std::size_t row, std::size_t line) {
  return source + ": row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

}  // namespace

sys_days parse_iso_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw DataError("malformed date '" + std::string(text) + "'");
  }
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') {
    throw DataError("malformed date '" + std::string(text) + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{parse_int(text.substr(0, 4))},
                                        std::chrono::month{static_cast<unsigned>(parse_int(text.substr(5, 2)))},
                                        std::chrono::day{static_cast<unsigned>(parse_int(text.substr(8, 2)))}};
  if (!ymd.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
  return sys_days{ymd};
}

std::string format_iso_date(sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string normalize_region_name(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

std::string official_region_name(std::string_view name) {
  static const std::map<std::string, std::string> aliases = {
      {"veneto", "Veneto"},   {"lombardy", "Lombardia"},          {"lombardia", "Lombardia"},
      {"piedmont", "Piemonte"}, {"piemonte", "Piemonte"},        {"tuscany", "Toscana"},
      {"toscana", "Toscana"}, {"emiliaromagna", "Emilia-Romagna"},
  };
  const auto it = aliases.find(normalize_region_name(name));
  return it != aliases.end() ? it->second : std::string(name);
}

RegionalTable parse_regional_csv(std::istream& in, const std::string& source) {
  CsvTable csv;
  try {
    csv = parse_csv(in);
  } catch (const CsvError& e) {
    throw DataError(source + ": " + e.what());
  }
  static constexpr std::array<std::string_view, 7> required = {
      "data", "denominazione_regione", "totale_positivi", "dimessi_guariti",
      "deceduti", "totale_casi", "tamponi"};
  std::array<std::size_t, 7> col{};
  for (std::size_t j = 0; j < required.size(); ++j) {
    const auto c = csv.column(required[j]);
    if (!c) throw DataError(source + ": missing column '" + std::string(required[j]) + "'");
    col[j] = *c;
  }

  RegionalTable table;
  table.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string loc = where(source, r + 1, csv.line_numbers[r]);
    RegionalRecord rec;
    try {
      rec.date = parse_iso_date(row[col[0]]);
    } catch (const DataError& e) {
      throw DataError(loc + ", column 'data': " + e.what());
    }
    rec.region = row[col[1]];
    double* targets[] = {&rec.infected, &rec.recovered, &rec.deaths, &rec.cumulative_cases,
                         &rec.cumulative_swabs};
    for (std::size_t j = 2; j < required.size(); ++j) {
      const auto v = parse_number(row[col[j]]);
      if (!v) {
        throw DataError(loc + ", column '" + std::string(required[j]) + "': " +
                        (row[col[j]].empty() ? std::string("empty value")
                                             : "non-numeric value '" + row[col[j]] + "'"));
      }
      *targets[j - 2] = *v;
    }
    table.push_back(std::move(rec));
  }
  return table;
}

RegionalTable parse_regional_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return parse_regional_csv(in, path);
}

RegionSeries select_window(const RegionalTable& table, std::string_view region, sys_days start,
                           sys_days end) {
  const std::string wanted = normalize_region_name(official_region_name(region));
  std::vector<const RegionalRecord*> rows;
  bool region_seen = false;
  std::string display;
  for (const auto& rec : table) {
    if (normalize_region_name(rec.region) != wanted) continue;
    region_seen = true;
    display = rec.region;
    if (rec.date >= start && rec.date <= end) rows.push_back(&rec);
  }
  if (!region_seen) throw DataError("region '" + std::string(region) + "' not found");
  if (rows.empty()) {
    throw DataError("no rows for " + display + " between " + format_iso_date(start) + " and " +
                    format_iso_date(end));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return a->date < b->date; });

  RegionSeries series;
  series.region = display;
  sys_days expected = start;
  for (const auto* rec : rows) {
    if (rec->date < expected) {
      throw DataError(display + ": duplicate row for " + format_iso_date(rec->date));
    }
    if (rec->date > expected) {
      throw DataError(display + ": missing day " + format_iso_date(expected) + " inside the window");
    }
    series.dates.push_back(rec->date);
    series.cumulative_cases.push_back(rec->cumulative_cases);
    series.infected.push_back(rec->infected);
    series.recovered.push_back(rec->recovered);
    series.deaths.push_back(rec->deaths);
    series.cumulative_swabs.push_back(rec->cumulative_swabs);
    expected += std::chrono::days{1};
  }
  if (expected <= end) {
    throw DataError(display + ": missing day " + format_iso_date(expected) + " inside the window");
  }
  return series;
}

SeriesField parse_series_field(std::string_view name) {
  for (SeriesField f : kFields) {
    if (series_field_name(f) == name) return f;
  }
  static const std::map<std::string, SeriesField, std::less<>> aliases = {
      {"cases", SeriesField::cumulative_cases},     {"totale_casi", SeriesField::cumulative_cases},
      {"totale_positivi", SeriesField::infected},    {"dimessi_guariti", SeriesField::recovered},
      {"deceduti", SeriesField::deaths},             {"tamponi", SeriesField::cumulative_swabs},
      {"swabs", SeriesField::cumulative_swabs},
  };
  const auto it = aliases.find(name);
  if (it == aliases.end()) throw DataError("unknown series field '" + std::string(name) + "'");
  return it->second;
}

std::string_view series_field_name(SeriesField field) {
  switch (field) {
    case SeriesField::cumulative_cases: return "cumulative_cases";
    case SeriesField::infected: return "infected";
    case SeriesField::recovered: return "recovered";
    case SeriesField::deaths: return "deaths";
    case SeriesField::cumulative_swabs: return "cumulative_swabs";
    case SeriesField::daily_swabs: return "daily_swabs";
  }
  return "";
}

std::vector<double>& field_values(RegionSeries& series, SeriesField field) {
  switch (field) {
    case SeriesField::cumulative_cases: return series.cumulative_cases;
    case SeriesField::infected: return series.infected;
    case SeriesField::recovered: return series.recovered;
    case SeriesField::deaths: return series.deaths;
    case SeriesField::cumulative_swabs: return series.cumulative_swabs;
    case SeriesField::daily_swabs: return series.daily_swabs;
  }
  throw DataError("unknown series field");
}

const std::vector<double>& field_values(const RegionSeries& series, SeriesField field) {
  return field_values(const_cast<RegionSeries&>(series), field);
}

PatchSet read_patches(std::istream& in, const std::string& source) {
  CsvTable csv;
  try {
    csv = parse_csv(in);
  } catch (const CsvError& e) {
    throw PatchError(source + ": " + e.what());
  }
  static constexpr std::array<std::string_view, 5> required = {"region", "date", "field", "value",
                                                               "note"};
  std::array<std::size_t, 5> col{};
  for (std::size_t j = 0; j < required.size(); ++j) {
    const auto c = csv.column(required[j]);
    if (!c) throw PatchError(source + ": missing column '" + std::string(required[j]) + "'");
    col[j] = *c;
  }
  PatchSet set;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string loc = where(source, r + 1, csv.line_numbers[r]);
    Patch p;
    p.region = row[col[0]];
    try {
      p.date = parse_iso_date(row[col[1]]);
      p.field = parse_series_field(row[col[2]]);
    } catch (const DataError& e) {
      throw PatchError(loc + ": " + e.what());
    }
    if (row[col[3]] != "mean") {
      p.value = parse_number(row[col[3]]);
      if (!p.value) throw PatchError(loc + ", column 'value': not a number or 'mean'");
    }
    p.note = row[col[4]];
    set.patches.push_back(std::move(p));
  }
  return set;
}

PatchSet read_patches(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PatchError("cannot open " + path);
  return read_patches(in, path);
}

RegionSeries apply_patches(const RegionSeries& series, const PatchSet& patches) {
  if (series.empty()) throw PatchError("apply_patches: empty series");
  const std::string region = normalize_region_name(series.region);
  std::vector<const Patch*> mine;
  std::set<std::pair<sys_days, SeriesField>> cells;
  for (const auto& p : patches.patches) {
    if (normalize_region_name(official_region_name(p.region)) != region) continue;
    if (!cells.insert({p.date, p.field}).second) {
      throw PatchError("conflicting patches for " + series.region + " " + format_iso_date(p.date) +
                       " " + std::string(series_field_name(p.field)));
    }
    mine.push_back(&p);
  }
  if (mine.empty()) return series;

  const sys_days first = series.dates.front();
  const sys_days last = series.dates.back();
  sys_days earliest = first;
  for (const auto* p : mine) {
    if (p->date > last) {
      throw PatchError("patch date " + format_iso_date(p->date) + " is after the series end");
    }
    earliest = std::min(earliest, p->date);
  }
  const auto prepend = static_cast<std::size_t>((first - earliest).count());

  RegionSeries out;
  out.region = series.region;
  out.provenance = series.provenance;
  for (std::size_t i = 0; i < prepend; ++i) {
    out.dates.push_back(earliest + std::chrono::days{static_cast<int>(i)});
  }
  out.dates.insert(out.dates.end(), series.dates.begin(), series.dates.end());
  for (SeriesField f : kFields) {
    if (f == SeriesField::daily_swabs) continue;
    auto& dst = field_values(out, f);
    dst.assign(prepend, kMissing);
    const auto& src = field_values(series, f);
    dst.insert(dst.end(), src.begin(), src.end());
  }
  std::vector<double> prepended_daily(prepend, kMissing);

  auto cell = [&](SeriesField f, std::size_t i) -> double& {
    if (f == SeriesField::daily_swabs) {
      if (i >= prepend) {
        throw PatchError("daily_swabs can only be patched on days before the official series");
      }
      return prepended_daily[i];
    }
    return field_values(out, f)[i];
  };
  auto index_of = [&](sys_days d) { return static_cast<std::size_t>((d - earliest).count()); };
  auto record = [&](const Patch& p, double value) {
    out.provenance.push_back("patch " + format_iso_date(p.date) + " " +
                             std::string(series_field_name(p.field)) + "=" +
                             format_shortest(value) + (p.note.empty() ? "" : " (" + p.note + ")"));
  };

  for (const auto* p : mine) {
    if (!p->value) continue;
    cell(p->field, index_of(p->date)) = *p->value;
    record(*p, *p->value);
  }
  for (const auto* p : mine) {
    if (p->value) continue;
    const std::size_t i = index_of(p->date);
    const std::size_t len = p->field == SeriesField::daily_swabs ? prepend : out.size();
    if (i == 0 || i + 1 >= len) {
      throw PatchError("mean patch on " + format_iso_date(p->date) + " lacks two neighbours");
    }
    const double lo = cell(p->field, i - 1), hi = cell(p->field, i + 1);
    if (std::isnan(lo) || std::isnan(hi)) {
      throw PatchError("mean patch on " + format_iso_date(p->date) + " has a missing neighbour");
    }
    cell(p->field, i) = 0.5 * (lo + hi);
    record(*p, cell(p->field, i));
  }

  for (std::size_t i = 0; i < prepend; ++i) {
    const std::string day = format_iso_date(out.dates[i]);
    for (SeriesField f : {SeriesField::infected, SeriesField::recovered, SeriesField::deaths}) {
      if (std::isnan(cell(f, i))) {
        throw PatchError("prepended day " + day + " has no " + std::string(series_field_name(f)));
      }
    }
    double& cum_swabs = out.cumulative_swabs[i];
    if (!std::isnan(prepended_daily[i])) {
      if (!std::isnan(cum_swabs)) {
        throw PatchError("prepended day " + day + " has both daily and cumulative swabs");
      }
      cum_swabs = (i > 0 ? out.cumulative_swabs[i - 1] : 0.0) + prepended_daily[i];
    }
    if (std::isnan(cum_swabs)) throw PatchError("prepended day " + day + " has no swab count");
    if (std::isnan(out.cumulative_cases[i])) {
      out.cumulative_cases[i] = out.infected[i] + out.recovered[i] + out.deaths[i];
    }
  }
  out.daily_swabs.clear();
  return out;
}

MonotoneRepair enforce_monotone(const RegionSeries& series, SeriesField field) {
  if (field == SeriesField::infected || field == SeriesField::daily_swabs) {
    throw DataError(std::string(series_field_name(field)) + " is not a cumulative field");
  }
  MonotoneRepair result{series, {}};
  auto& v = field_values(result.series, field);
  const std::string name(series_field_name(field));
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] >= v[i - 1]) continue;
    if (i + 1 == v.size()) {
      throw DataError(name + " decreases on the last day " +
                      format_iso_date(result.series.dates[i]) + "; cannot average");
    }
    const double replacement = 0.5 * (v[i - 1] + v[i + 1]);
    result.series.provenance.push_back("repair " + format_iso_date(result.series.dates[i]) + " " +
                                       name + ": " + format_shortest(v[i]) + " -> " +
                                       format_shortest(replacement) +
                                       " (mean of neighbours)");
    v[i] = replacement;
    result.repaired.push_back(result.series.dates[i]);
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) {
      throw DataError(name + " still decreases on " + format_iso_date(result.series.dates[i]) +
                      " after one repair pass");
    }
  }
  return result;
}

std::vector<double> daily_swabs(const std::vector<double>& cumulative_swabs) {
  std::vector<double> daily;
  daily.reserve(cumulative_swabs.size());
  for (std::size_t i = 0; i < cumulative_swabs.size(); ++i) {
    const double d = i == 0 ? cumulative_swabs[0] : cumulative_swabs[i] - cumulative_swabs[i - 1];
    if (d < 0.0) {
      throw DataError("cumulative swabs decrease at index " + std::to_string(i));
    }
    daily.push_back(d);
  }
  return daily;
}

RegionSeries clean_series(const RegionSeries& series, const std::vector<sys_days>& patched_dates) {
  RegionSeries out = series;
  std::set<sys_days> touched(patched_dates.begin(), patched_dates.end());
  for (SeriesField f : {SeriesField::cumulative_cases, SeriesField::recovered, SeriesField::deaths,
                        SeriesField::cumulative_swabs}) {
    auto repair = enforce_monotone(out, f);
    if (f != SeriesField::cumulative_swabs) touched.insert(repair.repaired.begin(), repair.repaired.end());
    out = std::move(repair.series);
  }
  out.daily_swabs = daily_swabs(out.cumulative_swabs);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (touched.contains(out.dates[i])) continue;
    const double sum = out.infected[i] + out.recovered[i] + out.deaths[i];
    if (out.cumulative_cases[i] != sum) {
      throw DataError(out.region + " " + format_iso_date(out.dates[i]) + ": total cases " +
                      format_shortest(out.cumulative_cases[i]) +
                      " differ from infected + recovered + deaths = " + format_shortest(sum));
    }
  }
  return out;
}

RegionSeries load_region(const RegionalTable& table, std::string_view region, sys_days start,
                         sys_days end, const PatchSet& patches) {
  const RegionSeries raw = select_window(table, region, start, end);
  std::vector<sys_days> patched;
  const std::string key = normalize_region_name(raw.region);
  for (const auto& p : patches.patches) {
    if (normalize_region_name(official_region_name(p.region)) == key) patched.push_back(p.date);
  }
  return clean_series(apply_patches(raw, patches), patched);
}

void write_cleaned_csv(std::ostream& out, const RegionSeries& series) {
  out << "# region: " << series.region << '\n';
  for (const auto& line : series.provenance) out << "# provenance: " << line << '\n';
  out << "date,cumulative_cases,infected,recovered,deaths,cumulative_swabs,daily_swabs\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double daily = i < series.daily_swabs.size() ? series.daily_swabs[i] : kMissing;
    write_csv_row(out, {format_iso_date(series.dates[i]), format_shortest(series.cumulative_cases[i]),
                        format_shortest(series.infected[i]), format_shortest(series.recovered[i]),
                        format_shortest(series.deaths[i]), format_shortest(series.cumulative_swabs[i]),
                        std::isnan(daily) ? std::string() : format_shortest(daily)});
  }
}

RegionSeries read_cleaned_csv(std::istream& in) {
  const CsvTable csv = parse_csv(in);
  RegionSeries series;
  for (const auto& c : csv.comments) {
    if (c.starts_with(" region: ")) series.region = c.substr(9);
    if (c.starts_with(" provenance: ")) series.provenance.push_back(c.substr(13));
  }
  const std::array<std::string_view, 7> names = {"date", "cumulative_cases", "infected",
                                                 "recovered", "deaths", "cumulative_swabs",
                                                 "daily_swabs"};
  std::array<std::size_t, 7> col{};
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto c = csv.column(names[j]);
    if (!c) throw DataError("cleaned CSV: missing column '" + std::string(names[j]) + "'");
    col[j] = *c;
  }
  bool has_daily = true;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    series.dates.push_back(parse_iso_date(row[col[0]]));
    std::vector<double>* targets[] = {&series.cumulative_cases, &series.infected,
                                      &series.recovered,        &series.deaths,
                                      &series.cumulative_swabs, &series.daily_swabs};
    for (std::size_t j = 1; j < names.size(); ++j) {
      if (j == 6 && row[col[j]].empty()) {
        has_daily = false;
        continue;
      }
      const auto v = parse_number(row[col[j]]);
      if (!v) {
        throw DataError("cleaned CSV: row " + std::to_string(r + 1) + ", column '" +
                        std::string(names[j]) + "': not a number");
      }
      targets[j - 1]->push_back(*v);
    }
  }
  if (!has_daily) series.daily_swabs.clear();
  return series;
}

}  // namespace epifit
