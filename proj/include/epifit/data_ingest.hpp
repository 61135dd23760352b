#pragma once

// Loading and cleaning of the civil-protection regional daily feed.

#include <chrono>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epifit/region_series.hpp"

namespace epifit {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PatchError : public DataError {
 public:
  using DataError::DataError;
};

/// One row of the regional feed.
struct RegionalRecord {
  std::chrono::sys_days date;
  std::string region;
  double infected;          // totale_positivi
  double recovered;         // dimessi_guariti
  double deaths;            // deceduti
  double cumulative_cases;  // totale_casi
  double cumulative_swabs;  // tamponi
};

using RegionalTable = std::vector<RegionalRecord>;

/// Parses "YYYY-MM-DD" or an ISO-8601 timestamp starting with it.
std::chrono::sys_days parse_iso_date(std::string_view text);
std::string format_iso_date(std::chrono::sys_days day);

/// Lower-case with everything but letters and digits removed.
std::string normalize_region_name(std::string_view name);

/// Official name for the short CLI keys (veneto, lombardy, piedmont,
/// tuscany, emilia-romagna). Other names pass through unchanged.
std::string official_region_name(std::string_view name);

RegionalTable parse_regional_csv(std::istream& in, const std::string& source = "<stream>");
RegionalTable parse_regional_csv(const std::string& path);

/// Contiguous daily series for one region. Throws DataError when the region
/// is absent, the window is empty or a day inside it is missing.
RegionSeries select_window(const RegionalTable& table, std::string_view region,
                           std::chrono::sys_days start, std::chrono::sys_days end);

enum class SeriesField {
  cumulative_cases,
  infected,
  recovered,
  deaths,
  cumulative_swabs,
  daily_swabs,
};

SeriesField parse_series_field(std::string_view name);
std::string_view series_field_name(SeriesField field);
std::vector<double>& field_values(RegionSeries& series, SeriesField field);
const std::vector<double>& field_values(const RegionSeries& series, SeriesField field);

struct Patch {
  std::string region;
  std::chrono::sys_days date;
  SeriesField field;
  std::optional<double> value;  // nullopt: mean of the neighbouring days
  std::string note;
};

struct PatchSet {
  std::vector<Patch> patches;
};

/// Patch file with columns region,date,field,value,note. A value of "mean"
/// takes the average of the two adjacent days.
PatchSet read_patches(std::istream& in, const std::string& source = "<stream>");
PatchSet read_patches(const std::string& path);

/// Overwrites cells and prepends days immediately before the series start.
/// Prepended days need infected, recovered, deaths and a swab value
/// (cumulative_swabs, or daily_swabs accumulated from zero); their
/// cumulative_cases defaults to infected + recovered + deaths.
/// Throws PatchError on a duplicate cell, a gap, or an incomplete day.
RegionSeries apply_patches(const RegionSeries& series, const PatchSet& patches);

struct MonotoneRepair {
  RegionSeries series;
  std::vector<std::chrono::sys_days> repaired;
};

/// Replaces each value below its predecessor with the mean of its two
/// neighbours. Throws DataError when the violation is at either end or
/// remains after the single pass.
MonotoneRepair enforce_monotone(const RegionSeries& series, SeriesField field);

/// First differences; the first day keeps its cumulative value. Throws
/// DataError on a decrease.
std::vector<double> daily_swabs(const std::vector<double>& cumulative_swabs);

/// Repairs non-monotone cumulative fields, derives the daily swabs and
/// checks cases = infected + recovered + deaths on untouched official rows.
RegionSeries clean_series(const RegionSeries& series,
                          const std::vector<std::chrono::sys_days>& patched_dates = {});

/// select_window, apply_patches and clean_series in order.
RegionSeries load_region(const RegionalTable& table, std::string_view region,
                         std::chrono::sys_days start, std::chrono::sys_days end,
                         const PatchSet& patches = {});

/// date,cumulative_cases,infected,recovered,deaths,cumulative_swabs,daily_swabs
/// with region and provenance in '#' comment lines.
void write_cleaned_csv(std::ostream& out, const RegionSeries& series);
RegionSeries read_cleaned_csv(std::istream& in);

}  // namespace epifit
