#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace epifit {

/// One region's daily observations, one entry per calendar day.
///
/// All counts are stored as doubles since imputed values (averages of
/// neighbours) need not be integers.
struct RegionSeries {
  std::string region;
  std::vector<std::chrono::sys_days> dates;
  std::vector<double> cumulative_cases;  // totale_casi
  std::vector<double> infected;          // totale_positivi (currently positive)
  std::vector<double> recovered;         // dimessi_guariti, cumulative
  std::vector<double> deaths;            // deceduti, cumulative
  std::vector<double> cumulative_swabs;  // tamponi
  std::vector<double> daily_swabs;
  std::vector<std::string> provenance;   // one line per patch or repair

  std::size_t size() const { return dates.size(); }
  bool empty() const { return dates.empty(); }

  bool operator==(const RegionSeries&) const = default;
};

}  // namespace epifit
