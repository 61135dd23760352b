#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "epifit/csv.hpp"
#include "epifit/data_ingest.hpp"
#include "test_support.hpp"

using namespace epifit;
using namespace std::chrono;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<testing::FeedRow> veneto_rows(int first_day, int count) {
  std::vector<testing::FeedRow> rows;
  for (int i = 0; i < count; ++i) {
    const sys_days d = sys_days{2020y / February / first_day} + days{i};
    const double k = i + 1;
    rows.push_back({format_iso_date(d), "Veneto", 30.0 * k, 2.0 * k, 1.0 * k, 3000.0 + 900.0 * k});
    rows.push_back({format_iso_date(d), "Lombardia", 100.0 * k, 10.0 * k, 5.0 * k, 5000.0 + 1000.0 * k});
  }
  return rows;
}

RegionalTable feed(const std::vector<testing::FeedRow>& rows) {
  std::ostringstream out;
  testing::write_feed(out, rows);
  std::istringstream in(out.str());
  return parse_regional_csv(in, "feed.csv");
}

RegionSeries series_from(std::vector<double> cum_swabs) {
  RegionSeries s;
  s.region = "Lombardia";
  const auto n = cum_swabs.size();
  s.dates = testing::consecutive_days(n);
  s.cumulative_swabs = std::move(cum_swabs);
  for (std::size_t i = 0; i < n; ++i) {
    s.infected.push_back(10.0 + static_cast<double>(i));
    s.recovered.push_back(0.0);
    s.deaths.push_back(0.0);
    s.cumulative_cases.push_back(10.0 + static_cast<double>(i));
  }
  return s;
}

}  // namespace

TEST_CASE("dates", "[ingest]") {
  CHECK(parse_iso_date("2020-02-24") == sys_days{2020y / February / 24});
  CHECK(parse_iso_date("2020-02-24T18:00:00") == sys_days{2020y / February / 24});
  CHECK(format_iso_date(sys_days{2020y / May / 3}) == "2020-05-03");
  CHECK_THROWS_AS(parse_iso_date("24/02/2020"), DataError);
  CHECK_THROWS_AS(parse_iso_date("2020-02-30"), DataError);
  CHECK_THROWS_AS(parse_iso_date("2020-02-2x"), DataError);
}

TEST_CASE("parsing the regional feed", "[ingest]") {
  const auto table = feed(veneto_rows(24, 3));
  REQUIRE(table.size() == 6);
  CHECK(table[0].region == "Veneto");
  CHECK(table[0].date == sys_days{2020y / February / 24});
  CHECK(table[0].infected == 30.0);
  CHECK(table[0].recovered == 2.0);
  CHECK(table[0].deaths == 1.0);
  CHECK(table[0].cumulative_cases == 33.0);
  CHECK(table[0].cumulative_swabs == 3900.0);
}

TEST_CASE("feed validation names the row and column", "[ingest]") {
  std::ostringstream out;
  testing::write_feed(out, veneto_rows(24, 2));
  std::string text = out.str();

  std::string empty_swabs = text;
  const auto pos = empty_swabs.find(",6000,");
  REQUIRE(pos != std::string::npos);
  empty_swabs.replace(pos, 6, ",,");
  std::istringstream in1(empty_swabs);
  CHECK_THROWS_WITH(parse_regional_csv(in1, "feed.csv"),
                    ContainsSubstring("row 2") && ContainsSubstring("tamponi"));

  std::string bad_number = text;
  bad_number.replace(bad_number.find(",6000,"), 6, ",59x0,");
  std::istringstream in2(bad_number);
  CHECK_THROWS_WITH(parse_regional_csv(in2, "feed.csv"), ContainsSubstring("non-numeric"));

  std::string bad_date = text;
  bad_date.replace(bad_date.find("2020-02-25"), 10, "2020-13-25");
  std::istringstream in3(bad_date);
  CHECK_THROWS_WITH(parse_regional_csv(in3, "feed.csv"), ContainsSubstring("column 'data'"));

  std::istringstream in4("data,denominazione_regione,totale_casi\n2020-02-24,Veneto,1\n");
  CHECK_THROWS_WITH(parse_regional_csv(in4, "feed.csv"), ContainsSubstring("totale_positivi"));
}

TEST_CASE("window selection", "[ingest]") {
  const auto table = feed(veneto_rows(24, 10));
  const auto s = select_window(table, "veneto", sys_days{2020y / February / 25},
                               sys_days{2020y / February / 28});
  CHECK(s.region == "Veneto");
  CHECK(s.size() == 4);
  CHECK(s.dates.front() == sys_days{2020y / February / 25});
  CHECK(s.cumulative_cases.front() == 66.0);

  const auto lom = select_window(table, "Lombardy", sys_days{2020y / February / 24},
                                 sys_days{2020y / March / 4});
  CHECK(lom.region == "Lombardia");
  CHECK(lom.size() == 10);

  CHECK_THROWS_AS(select_window(table, "veneto", sys_days{2020y / April / 1},
                                sys_days{2020y / April / 5}),
                  DataError);
  CHECK_THROWS_AS(select_window(table, "toscana", sys_days{2020y / February / 24},
                                sys_days{2020y / February / 28}),
                  DataError);
  // Window runs past the data: the missing days are a gap.
  CHECK_THROWS_WITH(select_window(table, "veneto", sys_days{2020y / February / 24},
                                  sys_days{2020y / March / 10}),
                    ContainsSubstring("missing day"));

  auto rows = veneto_rows(24, 10);
  rows.erase(rows.begin() + 6);  // Veneto Feb 27
  CHECK_THROWS_WITH(select_window(feed(rows), "veneto", sys_days{2020y / February / 24},
                                  sys_days{2020y / March / 4}),
                    ContainsSubstring("2020-02-27"));
}

TEST_CASE("region names", "[ingest]") {
  CHECK(official_region_name("emilia-romagna") == "Emilia-Romagna");
  CHECK(official_region_name("Emilia Romagna") == "Emilia-Romagna");
  CHECK(official_region_name("tuscany") == "Toscana");
  CHECK(official_region_name("Molise") == "Molise");
  CHECK(normalize_region_name("P.A. Bolzano") == "pabolzano");
}

TEST_CASE("patches prepend days and record provenance", "[ingest]") {
  const auto table = feed(veneto_rows(24, 5));
  const auto raw = select_window(table, "veneto", sys_days{2020y / February / 24},
                                 sys_days{2020y / February / 28});
  std::istringstream patch_file(
      "region,date,field,value,note\n"
      "# Veneto, first three days\n"
      "veneto,2020-02-21,infected,2,press\n"
      "veneto,2020-02-21,recovered,0,press\n"
      "veneto,2020-02-21,deaths,0,press\n"
      "veneto,2020-02-21,daily_swabs,200,fixed\n"
      "veneto,2020-02-22,infected,20,press\n"
      "veneto,2020-02-22,recovered,0,press\n"
      "veneto,2020-02-22,deaths,1,press\n"
      "veneto,2020-02-22,daily_swabs,700,fixed\n"
      "veneto,2020-02-23,infected,25,press\n"
      "veneto,2020-02-23,recovered,0,press\n"
      "veneto,2020-02-23,deaths,1,press\n"
      "veneto,2020-02-23,daily_swabs,1500,fixed\n"
      "lombardy,2020-02-21,infected,999,ignored for Veneto\n");
  const auto patches = read_patches(patch_file, "patches.csv");
  CHECK(patches.patches.size() == 13);
  const auto patched = apply_patches(raw, patches);
  REQUIRE(patched.size() == 8);
  CHECK(patched.dates.front() == sys_days{2020y / February / 21});
  CHECK(patched.cumulative_swabs[0] == 200.0);
  CHECK(patched.cumulative_swabs[1] == 900.0);
  CHECK(patched.cumulative_swabs[2] == 2400.0);
  CHECK(patched.cumulative_cases[1] == 21.0);
  CHECK(patched.provenance.size() == 12);

  const auto cleaned = clean_series(patched);
  CHECK(std::vector<double>(cleaned.daily_swabs.begin(), cleaned.daily_swabs.begin() + 3) ==
        std::vector<double>{200.0, 700.0, 1500.0});

  // Reconstruct the cumulative swabs from the daily ones.
  double total = 0.0;
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    total += cleaned.daily_swabs[i];
    CHECK(total == cleaned.cumulative_swabs[i]);
  }

  CHECK(apply_patches(raw, PatchSet{}) == raw);
}

TEST_CASE("mean patches and patch errors", "[ingest]") {
  auto s = series_from({100.0, 200.0, 300.0, 400.0});
  PatchSet mean;
  mean.patches.push_back({"Lombardia", sys_days{2020y / February / 22}, SeriesField::cumulative_swabs,
                          std::nullopt, "mean of neighbours"});
  mean.patches.push_back({"Lombardia", sys_days{2020y / February / 21}, SeriesField::cumulative_swabs,
                          150.0, "press release"});
  mean.patches.push_back({"Lombardia", sys_days{2020y / February / 23}, SeriesField::cumulative_swabs,
                          250.0, "news article"});
  const auto out = apply_patches(s, mean);
  CHECK(out.cumulative_swabs[1] == 200.0);
  CHECK(out.cumulative_swabs[0] == 150.0);

  PatchSet dup = mean;
  dup.patches.push_back(dup.patches[1]);
  CHECK_THROWS_AS(apply_patches(s, dup), PatchError);

  PatchSet incomplete;
  incomplete.patches.push_back({"Lombardia", sys_days{2020y / February / 20}, SeriesField::infected,
                                5.0, ""});
  CHECK_THROWS_WITH(apply_patches(s, incomplete), ContainsSubstring("recovered"));

  PatchSet late;
  late.patches.push_back({"Lombardia", sys_days{2020y / March / 20}, SeriesField::infected, 5.0, ""});
  CHECK_THROWS_AS(apply_patches(s, late), PatchError);

  std::istringstream bad("region,date,field,value,note\nveneto,2020-02-21,colour,3,x\n");
  CHECK_THROWS_AS(read_patches(bad), PatchError);
}

TEST_CASE("monotone repair", "[ingest]") {
  auto s = series_from({10.0, 8.0, 20.0});
  const auto fixed = enforce_monotone(s, SeriesField::cumulative_swabs);
  CHECK(fixed.series.cumulative_swabs == std::vector<double>{10.0, 15.0, 20.0});
  REQUIRE(fixed.repaired.size() == 1);
  CHECK(fixed.repaired[0] == s.dates[1]);
  CHECK(fixed.series.provenance.size() == 1);

  auto ok = series_from({1.0, 2.0, 2.0, 5.0});
  const auto same = enforce_monotone(ok, SeriesField::cumulative_swabs);
  CHECK(same.series == ok);
  CHECK(same.repaired.empty());

  CHECK_THROWS_AS(enforce_monotone(series_from({10.0, 20.0, 15.0}), SeriesField::cumulative_swabs),
                  DataError);
  // A spike cannot be undone by averaging once.
  CHECK_THROWS_AS(enforce_monotone(series_from({10.0, 50.0, 20.0, 30.0}), SeriesField::cumulative_swabs),
                  DataError);
  CHECK_THROWS(enforce_monotone(ok, SeriesField::infected));
}

TEST_CASE("daily swabs", "[ingest]") {
  CHECK(daily_swabs({200.0, 900.0, 2400.0}) == std::vector<double>{200.0, 700.0, 1500.0});
  CHECK(daily_swabs({50.0, 50.0, 50.0}) == std::vector<double>{50.0, 0.0, 0.0});
  CHECK_THROWS_AS(daily_swabs({5.0, 4.0}), DataError);
}

TEST_CASE("cleaning checks the case identity on official rows", "[ingest]") {
  auto s = series_from({100.0, 200.0, 300.0});
  s.cumulative_cases[1] += 1.0;
  CHECK_THROWS_WITH(clean_series(s), ContainsSubstring("differ"));
  CHECK_NOTHROW(clean_series(s, {s.dates[1]}));
}

TEST_CASE("cleaned CSV round-trips bit for bit", "[ingest][property]") {
  auto s = testing::synthetic_series(ModelKind::dmp_swab, testing::kVenetoDmpSwab, 30, 0.01);
  s.region = "Emilia-Romagna";
  s.provenance = {"patch 2020-03-28 cumulative_swabs=1234.5 (regional bulletin, \"Modena\")"};
  s.cumulative_cases[3] = 0.1 + 0.2;
  std::ostringstream out;
  write_cleaned_csv(out, s);
  std::istringstream in(out.str());
  const auto back = read_cleaned_csv(in);
  CHECK(back == s);

  // The generic reader accepts it too.
  std::istringstream again(out.str());
  const auto table = parse_csv(again);
  CHECK(table.header.size() == 7);
  CHECK(table.rows.size() == 30);
}

TEST_CASE("generic CSV reader", "[csv]") {
  std::istringstream in("a,b,c\r\n1,\"x, y\",\"he said \"\"hi\"\"\"\n\n# note\n2,,3\n");
  const auto t = parse_csv(in);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x, y");
  CHECK(t.rows[0][2] == "he said \"hi\"");
  CHECK(t.rows[1][1].empty());
  CHECK(t.comments == std::vector<std::string>{" note"});
  CHECK(*t.column("c") == 2);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(parse_csv(ragged), CsvError);
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_significant(19932.2134) == "19932.2");
  CHECK(parse_number(" 12.5 ") == 12.5);
  CHECK_FALSE(parse_number("12a"));
  CHECK_FALSE(parse_number(""));
}
