#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "bw/csv.hpp"
#include "bw/dataset.hpp"
#include "bw/errors.hpp"
#include "bw/stats.hpp"
#include "oracles.hpp"

using doctest::Approx;

namespace {

bw::CsvTable table_from(const std::string& text) {
  std::istringstream in(text);
  return bw::read_csv_stream(in, "mem");
}

bw::ColumnSchema tiny_schema() {
  bw::ColumnSchema s;
  s.id = "id";
  s.derive_pdr = false;
  return s;
}

}  // namespace

TEST_CASE("loader keeps valid rows and rejects incomplete ones") {
  const auto t = table_from(
      "id,completion_date,size,effort,elapsed_time\n"
      "a,2001-01-01,100,500,30\n"
      "b,2001-02-01,,500,30\n"       // no size
      "c,2001-03-01,100,,30\n"       // no effort
      "d,bad-date,100,500,30\n"      // no date
      "e,2001-04-01,100,500,\n");    // age missing but loadable
  const auto res = bw::load_projects_table(t, tiny_schema(), "mem");
  CHECK(res.set.records.size() == 2);
  CHECK(res.rejected.size() == 3);
  CHECK(res.set.records[0].id == "a");
  CHECK(res.set.records[1].id == "e");
  CHECK_FALSE(res.set.records[1].has_feature("elapsed_time"));
}

TEST_CASE("loader derives pdr as effort per size") {
  auto schema = tiny_schema();
  schema.derive_pdr = true;
  const auto t = table_from(
      "id,completion_date,size,effort,elapsed_time\n"
      "a,2001-01-01,100,500,30\n");
  const auto res = bw::load_projects_table(t, schema, "mem");
  REQUIRE(res.set.records.size() == 1);
  CHECK(res.set.records[0].feature("pdr") == Approx(5.0));
}

TEST_CASE("quality filters count removals by reason") {
  bw::ProjectSet ps;
  ps.feature_schema = {{"size", bw::FeatureKind::ratio},
                       {"effort", bw::FeatureKind::ratio},
                       {"elapsed_time", bw::FeatureKind::ratio}};
  auto rec = [&](const std::string& id) {
    bw::ProjectRecord r;
    r.id = id;
    r.completion_date = bw::Date::parse("2001-01-01");
    r.ratio = {{"size", 100.0}, {"effort", 500.0}, {"elapsed_time", 30.0}};
    return r;
  };
  ps.records.push_back(rec("keep"));
  auto r1 = rec("noage");
  r1.ratio.erase("elapsed_time");
  ps.records.push_back(r1);
  auto r2 = rec("lowq");
  r2.quality_rating = "C";
  ps.records.push_back(r2);
  auto r3 = rec("oldfp");
  r3.fp_version = 3.0;
  ps.records.push_back(r3);
  auto r4 = rec("web");
  r4.web_project = true;
  ps.records.push_back(r4);

  bw::FilterReport rep;
  const auto out = bw::filter_quality(ps, bw::FilterSpec{}, &rep);
  CHECK(out.records.size() == 1);
  CHECK(out.records[0].id == "keep");
  CHECK(rep.removed_by_filter.at("unknown_age") == 1);
  CHECK(rep.removed_by_filter.at("low_quality_rating") == 1);
  CHECK(rep.removed_by_filter.at("outdated_fp_version") == 1);
  CHECK(rep.removed_by_filter.at("web_project") == 1);
  CHECK(rep.retained == 1);
}

TEST_CASE("log transform lands in the open interval and inverts exactly") {
  bw::ProjectSet ps;
  ps.feature_schema = {{"effort", bw::FeatureKind::ratio}};
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> dist(6.0, 1.2);
  std::vector<double> raw;
  for (int i = 0; i < 50; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(i);
    r.ratio["effort"] = dist(rng);
    raw.push_back(r.ratio["effort"]);
    ps.records.push_back(std::move(r));
  }
  const double eps = 0.05;
  const auto out = bw::log_transform(ps, {"effort"}, eps);
  double lo = 1e300, hi = -1e300;
  for (size_t i = 0; i < out.records.size(); ++i) {
    const double v = out.records[i].feature("effort");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    CHECK(out.invert_feature("effort", v) == Approx(raw[i]).epsilon(1e-10));
  }
  CHECK(lo == Approx(eps));
  CHECK(hi == Approx(1.0 - eps));
  // Monotone: ordering is preserved.
  CHECK(out.apply_transforms("effort", 100.0) <
        out.apply_transforms("effort", 200.0));
}

TEST_CASE("zscore normalization yields mean 0 and sample sd 1") {
  bw::ProjectSet ps;
  ps.feature_schema = {{"size", bw::FeatureKind::ratio}};
  for (int i = 0; i < 20; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(i);
    r.ratio["size"] = 10.0 + 3.0 * i;
    ps.records.push_back(std::move(r));
  }
  const auto out = bw::zscore_normalize(ps, {"size"});
  const auto m = bw::moments(out.feature_column("size"));
  CHECK(m.mean == Approx(0.0).epsilon(1e-12));
  CHECK(m.sd == Approx(1.0).epsilon(1e-12));
  CHECK(out.invert_feature("size", out.records[7].feature("size")) ==
        Approx(10.0 + 21.0).epsilon(1e-12));
}

TEST_CASE("log transform tames a lognormal sample where zscore cannot") {
  bw::ProjectSet ps;
  ps.feature_schema = {{"effort", bw::FeatureKind::ratio}};
  std::mt19937_64 rng(11);
  std::lognormal_distribution<double> dist(7.0, 1.1);
  for (int i = 0; i < 200; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(i);
    r.ratio["effort"] = dist(rng);
    ps.records.push_back(std::move(r));
  }
  const auto logged = bw::log_transform(ps, {"effort"});
  const auto zs = bw::zscore_normalize(ps, {"effort"});
  const auto g_log = bw::normality_gate(bw::moments(logged.feature_column("effort")));
  const auto g_zs = bw::normality_gate(bw::moments(zs.feature_column("effort")));
  CHECK(g_log.pass);
  CHECK_FALSE(g_zs.pass);
}

TEST_CASE("cooks distances match the brute-force refit oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> unit(0.0, 1.0);
  bw::ProjectSet ps;
  ps.feature_schema = {{"size", bw::FeatureKind::ratio},
                       {"effort", bw::FeatureKind::ratio},
                       {"elapsed_time", bw::FeatureKind::ratio}};
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 25; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(i);
    const double a = unit(rng), b = unit(rng);
    double e = 1.0 + 2.0 * a - 0.5 * b + 0.3 * unit(rng);
    if (i == 13) e += 6.0;  // planted influential point
    r.ratio = {{"size", a}, {"elapsed_time", b}, {"effort", e}};
    ps.records.push_back(std::move(r));
    rows.push_back({1.0, a, b});
    y.push_back(e);
  }
  const auto d = bw::cooks_distances(ps, "effort", {"elapsed_time", "size"});
  const auto ref = oracle::cooks_by_refit(
      [&] {
        // oracle column order: intercept, elapsed_time, size
        std::vector<std::vector<double>> rr;
        for (const auto& r : rows) rr.push_back({r[0], r[2], r[1]});
        return rr;
      }(),
      y);
  REQUIRE(d.size() == ref.size());
  for (size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i] == Approx(ref[i]).epsilon(1e-8));
  }
  // The planted point dominates and the 4/n filter removes exactly it.
  bw::CooksReport rep;
  const auto out = bw::cooks_filter(ps, "effort", {"elapsed_time", "size"}, 0.0, &rep);
  CHECK(out.records.size() == 24);
  REQUIRE(rep.removed_ids.size() == 1);
  CHECK(rep.removed_ids[0] == "p13");
  CHECK(rep.threshold == Approx(4.0 / 25.0));
}

TEST_CASE("chronological sort is stable with id tie-break") {
  bw::ProjectSet ps;
  ps.feature_schema = {{"effort", bw::FeatureKind::ratio}};
  for (const auto& [id, day] :
       std::vector<std::pair<std::string, long>>{{"z", 5}, {"a", 5}, {"m", 2}}) {
    bw::ProjectRecord r;
    r.id = id;
    r.completion_date = bw::Date(day);
    r.ratio["effort"] = 1.0;
    ps.records.push_back(std::move(r));
  }
  const auto out = bw::sort_chronologically(ps);
  CHECK(out.records[0].id == "m");
  CHECK(out.records[1].id == "a");
  CHECK(out.records[2].id == "z");
}
