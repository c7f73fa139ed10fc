#include "bw/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bw {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string pad_id(const char* prefix, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

ProjectSet make_regime_shift_set(uint64_t seed, size_t n_old, size_t n_new) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> size_dist(5.0, 0.5);
  std::normal_distribution<double> dur_dist(2.0, 0.3);
  std::normal_distribution<double> noise(0.0, 0.05);

  ProjectSet ps;
  ps.feature_schema = {{"size", FeatureKind::ratio},
                       {"effort", FeatureKind::ratio},
                       {"elapsed_time", FeatureKind::ratio}};
  const long base = Date::from_ymd(2000, 1, 1).serial();
  const size_t n = n_old + n_new;
  long day = base;
  for (size_t i = 0; i < n; ++i) {
    day += 10 + static_cast<long>(rng() % 6);
    ProjectRecord r;
    r.id = pad_id("p", i + 1);
    r.completion_date = Date(day);
    const double ln_size = size_dist(rng);
    const double ln_dur = dur_dist(rng);
    double ln_eff;
    if (i < n_old) {
      ln_eff = 4.0 + 0.3 * ln_size - 0.2 * ln_dur + noise(rng);
    } else {
      ln_eff = 1.0 + 0.9 * ln_size + 0.2 * ln_dur + noise(rng);
    }
    r.ratio["size"] = std::exp(ln_size);
    r.ratio["effort"] = std::exp(ln_eff);
    r.ratio["elapsed_time"] = std::exp(ln_dur);
    ps.records.push_back(std::move(r));
  }
  return ps;
}

ColumnSchema kitchenham_like_schema() {
  ColumnSchema s;
  s.completion_date = "completion_date";
  s.size = "afp";
  s.effort = "effort_hours";
  s.elapsed_time = "duration_days";
  s.id = "id";
  s.start_date = "start_date";
  s.derive_pdr = false;
  return s;
}

CsvTable make_kitchenham_like_csv(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  CsvTable t;
  t.header = {"id", "start_date", "completion_date", "afp", "duration_days",
              "effort_hours"};

  // Three project eras with distinct size/duration regimes; a shared
  // effort-size relation; two unusable rows and three gross outliers.
  struct Era {
    long start_day, end_day;
    double ln_afp, ln_dur;
    size_t count;
  };
  const std::vector<Era> eras = {
      {Date::from_ymd(1994, 1, 1).serial(), Date::from_ymd(1995, 9, 30).serial(),
       4.0, 3.6, 48},
      {Date::from_ymd(1995, 10, 1).serial(), Date::from_ymd(1997, 6, 30).serial(),
       5.2, 4.3, 48},
      {Date::from_ymd(1997, 7, 1).serial(), Date::from_ymd(1999, 3, 31).serial(),
       6.4, 5.0, 49},
  };

  size_t row_id = 0;
  std::vector<std::vector<std::string>> rows;
  for (const auto& era : eras) {
    const long span = era.end_day - era.start_day;
    std::vector<long> days(era.count);
    for (auto& d : days) {
      d = era.start_day + static_cast<long>(rng() % static_cast<uint64_t>(span));
    }
    std::sort(days.begin(), days.end());
    for (size_t i = 0; i < era.count; ++i) {
      ++row_id;
      const double ln_afp = era.ln_afp + 0.2 * unit(rng);
      const double ln_dur = era.ln_dur + 0.15 * unit(rng);
      double ln_eff = 1.5 + 0.85 * ln_afp + 0.08 * unit(rng);
      std::string effort = format_double(std::exp(ln_eff));
      // Rows 30 and 77 lack an effort figure; rows 15, 60 and 120 are
      // gross outliers.
      if (row_id == 30 || row_id == 77) effort = "";
      if (row_id == 15 || row_id == 60 || row_id == 120) {
        effort = format_double(std::exp(ln_eff + 2.5));
      }
      const long start = days[i] - static_cast<long>(std::exp(ln_dur));
      rows.push_back({pad_id("kit", row_id), Date(start).to_iso(),
                      Date(days[i]).to_iso(), format_double(std::exp(ln_afp)),
                      format_double(std::exp(ln_dur)), effort});
    }
  }
  t.rows = std::move(rows);
  return t;
}

ColumnSchema isbsg_like_schema() {
  ColumnSchema s;
  s.completion_date = "completion_date";
  s.size = "ufp";
  s.effort = "effort_hours";
  s.elapsed_time = "elapsed_years";
  s.id = "id";
  s.quality_rating = "rating";
  s.fp_version = "fp_version";
  s.web_project = "web";
  s.categoricals = {"language_type", "development_type", "platform", "sector"};
  s.derive_pdr = true;
  return s;
}

CsvTable make_isbsg_like_csv(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  enum Fate {
    clean,
    missing_age,
    low_rating,
    old_fp,
    missing_effort,
    missing_size,
    web,
    missing_cat
  };
  std::vector<Fate> fates;
  auto add = [&](Fate f, size_t count) { fates.insert(fates.end(), count, f); };
  add(clean, 1097);
  add(missing_age, 500);
  add(low_rating, 600);
  add(old_fp, 500);
  add(missing_effort, 400);
  add(missing_size, 300);
  add(web, 400);
  add(missing_cat, 309);  // total 4106
  std::shuffle(fates.begin(), fates.end(), rng);

  const char* languages[] = {"3GL", "4GL"};
  const char* dev_types[] = {"new_development", "enhancement", "re_development"};
  const char* platforms[] = {"PC", "mainframe", "midrange", "multi_platform"};
  const char* sectors[] = {"manufacturing", "banking", "insurance", "other"};

  const long d0 = Date::from_ymd(1988, 5, 1).serial();
  const long d1 = Date::from_ymd(2007, 11, 30).serial();

  CsvTable t;
  t.header = {"id",      "completion_date", "ufp",
              "effort_hours", "elapsed_years",   "rating",
              "fp_version",   "web",             "language_type",
              "development_type", "platform",    "sector"};
  for (size_t i = 0; i < fates.size(); ++i) {
    const Fate f = fates[i];
    const long day = d0 + static_cast<long>(rng() % static_cast<uint64_t>(d1 - d0));
    const size_t lang = rng() % 2;
    const size_t dev = rng() % 3;
    const size_t plat = rng() % 4;
    const size_t sec = rng() % 4;
    const double ln_size = 5.5 + 0.7 * unit(rng);
    const double ln_dur = 0.2 + 0.35 * unit(rng);  // ln of elapsed years
    const double ln_eff = 1.2 + 0.75 * ln_size + 0.3 * std::exp(ln_dur) * 0.1 +
                          (lang == 0 ? 0.15 : 0.0) + 0.3 * unit(rng);

    std::string size_s = format_double(std::exp(ln_size));
    std::string eff_s = format_double(std::exp(ln_eff));
    std::string age_s = format_double(std::exp(ln_dur));
    std::string rating = (rng() % 2) ? "A" : "B";
    std::string fpv = (rng() % 2) ? "4.0" : "4.1";
    std::string webflag = "0";
    std::string cat_lang = languages[lang];

    switch (f) {
      case clean: break;
      case missing_age: age_s = ""; break;
      case low_rating: rating = (rng() % 2) ? "C" : "D"; break;
      case old_fp: fpv = (rng() % 2) ? "3.0" : "3.4"; break;
      case missing_effort: eff_s = ""; break;
      case missing_size: size_s = ""; break;
      case web: webflag = "1"; break;
      case missing_cat: cat_lang = ""; break;
    }
    t.rows.push_back({pad_id("isbsg", i + 1), Date(day).to_iso(), size_s, eff_s,
                      age_s, rating, fpv, webflag, cat_lang, dev_types[dev],
                      platforms[plat], sectors[sec]});
  }
  return t;
}

}  // namespace bw
