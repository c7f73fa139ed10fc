#pragma once

#include <cstdint>

#include "bw/csv.hpp"
#include "bw/dataset.hpp"

namespace bw {

// Seeded generators for the bundled synthetic datasets. All are
// deterministic given the seed.

/// Clean chronological set with a regime change: the oldest `n_old`
/// projects follow a different effort relation than the recent `n_new`.
/// Records carry raw (untransformed) values; the last record is the
/// chronologically newest and is the natural holdout.
ProjectSet make_regime_shift_set(uint64_t seed, size_t n_old = 50,
                                 size_t n_new = 100);

/// 145-project single-company CSV shaped like the public Kitchenham data:
/// AFP, duration and effort over 1994-1999 in three project eras, with a
/// couple of unusable rows and a few gross outliers.
CsvTable make_kitchenham_like_csv(uint64_t seed);
ColumnSchema kitchenham_like_schema();

/// 4106-row cross-company CSV shaped like an ISBSG extract: quality
/// ratings, FP versions, web flags, categoricals and missing values
/// arranged so exactly 1097 rows pass the standard quality filters.
CsvTable make_isbsg_like_csv(uint64_t seed);
ColumnSchema isbsg_like_schema();

}  // namespace bw
