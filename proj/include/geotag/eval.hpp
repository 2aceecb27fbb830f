#pragma once

#include <string>
#include <vector>

#include "geotag/geodesy.hpp"

namespace geotag {

struct GeoRecord {
  std::string id;
  GeoPoint point;
};

struct MatchPair {
  std::string prediction_id;
  std::string truth_id;
  double distance_m = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<std::string> unmatched_predictions;
  std::vector<std::string> unmatched_truths;
};

struct EvalReport {
  int n_actual = 0;
  int n_detected = 0;
  int tp = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double mean_error_m = 0.0;
};

/// Greedy one-to-one matching over all prediction/truth pairs within
/// tp_radius_m, taken in ascending Haversine distance; ties break by
/// prediction id then truth id.
MatchResult match_predictions(const std::vector<GeoRecord>& predictions,
                              const std::vector<GeoRecord>& truths,
                              double tp_radius_m = 6.0);

/// precision = tp/n_detected, recall = tp/n_actual, F = 2PR/(P+R); zero in
/// place of a 0/0. mean_error_m averages paired distances (0 with no pairs).
EvalReport compute_metrics(const MatchResult& match, int n_actual,
                           int n_detected);

/// Truncation toward zero at two decimals, the rounding used by the printed
/// comparison tables.
double table_round(double value);

}  // namespace geotag
