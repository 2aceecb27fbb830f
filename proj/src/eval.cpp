#include "geotag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace geotag {

MatchResult match_predictions(const std::vector<GeoRecord>& predictions,
                              const std::vector<GeoRecord>& truths,
                              double tp_radius_m) {
  if (tp_radius_m <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "tp radius must be positive");
  }

  struct CandidatePair {
    double distance;
    size_t prediction;
    size_t truth;
  };
  std::vector<CandidatePair> candidates;
  for (size_t p = 0; p < predictions.size(); ++p) {
    for (size_t t = 0; t < truths.size(); ++t) {
      double d = haversine_m(predictions[p].point, truths[t].point);
      if (d <= tp_radius_m) candidates.push_back({d, p, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const CandidatePair& a, const CandidatePair& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (predictions[a.prediction].id != predictions[b.prediction].id) {
                return predictions[a.prediction].id <
                       predictions[b.prediction].id;
              }
              return truths[a.truth].id < truths[b.truth].id;
            });

  MatchResult result;
  std::vector<char> prediction_used(predictions.size(), 0);
  std::vector<char> truth_used(truths.size(), 0);
  for (const CandidatePair& c : candidates) {
    if (prediction_used[c.prediction] || truth_used[c.truth]) continue;
    prediction_used[c.prediction] = 1;
    truth_used[c.truth] = 1;
    result.pairs.push_back(
        {predictions[c.prediction].id, truths[c.truth].id, c.distance});
  }
  for (size_t p = 0; p < predictions.size(); ++p) {
    if (!prediction_used[p]) {
      result.unmatched_predictions.push_back(predictions[p].id);
    }
  }
  for (size_t t = 0; t < truths.size(); ++t) {
    if (!truth_used[t]) result.unmatched_truths.push_back(truths[t].id);
  }
  return result;
}

EvalReport compute_metrics(const MatchResult& match, int n_actual,
                           int n_detected) {
  EvalReport report;
  report.n_actual = n_actual;
  report.n_detected = n_detected;
  report.tp = static_cast<int>(match.pairs.size());
  report.precision =
      n_detected > 0 ? static_cast<double>(report.tp) / n_detected : 0.0;
  report.recall =
      n_actual > 0 ? static_cast<double>(report.tp) / n_actual : 0.0;
  double pr = report.precision + report.recall;
  report.f_measure =
      pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  if (!match.pairs.empty()) {
    double sum = 0.0;
    for (const MatchPair& pair : match.pairs) sum += pair.distance_m;
    report.mean_error_m = sum / static_cast<double>(match.pairs.size());
  }
  return report;
}

double table_round(double value) {
  return std::trunc(value * 100.0) / 100.0;
}

}  // namespace geotag
