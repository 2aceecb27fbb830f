#pragma once

#include <vector>

#include "geotag/geodesy.hpp"
#include "geotag/osmprior.hpp"

namespace geotag {

/// Group of positive MRF sites believed to be one object.
struct Cluster {
  std::vector<EnuPoint> sites;
  std::vector<double> weights;  // filled by refine_cluster_position
  EnuPoint position;            // unweighted mean until refined
  double weight_sum = 0.0;
  bool prior_fallback = false;  // all sites fully penalized by the prior
};

/// Single-linkage agglomerative clustering: merge while any inter-cluster gap
/// is within threshold_m. Cluster position starts as the unweighted mean.
/// Clusters are ordered by their first site's input index.
std::vector<Cluster> cluster_positives(const std::vector<EnuPoint>& sites,
                                       double threshold_m = 2.0);

/// Weighted average of the cluster sites with weights from the prior field:
///   P = sum W(c_i) c_i / sum W(c_i).
/// If the weights sum to under 1e-9 the unweighted mean is kept and the
/// cluster is flagged prior_fallback. Updates the cluster in place and
/// returns the refined position.
EnuPoint refine_cluster_position(Cluster& cluster, const PriorField& prior);

}  // namespace geotag
