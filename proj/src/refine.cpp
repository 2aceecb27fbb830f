#include "geotag/refine.hpp"

#include <algorithm>
#include <numeric>

namespace geotag {

namespace {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  size_t find(size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void merge(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins, keeping component ids tied to input order.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

EnuPoint mean_of(const std::vector<EnuPoint>& points) {
  EnuPoint sum;
  for (const EnuPoint& p : points) sum = sum + p;
  return {sum.x / points.size(), sum.y / points.size()};
}

}  // namespace

std::vector<Cluster> cluster_positives(const std::vector<EnuPoint>& sites,
                                       double threshold_m) {
  if (threshold_m <= 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "clustering threshold must be positive");
  }
  if (sites.empty()) return {};

  // Single linkage with a stop threshold is exactly the connected components
  // of the graph whose edges join sites within the threshold.
  UnionFind components(sites.size());
  for (size_t i = 0; i < sites.size(); ++i) {
    for (size_t j = i + 1; j < sites.size(); ++j) {
      if (enu_distance(sites[i], sites[j]) <= threshold_m) {
        components.merge(i, j);
      }
    }
  }

  std::vector<Cluster> clusters;
  std::vector<int> cluster_of_root(sites.size(), -1);
  for (size_t i = 0; i < sites.size(); ++i) {
    size_t root = components.find(i);
    if (cluster_of_root[root] < 0) {
      cluster_of_root[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<size_t>(cluster_of_root[root])].sites.push_back(
        sites[i]);
  }
  for (Cluster& cluster : clusters) {
    cluster.position = mean_of(cluster.sites);
  }
  return clusters;
}

EnuPoint refine_cluster_position(Cluster& cluster, const PriorField& prior) {
  if (cluster.sites.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cluster has no sites");
  }
  cluster.weights.clear();
  cluster.weights.reserve(cluster.sites.size());
  double weight_sum = 0.0;
  EnuPoint weighted_sum;
  for (const EnuPoint& site : cluster.sites) {
    double w = prior.weight_at(site);
    cluster.weights.push_back(w);
    weight_sum += w;
    weighted_sum = weighted_sum + w * site;
  }
  cluster.weight_sum = weight_sum;
  if (weight_sum < 1e-9) {
    // The weighted average is undefined; keep the unweighted mean but flag it.
    cluster.prior_fallback = true;
    cluster.position = mean_of(cluster.sites);
    return cluster.position;
  }
  cluster.prior_fallback = false;
  cluster.position = {weighted_sum.x / weight_sum, weighted_sum.y / weight_sum};
  return cluster.position;
}

}  // namespace geotag
