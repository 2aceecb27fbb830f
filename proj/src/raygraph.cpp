#include "geotag/raygraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace geotag {

namespace {

double cross2(const EnuPoint& a, const EnuPoint& b) {
  return a.x * b.y - a.y * b.x;
}

double dot2(const EnuPoint& a, const EnuPoint& b) {
  return a.x * b.x + a.y * b.y;
}

/// Unary potential of one node: squared depth mismatch summed over both rays.
double node_unary(const RayGraph& graph, const IntersectionNode& node,
                  const EnergyParams& params) {
  double inv = 1.0 / (2.0 * params.depth_sigma_m * params.depth_sigma_m);
  double u = 0.0;
  for (int k = 0; k < 2; ++k) {
    const ObservationRay& ray =
        graph.rays[static_cast<size_t>(graph.ray_index(node.ray_ids[static_cast<size_t>(k)]))];
    double mismatch = node.distances_m[static_cast<size_t>(k)] - ray.depth_m;
    u += mismatch * mismatch * inv;
  }
  return u;
}

/// Incremental solver state: per-ray occupancy counts plus cached unaries.
class EnergyModel {
 public:
  EnergyModel(const RayGraph& graph, const EnergyParams& params)
      : graph_(graph), params_(params) {
    unary_.reserve(graph.nodes.size());
    for (const IntersectionNode& node : graph.nodes) {
      unary_.push_back(node_unary(graph, node, params));
    }
    node_rays_.reserve(graph.nodes.size());
    for (const IntersectionNode& node : graph.nodes) {
      node_rays_.push_back({graph.ray_index(node.ray_ids[0]),
                            graph.ray_index(node.ray_ids[1])});
    }
  }

  void reset(const Labeling& labeling) {
    labels_ = labeling.labels;
    occupancy_.assign(graph_.rays.size(), 0);
    for (size_t i = 0; i < labels_.size(); ++i) {
      if (!labels_[i]) continue;
      ++occupancy_[static_cast<size_t>(node_rays_[i][0])];
      ++occupancy_[static_cast<size_t>(node_rays_[i][1])];
    }
    energy_ = 0.0;
    for (size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i]) energy_ += unary_[i];
    }
    for (int occ : occupancy_) {
      energy_ += params_.pairwise_penalty * std::max(0, occ - 1);
      if (occ == 0) energy_ += params_.occupancy_bias;
    }
  }

  double flip_delta(size_t i) const {
    int sign = labels_[i] ? -1 : +1;
    double delta = sign * unary_[i];
    for (int k = 0; k < 2; ++k) {
      int occ = occupancy_[static_cast<size_t>(node_rays_[i][static_cast<size_t>(k)])];
      int occ_new = occ + sign;
      delta += params_.pairwise_penalty *
               (std::max(0, occ_new - 1) - std::max(0, occ - 1));
      delta += params_.occupancy_bias *
               ((occ_new == 0 ? 1 : 0) - (occ == 0 ? 1 : 0));
    }
    return delta;
  }

  void flip(size_t i) {
    energy_ += flip_delta(i);
    int sign = labels_[i] ? -1 : +1;
    occupancy_[static_cast<size_t>(node_rays_[i][0])] += sign;
    occupancy_[static_cast<size_t>(node_rays_[i][1])] += sign;
    labels_[i] = labels_[i] ? 0 : 1;
  }

  double energy() const { return energy_; }
  const std::vector<uint8_t>& labels() const { return labels_; }
  size_t size() const { return labels_.size(); }

 private:
  const RayGraph& graph_;
  const EnergyParams& params_;
  std::vector<double> unary_;
  std::vector<std::array<int, 2>> node_rays_;
  std::vector<uint8_t> labels_;
  std::vector<int> occupancy_;
  double energy_ = 0.0;
};

/// One ICM pass sequence: sweep nodes in index order, flipping any node whose
/// flip strictly lowers the energy, until a full sweep changes nothing.
void icm_sweeps(EnergyModel& model, int max_sweeps) {
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (size_t i = 0; i < model.size(); ++i) {
      if (model.flip_delta(i) < 0.0) {
        model.flip(i);
        changed = true;
      }
    }
    if (!changed) break;
  }
}

/// Starting point for ICM: repeatedly apply the single best improving flip.
void greedy_descent(EnergyModel& model) {
  while (true) {
    double best_delta = -1e-15;
    size_t best_index = model.size();
    for (size_t i = 0; i < model.size(); ++i) {
      double delta = model.flip_delta(i);
      if (delta < best_delta) {
        best_delta = delta;
        best_index = i;
      }
    }
    if (best_index == model.size()) break;
    model.flip(best_index);
  }
}

}  // namespace

int RayGraph::ray_index(int ray_id) const {
  for (size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].ray_id == ray_id) return static_cast<int>(i);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown ray id");
}

int Labeling::occupied_count() const {
  int n = 0;
  for (uint8_t z : labels) n += z;
  return n;
}

std::vector<ObservationRay> cast_rays(const std::vector<Detection>& detections,
                                      const std::vector<PoseLookup>& poses,
                                      const ViewLayout& layout) {
  std::map<std::string, const PoseLookup*> by_id;
  for (const PoseLookup& pose : poses) by_id[pose.camera_id] = &pose;

  std::vector<ObservationRay> rays;
  rays.reserve(detections.size());
  int next_id = 0;
  for (const Detection& det : detections) {
    auto pose_it = by_id.find(det.camera_id);
    if (pose_it == by_id.end()) {
      throw Error(ErrorCode::UnknownCamera,
                  "detection references camera '" + det.camera_id + "'");
    }
    const PoseLookup& pose = *pose_it->second;
    Bearing bearing;
    if (det.is_pixel_form()) {
      if (*det.view_index < 0 || *det.view_index >= layout.view_count) {
        std::ostringstream msg;
        msg << "view index " << *det.view_index << " outside layout of "
            << layout.view_count << " views";
        throw Error(ErrorCode::OutOfView, msg.str());
      }
      RectilinearView view{det.camera_id, *det.view_index,
                           *det.view_index * layout.yaw_step_deg(),
                           layout.hfov_deg, layout.width, layout.height};
      bearing = pixel_to_bearing(view, pose.heading, *det.pixel);
    } else if (det.bearing_deg.has_value()) {
      bearing = Bearing(*det.bearing_deg);
    } else {
      throw Error(ErrorCode::SchemaError,
                  "detection has neither pixel nor bearing form");
    }
    if (!(det.depth_m > 0.0)) {
      throw Error(ErrorCode::SchemaError, "detection depth must be positive");
    }
    rays.push_back({next_id++, det.camera_id, pose.position, bearing,
                    det.depth_m, det.object_class});
  }
  return rays;
}

RayGraph build_intersection_graph(const std::vector<ObservationRay>& rays,
                                  const EnergyParams& params) {
  RayGraph graph;
  graph.rays = rays;

  struct Candidate {
    int lo_id, hi_id;
    IntersectionNode node;
  };
  std::vector<Candidate> candidates;

  for (size_t i = 0; i < rays.size(); ++i) {
    for (size_t j = i + 1; j < rays.size(); ++j) {
      const ObservationRay& a = rays[i];
      const ObservationRay& b = rays[j];
      EnuPoint da = a.direction();
      EnuPoint db = b.direction();
      double cos_angle = std::clamp(dot2(da, db), -1.0, 1.0);
      double angle = rad2deg(std::acos(cos_angle));
      if (angle < params.min_angle_deg || angle > 180.0 - params.min_angle_deg) {
        continue;
      }
      double denom = cross2(da, db);
      EnuPoint offset = b.origin - a.origin;
      double ta = cross2(offset, db) / denom;
      double tb = cross2(offset, da) / denom;
      if (!(ta > 0.0 && ta <= params.max_depth_m)) continue;
      if (!(tb > 0.0 && tb <= params.max_depth_m)) continue;

      IntersectionNode node;
      node.position = a.origin + ta * da;
      if (a.ray_id <= b.ray_id) {
        node.ray_ids = {a.ray_id, b.ray_id};
        node.distances_m = {ta, tb};
      } else {
        node.ray_ids = {b.ray_id, a.ray_id};
        node.distances_m = {tb, ta};
      }
      node.angle_deg = angle;
      candidates.push_back(
          {std::min(a.ray_id, b.ray_id), std::max(a.ray_id, b.ray_id), node});
    }
  }

  // Canonical node order so permuting the input rays changes nothing.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& lhs, const Candidate& rhs) {
              if (lhs.lo_id != rhs.lo_id) return lhs.lo_id < rhs.lo_id;
              return lhs.hi_id < rhs.hi_id;
            });
  graph.nodes.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].node.node_id = static_cast<int>(i);
    graph.nodes.push_back(candidates[i].node);
  }

  graph.nodes_on_ray.assign(rays.size(), {});
  for (const IntersectionNode& node : graph.nodes) {
    graph.nodes_on_ray[static_cast<size_t>(graph.ray_index(node.ray_ids[0]))]
        .push_back(node.node_id);
    graph.nodes_on_ray[static_cast<size_t>(graph.ray_index(node.ray_ids[1]))]
        .push_back(node.node_id);
  }
  for (size_t r = 0; r < graph.nodes_on_ray.size(); ++r) {
    int ray_id = graph.rays[r].ray_id;
    auto distance_on_ray = [&](int node_id) {
      const IntersectionNode& node = graph.nodes[static_cast<size_t>(node_id)];
      return node.ray_ids[0] == ray_id ? node.distances_m[0]
                                       : node.distances_m[1];
    };
    std::sort(graph.nodes_on_ray[r].begin(), graph.nodes_on_ray[r].end(),
              [&](int lhs, int rhs) {
                double dl = distance_on_ray(lhs);
                double dr = distance_on_ray(rhs);
                if (dl != dr) return dl < dr;
                return lhs < rhs;
              });
  }
  return graph;
}

double energy(const RayGraph& graph, const Labeling& labeling,
              const EnergyParams& params) {
  if (labeling.labels.size() != graph.nodes.size()) {
    std::ostringstream msg;
    msg << "labeling has " << labeling.labels.size() << " labels for "
        << graph.nodes.size() << " nodes";
    throw Error(ErrorCode::LabelMismatch, msg.str());
  }
  double total = 0.0;
  std::vector<int> occupancy(graph.rays.size(), 0);
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    if (!labeling.labels[i]) continue;
    total += node_unary(graph, graph.nodes[i], params);
    ++occupancy[static_cast<size_t>(graph.ray_index(graph.nodes[i].ray_ids[0]))];
    ++occupancy[static_cast<size_t>(graph.ray_index(graph.nodes[i].ray_ids[1]))];
  }
  for (int occ : occupancy) {
    total += params.pairwise_penalty * std::max(0, occ - 1);
    if (occ == 0) total += params.occupancy_bias;
  }
  return total;
}

Labeling solve_mrf_exhaustive(const RayGraph& graph,
                              const EnergyParams& params) {
  size_t n = graph.nodes.size();
  if (n > 30) {
    throw Error(ErrorCode::InvalidArgument,
                "exhaustive enumeration limited to 30 nodes");
  }
  EnergyModel model(graph, params);
  Labeling best{std::vector<uint8_t>(n, 0)};
  Labeling current{std::vector<uint8_t>(n, 0)};
  model.reset(current);
  double best_energy = model.energy();

  // Enumerate with node 0 as the most significant bit: ascending m walks
  // label vectors in lexicographic order, so the first strict minimum is the
  // lexicographically smallest optimum.
  uint64_t count = uint64_t{1} << n;
  for (uint64_t m = 1; m < count; ++m) {
    for (size_t i = 0; i < n; ++i) {
      current.labels[i] = static_cast<uint8_t>((m >> (n - 1 - i)) & 1);
    }
    model.reset(current);
    if (model.energy() < best_energy) {
      best_energy = model.energy();
      best = current;
    }
  }
  return best;
}

Labeling solve_mrf_icm(const RayGraph& graph, const EnergyParams& params) {
  size_t n = graph.nodes.size();
  EnergyModel model(graph, params);

  Labeling best{std::vector<uint8_t>(n, 0)};
  double best_energy = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<uint8_t>& labels, double e) {
    if (e < best_energy || (e == best_energy && labels < best.labels)) {
      best_energy = e;
      best.labels = labels;
    }
  };

  // Deterministic starts: greedy descent from all-zeros, then ICM from the
  // all-ones labeling.
  model.reset(Labeling{std::vector<uint8_t>(n, 0)});
  greedy_descent(model);
  icm_sweeps(model, params.icm_max_sweeps);
  consider(model.labels(), model.energy());

  model.reset(Labeling{std::vector<uint8_t>(n, 1)});
  icm_sweeps(model, params.icm_max_sweeps);
  consider(model.labels(), model.energy());

  std::mt19937_64 rng(params.seed);
  std::bernoulli_distribution coin(0.5);
  for (int restart = 0; restart < params.icm_restarts; ++restart) {
    Labeling start{std::vector<uint8_t>(n, 0)};
    for (size_t i = 0; i < n; ++i) {
      start.labels[i] = coin(rng) ? 1 : 0;
    }
    model.reset(start);
    icm_sweeps(model, params.icm_max_sweeps);
    consider(model.labels(), model.energy());
  }
  return best;
}

Labeling solve_mrf(const RayGraph& graph, const EnergyParams& params) {
  if (graph.nodes.size() <= static_cast<size_t>(params.exhaustive_limit)) {
    return solve_mrf_exhaustive(graph, params);
  }
  return solve_mrf_icm(graph, params);
}

std::vector<EnuPoint> positive_sites(const RayGraph& graph,
                                     const Labeling& labeling) {
  if (labeling.labels.size() != graph.nodes.size()) {
    throw Error(ErrorCode::LabelMismatch, "labeling does not match graph");
  }
  std::vector<EnuPoint> sites;
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    if (labeling.labels[i]) sites.push_back(graph.nodes[i].position);
  }
  return sites;
}

}  // namespace geotag
