#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geotag/geodesy.hpp"
#include "geotag/panorama.hpp"

namespace geotag {

/// One per-image detection, either pixel-form (view_index + pixel) or
/// bearing-form. depth_m is the monocular range estimate.
struct Detection {
  std::string camera_id;
  std::optional<int> view_index;
  std::optional<PixelCoord> pixel;
  std::optional<double> bearing_deg;
  double depth_m = 0.0;
  std::string object_class;

  bool is_pixel_form() const { return view_index.has_value() && pixel.has_value(); }
};

/// 2D half-line in ENU: camera position plus the detection's world bearing.
struct ObservationRay {
  int ray_id = 0;
  std::string camera_id;
  EnuPoint origin;
  Bearing bearing;
  double depth_m = 0.0;
  std::string object_class;

  EnuPoint direction() const { return bearing_to_direction(bearing); }
};

/// Intersection of two rays: a candidate object site.
struct IntersectionNode {
  int node_id = 0;
  EnuPoint position;
  std::array<int, 2> ray_ids{};          // ids of the generating rays
  std::array<double, 2> distances_m{};   // forward distance along each ray
  double angle_deg = 0.0;                // angle between the rays, (0, 180)
};

struct RayGraph {
  std::vector<ObservationRay> rays;
  std::vector<IntersectionNode> nodes;
  /// Per ray (aligned with `rays`): node indices sorted by distance along it.
  std::vector<std::vector<int>> nodes_on_ray;

  int ray_index(int ray_id) const;
};

/// Binary occupancy per node, aligned with RayGraph::nodes.
struct Labeling {
  std::vector<uint8_t> labels;

  int occupied_count() const;
};

struct EnergyParams {
  double depth_sigma_m = 3.0;     // unary: depth-agreement scale
  double pairwise_penalty = 2.0;  // per extra occupied node on one ray
  double occupancy_bias = 1.0;    // per ray left with no occupied node
  double min_angle_deg = 10.0;    // reject shallow intersections
  double max_depth_m = 25.0;      // reject far intersections
  uint64_t seed = 0;
  int icm_restarts = 10;
  int icm_max_sweeps = 100;
  int exhaustive_limit = 20;      // node count up to which enumeration runs
};

struct PoseLookup {
  std::string camera_id;
  EnuPoint position;
  Bearing heading;
};

/// One ray per detection. Pixel-form detections are mapped to bearings using
/// the camera heading and the view layout. Throws UnknownCamera.
std::vector<ObservationRay> cast_rays(const std::vector<Detection>& detections,
                                      const std::vector<PoseLookup>& poses,
                                      const ViewLayout& layout = {});

/// Node per ray pair whose forward half-lines intersect within
/// (0, max_depth_m] at an angle in [min_angle, 180 - min_angle]. The node set
/// is canonical: independent of ray input order.
RayGraph build_intersection_graph(const std::vector<ObservationRay>& rays,
                                  const EnergyParams& params = {});

/// Occupancy energy:
///   sum over occupied nodes of the depth-agreement unary
///   + pairwise_penalty * sum over rays of max(0, occupied_on_ray - 1)
///   + occupancy_bias  * count of rays with no occupied node.
/// The unary of a node sums (distance - depth_estimate)^2 / (2 sigma^2) over
/// both of its rays. Throws LabelMismatch.
double energy(const RayGraph& graph, const Labeling& labeling,
              const EnergyParams& params);

/// Global minimum by enumeration; ties break toward the lexicographically
/// smallest label vector. Feasible for small graphs only.
Labeling solve_mrf_exhaustive(const RayGraph& graph,
                              const EnergyParams& params);

/// Iterated conditional modes from a greedy start, plus seeded random
/// restarts; returns the best labeling found.
Labeling solve_mrf_icm(const RayGraph& graph, const EnergyParams& params);

/// Exhaustive up to params.exhaustive_limit nodes, ICM beyond.
Labeling solve_mrf(const RayGraph& graph, const EnergyParams& params);

/// Positions of nodes labeled 1.
std::vector<EnuPoint> positive_sites(const RayGraph& graph,
                                     const Labeling& labeling);

}  // namespace geotag
