#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "geotag/geodesy.hpp"

namespace geotag {

struct OsmWay {
  std::vector<long long> node_ids;
  std::map<std::string, std::string> tags;

  bool has_tag(const std::string& key) const {
    return tags.find(key) != tags.end();
  }
};

/// Nodes and ways from an OSM XML extract. Roads are ways with a "highway"
/// tag (polylines); buildings are ways with a "building" tag (closed rings).
struct OsmData {
  std::map<long long, GeoPoint> nodes;
  std::map<long long, OsmWay> ways;
  std::vector<long long> road_way_ids;
  std::vector<long long> building_way_ids;

  /// Resolved vertex chain of a way.
  std::vector<GeoPoint> way_points(long long way_id) const;
};

/// Parse an OSM XML document (node/way/nd/tag schema).
/// Throws MalformedXml, DanglingNodeRef, OpenBuildingRing.
OsmData parse_osm_xml(const std::string& xml_text);
OsmData load_osm_file(const std::string& path);

/// Densify a polyline (or ring) in ENU: points at arc-length multiples of
/// `spacing_m` from the start plus all original vertices, duplicates within
/// 1 cm removed. A closed ring does not repeat its first point.
std::vector<EnuPoint> interpolate_nodes(const std::vector<EnuPoint>& vertices,
                                        double spacing_m = 5.0);

enum class KernelClass { Road, BuildingEdge };

/// One Gaussian penalty kernel centered on a densified OSM vertex.
struct KernelCenter {
  EnuPoint mu;
  double sigma_m = 2.0;
  KernelClass cls = KernelClass::Road;
};

/// Set of Gaussian kernels with a hash-grid spatial index. The weight at x is
///   W(x) = 1 - min(1, sum over kernels within 3*sigma of exp(-d^2/(2 sigma^2)))
/// clamped to [0, 1]. An empty field weighs 1 everywhere.
class PriorField {
 public:
  PriorField() = default;
  explicit PriorField(std::vector<KernelCenter> kernels, double cell_m = 0.25);

  double weight_at(const EnuPoint& x) const;

  const std::vector<KernelCenter>& kernels() const { return kernels_; }
  double cell_m() const { return cell_m_; }
  bool empty() const { return kernels_.empty(); }

 private:
  int64_t cell_key(double x, double y) const;

  std::vector<KernelCenter> kernels_;
  double cell_m_ = 0.25;
  double max_sigma_ = 0.0;
  std::unordered_map<int64_t, std::vector<int>> grid_;
};

struct PriorOptions {
  double sigma_road_m = 2.0;
  double sigma_building_m = 1.0;
  double interpolation_spacing_m = 5.0;
  double grid_cell_m = 0.25;
};

/// Fit one kernel per densified road vertex (sigma_road) and per densified
/// building-ring vertex (sigma_building).
PriorField build_prior_field(const OsmData& osm, const LocalFrame& frame,
                             const PriorOptions& options = {});

/// Rasterize W over the kernel bounding box (plus margin) and write an ASCII
/// grid (ncols/nrows/xllcorner/yllcorner/cellsize/nodata header).
void write_prior_heatmap(const PriorField& field, const std::string& path,
                         double cell_m = 0.25, double margin_m = 10.0);

}  // namespace geotag
