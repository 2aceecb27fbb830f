#include "geotag/osmprior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace geotag {

namespace {

namespace pt = boost::property_tree;

long long attr_ll(const pt::ptree& element, const char* name) {
  auto value = element.get_optional<long long>("<xmlattr>." + std::string(name));
  if (!value) {
    throw Error(ErrorCode::MalformedXml,
                std::string("missing or non-integer attribute '") + name + "'");
  }
  return *value;
}

double attr_double(const pt::ptree& element, const char* name) {
  auto value = element.get_optional<double>("<xmlattr>." + std::string(name));
  if (!value) {
    throw Error(ErrorCode::MalformedXml,
                std::string("missing or non-numeric attribute '") + name + "'");
  }
  return *value;
}

}  // namespace

std::vector<GeoPoint> OsmData::way_points(long long way_id) const {
  auto way_it = ways.find(way_id);
  if (way_it == ways.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown way id");
  }
  std::vector<GeoPoint> points;
  points.reserve(way_it->second.node_ids.size());
  for (long long node_id : way_it->second.node_ids) {
    points.push_back(nodes.at(node_id));
  }
  return points;
}

OsmData parse_osm_xml(const std::string& xml_text) {
  pt::ptree tree;
  try {
    std::istringstream stream(xml_text);
    pt::read_xml(stream, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedXml, e.what());
  }

  auto osm_root = tree.get_child_optional("osm");
  if (!osm_root) {
    throw Error(ErrorCode::MalformedXml, "missing <osm> root element");
  }

  OsmData data;
  for (const auto& [name, element] : *osm_root) {
    if (name == "node") {
      long long id = attr_ll(element, "id");
      data.nodes.emplace(id, GeoPoint(attr_double(element, "lat"),
                                      attr_double(element, "lon")));
    } else if (name == "way") {
      long long id = attr_ll(element, "id");
      OsmWay way;
      for (const auto& [child_name, child] : element) {
        if (child_name == "nd") {
          way.node_ids.push_back(attr_ll(child, "ref"));
        } else if (child_name == "tag") {
          auto key = child.get_optional<std::string>("<xmlattr>.k");
          auto value = child.get_optional<std::string>("<xmlattr>.v");
          if (!key || !value) {
            throw Error(ErrorCode::MalformedXml,
                        "tag element without k/v attributes");
          }
          way.tags[*key] = *value;
        }
      }
      data.ways.emplace(id, std::move(way));
    }
  }

  for (const auto& [way_id, way] : data.ways) {
    for (long long node_id : way.node_ids) {
      if (data.nodes.find(node_id) == data.nodes.end()) {
        std::ostringstream msg;
        msg << "way " << way_id << " references missing node " << node_id;
        throw Error(ErrorCode::DanglingNodeRef, msg.str());
      }
    }
    bool is_road = way.has_tag("highway");
    bool is_building = way.has_tag("building");
    if (!is_road && !is_building) continue;
    if (way.node_ids.size() < 2) {
      std::ostringstream msg;
      msg << "way " << way_id << " has fewer than 2 nodes";
      throw Error(ErrorCode::SchemaError, msg.str());
    }
    if (is_road) data.road_way_ids.push_back(way_id);
    if (is_building) {
      if (way.node_ids.front() != way.node_ids.back()) {
        std::ostringstream msg;
        msg << "building way " << way_id << " is not a closed ring";
        throw Error(ErrorCode::OpenBuildingRing, msg.str());
      }
      data.building_way_ids.push_back(way_id);
    }
  }
  return data;
}

OsmData load_osm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open OSM file " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_osm_xml(buffer.str());
}

std::vector<EnuPoint> interpolate_nodes(const std::vector<EnuPoint>& vertices,
                                        double spacing_m) {
  if (vertices.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "interpolation needs at least 2 vertices");
  }
  if (spacing_m <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  }

  std::vector<double> vertex_arc(vertices.size(), 0.0);
  for (size_t i = 1; i < vertices.size(); ++i) {
    vertex_arc[i] =
        vertex_arc[i - 1] + enu_distance(vertices[i - 1], vertices[i]);
  }
  double total = vertex_arc.back();

  // Target arc lengths: multiples of the spacing plus the vertices themselves.
  std::vector<double> arcs;
  for (int i = 0; i * spacing_m <= total + 1e-12; ++i) {
    arcs.push_back(std::min(i * spacing_m, total));
  }
  arcs.insert(arcs.end(), vertex_arc.begin(), vertex_arc.end());
  std::sort(arcs.begin(), arcs.end());

  auto point_at = [&](double arc) -> EnuPoint {
    size_t seg = 1;
    while (seg + 1 < vertex_arc.size() && vertex_arc[seg] < arc) ++seg;
    double seg_len = vertex_arc[seg] - vertex_arc[seg - 1];
    double t = seg_len > 0.0 ? (arc - vertex_arc[seg - 1]) / seg_len : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return vertices[seg - 1] + t * (vertices[seg] - vertices[seg - 1]);
  };

  const double dedupe_m = 0.01;
  std::vector<EnuPoint> points;
  for (double arc : arcs) {
    EnuPoint p = point_at(arc);
    if (!points.empty() && enu_distance(points.back(), p) < dedupe_m) continue;
    points.push_back(p);
  }
  // A closed ring ends where it starts; drop the duplicated closure point.
  if (points.size() > 1 &&
      enu_distance(points.front(), points.back()) < dedupe_m) {
    points.pop_back();
  }
  return points;
}

PriorField::PriorField(std::vector<KernelCenter> kernels, double cell_m)
    : kernels_(std::move(kernels)), cell_m_(cell_m) {
  if (cell_m_ <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "grid cell size must be positive");
  }
  for (int i = 0; i < static_cast<int>(kernels_.size()); ++i) {
    const KernelCenter& k = kernels_[static_cast<size_t>(i)];
    if (k.sigma_m <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "kernel sigma must be positive");
    }
    max_sigma_ = std::max(max_sigma_, k.sigma_m);
    grid_[cell_key(k.mu.x, k.mu.y)].push_back(i);
  }
}

int64_t PriorField::cell_key(double x, double y) const {
  auto ix = static_cast<int64_t>(std::floor(x / cell_m_));
  auto iy = static_cast<int64_t>(std::floor(y / cell_m_));
  return (ix << 32) ^ (iy & 0xffffffffLL);
}

double PriorField::weight_at(const EnuPoint& x) const {
  if (kernels_.empty()) return 1.0;
  double radius = 3.0 * max_sigma_;
  auto lo_x = static_cast<int64_t>(std::floor((x.x - radius) / cell_m_));
  auto hi_x = static_cast<int64_t>(std::floor((x.x + radius) / cell_m_));
  auto lo_y = static_cast<int64_t>(std::floor((x.y - radius) / cell_m_));
  auto hi_y = static_cast<int64_t>(std::floor((x.y + radius) / cell_m_));

  double sum = 0.0;
  for (int64_t ix = lo_x; ix <= hi_x; ++ix) {
    for (int64_t iy = lo_y; iy <= hi_y; ++iy) {
      auto bucket = grid_.find((ix << 32) ^ (iy & 0xffffffffLL));
      if (bucket == grid_.end()) continue;
      for (int index : bucket->second) {
        const KernelCenter& k = kernels_[static_cast<size_t>(index)];
        double dx = x.x - k.mu.x;
        double dy = x.y - k.mu.y;
        double d2 = dx * dx + dy * dy;
        // Each kernel contributes only within its own 3-sigma radius.
        if (d2 > 9.0 * k.sigma_m * k.sigma_m) continue;
        sum += std::exp(-d2 / (2.0 * k.sigma_m * k.sigma_m));
      }
    }
  }
  double w = 1.0 - std::min(1.0, sum);
  return std::clamp(w, 0.0, 1.0);
}

PriorField build_prior_field(const OsmData& osm, const LocalFrame& frame,
                             const PriorOptions& options) {
  std::vector<KernelCenter> kernels;
  auto add_way = [&](long long way_id, double sigma, KernelClass cls) {
    std::vector<GeoPoint> geo = osm.way_points(way_id);
    std::vector<EnuPoint> enu;
    enu.reserve(geo.size());
    for (const GeoPoint& p : geo) enu.push_back(frame.to_enu(p));
    for (const EnuPoint& p :
         interpolate_nodes(enu, options.interpolation_spacing_m)) {
      kernels.push_back({p, sigma, cls});
    }
  };
  for (long long way_id : osm.road_way_ids) {
    add_way(way_id, options.sigma_road_m, KernelClass::Road);
  }
  for (long long way_id : osm.building_way_ids) {
    add_way(way_id, options.sigma_building_m, KernelClass::BuildingEdge);
  }
  return PriorField(std::move(kernels), options.grid_cell_m);
}

void write_prior_heatmap(const PriorField& field, const std::string& path,
                         double cell_m, double margin_m) {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  bool first = true;
  for (const KernelCenter& k : field.kernels()) {
    if (first) {
      min_x = max_x = k.mu.x;
      min_y = max_y = k.mu.y;
      first = false;
    } else {
      min_x = std::min(min_x, k.mu.x);
      max_x = std::max(max_x, k.mu.x);
      min_y = std::min(min_y, k.mu.y);
      max_y = std::max(max_y, k.mu.y);
    }
  }
  min_x -= margin_m;
  min_y -= margin_m;
  max_x += margin_m;
  max_y += margin_m;

  int ncols = std::max(1, static_cast<int>(std::ceil((max_x - min_x) / cell_m)));
  int nrows = std::max(1, static_cast<int>(std::ceil((max_y - min_y) / cell_m)));

  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write heatmap " + path);
  }
  out << "ncols " << ncols << "\n"
      << "nrows " << nrows << "\n"
      << "xllcorner " << min_x << "\n"
      << "yllcorner " << min_y << "\n"
      << "cellsize " << cell_m << "\n"
      << "nodata_value -9999\n";
  out.precision(6);
  for (int row = 0; row < nrows; ++row) {
    // ASCII grids run top row first.
    double y = min_y + (nrows - row - 0.5) * cell_m;
    for (int col = 0; col < ncols; ++col) {
      double x = min_x + (col + 0.5) * cell_m;
      out << field.weight_at({x, y}) << (col + 1 == ncols ? '\n' : ' ');
    }
  }
}

}  // namespace geotag
