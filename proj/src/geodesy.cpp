#include "geotag/geodesy.hpp"

#include <algorithm>
#include <sstream>

namespace geotag {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DistanceExceeded: return "DistanceExceeded";
    case ErrorCode::OutOfView: return "OutOfView";
    case ErrorCode::UnknownCamera: return "UnknownCamera";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::PureRotation: return "PureRotation";
    case ErrorCode::AmbiguousCheirality: return "AmbiguousCheirality";
    case ErrorCode::ParallelRays: return "ParallelRays";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::DanglingNodeRef: return "DanglingNodeRef";
    case ErrorCode::OpenBuildingRing: return "OpenBuildingRing";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

double normalize_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod can round up to 360 for tiny negatives
  return r;
}

double wrap_signed_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r > 180.0) r -= 360.0;
  if (r <= -180.0) r += 360.0;
  return r;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg) {
  if (!(lat_deg >= -90.0 && lat_deg <= 90.0)) {
    std::ostringstream msg;
    msg << "latitude " << lat_deg << " outside [-90, 90]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  lat = lat_deg;
  lon = wrap_signed_deg(lon_deg);
  if (lon == 180.0) lon = -180.0;  // keep [-180, 180)
}

EnuPoint LocalFrame::to_enu(const GeoPoint& p) const {
  double d = haversine_m(origin_, p);
  if (d > max_radius_m_) {
    std::ostringstream msg;
    msg << "point is " << d << " m from frame origin (limit " << max_radius_m_
        << " m)";
    throw Error(ErrorCode::DistanceExceeded, msg.str());
  }
  double dlat = p.lat - origin_.lat;
  double dlon = wrap_signed_deg(p.lon - origin_.lon);
  double meters_per_deg = kEarthRadiusM * kPi / 180.0;
  return {dlon * std::cos(deg2rad(origin_.lat)) * meters_per_deg,
          dlat * meters_per_deg};
}

GeoPoint LocalFrame::from_enu(const EnuPoint& e) const {
  double meters_per_deg = kEarthRadiusM * kPi / 180.0;
  double lat = origin_.lat + e.y / meters_per_deg;
  double lon =
      origin_.lon + e.x / (meters_per_deg * std::cos(deg2rad(origin_.lat)));
  return {lat, lon};
}

double haversine_m(const GeoPoint& a, const GeoPoint& b, double radius_m) {
  double phi1 = deg2rad(a.lat);
  double phi2 = deg2rad(b.lat);
  double dphi = phi2 - phi1;
  double dlam = deg2rad(b.lon - a.lon);
  double s = std::sin(dphi / 2.0);
  double t = std::sin(dlam / 2.0);
  double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * radius_m * std::asin(std::min(1.0, std::sqrt(h)));
}

EnuPoint bearing_to_direction(Bearing b) {
  double rad = deg2rad(b.deg);
  return {std::sin(rad), std::cos(rad)};
}

Bearing direction_to_bearing(const EnuPoint& from, const EnuPoint& to) {
  return Bearing(rad2deg(std::atan2(to.x - from.x, to.y - from.y)));
}

}  // namespace geotag
