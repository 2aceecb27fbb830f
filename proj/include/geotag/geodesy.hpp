#pragma once

#include <cmath>

#include "geotag/error.hpp"

namespace geotag {

// Spherical earth model, shared by the Haversine metric and the tangent plane.
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Normalize an angle in degrees to [0, 360).
double normalize_deg(double deg);

/// Wrap an angle difference in degrees to (-180, 180].
double wrap_signed_deg(double deg);

/// Compass bearing: degrees clockwise from true north, kept in [0, 360).
struct Bearing {
  double deg = 0.0;

  Bearing() = default;
  explicit Bearing(double degrees) : deg(normalize_deg(degrees)) {}
};

/// WGS84 coordinate. Latitude must lie in [-90, 90]; longitude is normalized
/// to [-180, 180) on construction.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg);
};

/// Position in meters east/north of a LocalFrame origin.
struct EnuPoint {
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north

  EnuPoint() = default;
  EnuPoint(double x_m, double y_m) : x(x_m), y(y_m) {}

  double norm() const { return std::hypot(x, y); }
};

inline EnuPoint operator+(const EnuPoint& a, const EnuPoint& b) {
  return {a.x + b.x, a.y + b.y};
}
inline EnuPoint operator-(const EnuPoint& a, const EnuPoint& b) {
  return {a.x - b.x, a.y - b.y};
}
inline EnuPoint operator*(double s, const EnuPoint& p) {
  return {s * p.x, s * p.y};
}
inline double enu_distance(const EnuPoint& a, const EnuPoint& b) {
  return (a - b).norm();
}

/// Equidistant tangent-plane projection about a fixed origin. Valid at city
/// scale; to_enu rejects points beyond max_radius_m.
class LocalFrame {
 public:
  LocalFrame() = default;
  explicit LocalFrame(const GeoPoint& origin, double max_radius_m = 10000.0)
      : origin_(origin), max_radius_m_(max_radius_m) {}

  const GeoPoint& origin() const { return origin_; }
  double max_radius_m() const { return max_radius_m_; }

  /// x = dlon * cos(lat0) * R * pi/180, y = dlat * R * pi/180.
  /// Throws DistanceExceeded beyond max_radius_m.
  EnuPoint to_enu(const GeoPoint& p) const;

  /// Exact inverse of to_enu's formulas (no range restriction).
  GeoPoint from_enu(const EnuPoint& e) const;

 private:
  GeoPoint origin_;
  double max_radius_m_ = 10000.0;
};

/// Great-circle distance in meters on the spherical earth model.
double haversine_m(const GeoPoint& a, const GeoPoint& b,
                   double radius_m = kEarthRadiusM);

/// Unit vector (x east, y north) pointing along a compass bearing.
EnuPoint bearing_to_direction(Bearing b);

/// Bearing of the direction from ENU point `from` toward `to`.
Bearing direction_to_bearing(const EnuPoint& from, const EnuPoint& to);

}  // namespace geotag
