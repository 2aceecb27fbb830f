#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geotag/geodesy.hpp"

namespace geotag {

/// Pixel position inside a view: origin top-left, u rightward, v downward.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// One distortion-free pinhole view cut from an equirectangular panorama.
/// yaw_offset_deg is the view center's azimuth relative to the camera heading.
struct RectilinearView {
  std::string panorama_id;
  int view_index = 0;
  double yaw_offset_deg = 0.0;
  double hfov_deg = 90.0;
  int width = 640;
  int height = 640;

  double focal_px() const {
    return (width / 2.0) / std::tan(deg2rad(hfov_deg / 2.0));
  }
};

/// Geometry shared by all views of a dataset.
struct ViewLayout {
  int view_count = 8;
  double hfov_deg = 90.0;
  int width = 640;
  int height = 640;

  double yaw_step_deg() const { return 360.0 / view_count; }
};

/// Cut a panorama into view specifications: view_count views with yaw offsets
/// spaced 360/view_count degrees apart. Pixel content is not resampled here.
std::vector<RectilinearView> split_panorama(const std::string& panorama_id,
                                            const ViewLayout& layout = {});

/// World bearing of the viewing ray through pixel p:
/// heading + yaw_offset + atan((u - width/2) / focal). Throws OutOfView for
/// pixels outside the view bounds.
Bearing pixel_to_bearing(const RectilinearView& view, Bearing camera_heading,
                         const PixelCoord& p);

/// Inverse mapping: all (view_index, pixel) pairs whose viewing ray has the
/// given bearing. Pixel u lies in [0, width); overlap yields up to two
/// candidates. v is set to the center row (vertical geometry is not modeled).
std::vector<std::pair<int, PixelCoord>> bearing_to_view_pixel(
    const std::vector<RectilinearView>& views, Bearing camera_heading,
    Bearing b);

/// Bilinear resampling of one rectilinear view from an equirectangular
/// panorama, single channel. Geometry utility only; untested against any
/// reference rendering.
std::vector<float> render_view(const std::vector<float>& pano_pixels,
                               int pano_width, int pano_height,
                               const RectilinearView& view);

}  // namespace geotag
