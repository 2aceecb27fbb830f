#include "geotag/panorama.hpp"

#include <sstream>

namespace geotag {

std::vector<RectilinearView> split_panorama(const std::string& panorama_id,
                                            const ViewLayout& layout) {
  if (layout.view_count <= 0 || layout.width <= 0 || layout.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "view layout must be positive");
  }
  std::vector<RectilinearView> views;
  views.reserve(layout.view_count);
  for (int k = 0; k < layout.view_count; ++k) {
    views.push_back({panorama_id, k, k * layout.yaw_step_deg(),
                     layout.hfov_deg, layout.width, layout.height});
  }
  return views;
}

Bearing pixel_to_bearing(const RectilinearView& view, Bearing camera_heading,
                         const PixelCoord& p) {
  if (!(p.u >= 0.0 && p.u < view.width && p.v >= 0.0 && p.v < view.height)) {
    std::ostringstream msg;
    msg << "pixel (" << p.u << ", " << p.v << ") outside " << view.width << "x"
        << view.height << " view";
    throw Error(ErrorCode::OutOfView, msg.str());
  }
  double offset_rad = std::atan((p.u - view.width / 2.0) / view.focal_px());
  return Bearing(camera_heading.deg + view.yaw_offset_deg +
                 rad2deg(offset_rad));
}

std::vector<std::pair<int, PixelCoord>> bearing_to_view_pixel(
    const std::vector<RectilinearView>& views, Bearing camera_heading,
    Bearing b) {
  std::vector<std::pair<int, PixelCoord>> candidates;
  for (const RectilinearView& view : views) {
    double offset_deg =
        wrap_signed_deg(b.deg - camera_heading.deg - view.yaw_offset_deg);
    if (std::abs(offset_deg) >= 90.0) continue;  // behind the image plane
    double u = view.width / 2.0 +
               view.focal_px() * std::tan(deg2rad(offset_deg));
    if (u >= 0.0 && u < view.width) {
      candidates.emplace_back(view.view_index,
                              PixelCoord{u, view.height / 2.0});
    }
  }
  return candidates;
}

std::vector<float> render_view(const std::vector<float>& pano_pixels,
                               int pano_width, int pano_height,
                               const RectilinearView& view) {
  if (pano_pixels.size() !=
      static_cast<size_t>(pano_width) * static_cast<size_t>(pano_height)) {
    throw Error(ErrorCode::InvalidArgument, "panorama buffer size mismatch");
  }
  std::vector<float> out(static_cast<size_t>(view.width) * view.height, 0.0f);
  double f = view.focal_px();
  double vfov_half = std::atan((view.height / 2.0) / f);
  (void)vfov_half;
  for (int vy = 0; vy < view.height; ++vy) {
    for (int vx = 0; vx < view.width; ++vx) {
      // Ray through the pixel in view coordinates (z forward, y down).
      double x = (vx + 0.5) - view.width / 2.0;
      double y = (vy + 0.5) - view.height / 2.0;
      double az = deg2rad(view.yaw_offset_deg) + std::atan2(x, f);
      double el = -std::atan2(y, std::hypot(x, f));
      // Equirectangular lookup: azimuth maps linearly to pano x.
      double px = normalize_deg(rad2deg(az)) / 360.0 * pano_width - 0.5;
      double py = (0.5 - el / kPi) * pano_height - 0.5;
      int x0 = static_cast<int>(std::floor(px));
      int y0 = static_cast<int>(std::floor(py));
      double ax = px - x0;
      double ay = py - y0;
      auto sample = [&](int sx, int sy) -> float {
        sx = ((sx % pano_width) + pano_width) % pano_width;
        sy = std::min(std::max(sy, 0), pano_height - 1);
        return pano_pixels[static_cast<size_t>(sy) * pano_width + sx];
      };
      double value = (1 - ax) * (1 - ay) * sample(x0, y0) +
                     ax * (1 - ay) * sample(x0 + 1, y0) +
                     (1 - ax) * ay * sample(x0, y0 + 1) +
                     ax * ay * sample(x0 + 1, y0 + 1);
      out[static_cast<size_t>(vy) * view.width + vx] =
          static_cast<float>(value);
    }
  }
  return out;
}

}  // namespace geotag
