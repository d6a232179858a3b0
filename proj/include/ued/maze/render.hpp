#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ued/maze/level.hpp"

namespace ued::maze {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const auto i = static_cast<std::size_t>((y * width + x) * 3);
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

inline constexpr std::array<std::uint8_t, 3> kWallColour{128, 128, 128};
inline constexpr std::array<std::uint8_t, 3> kFloorColour{0, 0, 0};
inline constexpr std::array<std::uint8_t, 3> kGoalColour{0, 255, 0};
inline constexpr std::array<std::uint8_t, 3> kAgentColour{255, 0, 0};

namespace detail {

inline double edge(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

// Triangle pointing "up" in unit-cell coordinates, rotated to face d.
inline bool in_agent_triangle(Direction d, double u, double v) {
  // rotate the sample point back into the "up" frame about the cell centre
  double cu = u - 0.5, cv = v - 0.5;
  for (int i = 0; i < static_cast<int>(d); ++i) {
    const double t = cu;
    cu = cv;
    cv = -t;
  }
  const double px = cu + 0.5, py = cv + 0.5;
  constexpr double ax = 0.5, ay = 0.12, bx = 0.88, by = 0.88, cx = 0.12, cy = 0.88;
  const double e0 = edge(ax, ay, bx, by, px, py);
  const double e1 = edge(bx, by, cx, cy, px, py);
  const double e2 = edge(cx, cy, ax, ay, px, py);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

}  // namespace detail

/// Flat-shaded raster: walls grey, floor black, goal green, agent a red
/// triangle pointing along its facing direction.
inline Image render_level(const MazeLevel& level, int cell_px) {
  if (cell_px < 1) throw std::invalid_argument("cell_px must be positive");
  validate(level);
  Image img{level.width * cell_px, level.height * cell_px, {}};
  img.rgb.assign(static_cast<std::size_t>(img.width * img.height * 3), 0);
  auto put = [&](int x, int y, const std::array<std::uint8_t, 3>& c) {
    const auto i = static_cast<std::size_t>((y * img.width + x) * 3);
    img.rgb[i] = c[0];
    img.rgb[i + 1] = c[1];
    img.rgb[i + 2] = c[2];
  };
  for (int cy = 0; cy < level.height; ++cy) {
    for (int cx = 0; cx < level.width; ++cx) {
      const Cell c{cx, cy};
      const bool is_agent = c == level.agent_pos;
      const auto& base = level.wall(c) ? kWallColour : (c == level.goal_pos ? kGoalColour : kFloorColour);
      for (int py = 0; py < cell_px; ++py) {
        for (int px = 0; px < cell_px; ++px) {
          const double u = (px + 0.5) / cell_px;
          const double v = (py + 0.5) / cell_px;
          const bool agent_px = is_agent && detail::in_agent_triangle(level.agent_dir, u, v);
          put(cx * cell_px + px, cy * cell_px + py, agent_px ? kAgentColour : base);
        }
      }
    }
  }
  return img;
}

/// Binary PPM (P6).
inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

inline void write_ppm(std::ostream& os, const Image& img) {
  const auto bytes = encode_ppm(img);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ued::maze
