#include "egocap/color.hpp"

#include <algorithm>
#include <cmath>

#include "egocap/errors.hpp"

namespace egocap {

Rgb hsv_to_rgb(const Hsv& c) {
  double h = c.h - std::floor(c.h);
  double hh = h * 6.0;
  int sector = std::min(5, static_cast<int>(hh));
  double f = hh - sector;
  double p = c.v * (1.0 - c.s);
  double q = c.v * (1.0 - c.s * f);
  double t = c.v * (1.0 - c.s * (1.0 - f));
  switch (sector) {
    case 0: return {c.v, t, p};
    case 1: return {q, c.v, p};
    case 2: return {p, c.v, t};
    case 3: return {p, q, c.v};
    case 4: return {t, p, c.v};
    default: return {c.v, p, q};
  }
}

Hsv rgb_to_hsv(const Rgb& c) {
  double mx = std::max({c.r, c.g, c.b});
  double mn = std::min({c.r, c.g, c.b});
  double d = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? d / mx : 0.0;
  if (d <= 0.0) {
    out.h = 0.0;
    return out;
  }
  double h;
  if (mx == c.r) {
    h = (c.g - c.b) / d;
  } else if (mx == c.g) {
    h = 2.0 + (c.b - c.r) / d;
  } else {
    h = 4.0 + (c.r - c.g) / d;
  }
  h /= 6.0;
  out.h = h - std::floor(h);
  return out;
}

Rgb rgb_from_bytes(uint8_t r, uint8_t g, uint8_t b) {
  return {r / 255.0, g / 255.0, b / 255.0};
}

void rgb_to_bytes(const Rgb& c, uint8_t& r, uint8_t& g, uint8_t& b) {
  auto q = [](double x) {
    double v = std::round(std::clamp(x, 0.0, 1.0) * 255.0);
    return static_cast<uint8_t>(v);
  };
  r = q(c.r);
  g = q(c.g);
  b = q(c.b);
}

double smooth_step(double x) {
  double y = 1.0 - x;
  double y2 = y * y;
  return 1.0 - y2 * y2 * (8.0 * x + 2.0);
}

double smooth_step_deriv(double x) {
  double y = 1.0 - x;
  return 40.0 * x * y * y * y;
}

double hue_distance(double h0, double h1) {
  double d = std::abs(h0 - h1);
  d = d - std::floor(d);
  return std::min(d, 1.0 - d);
}

double color_dissimilarity(const Hsv& m, const Hsv& i, bool scaled_hue) {
  auto in_range = [](const Hsv& c) {
    return c.h >= 0.0 && c.h <= 1.0 && c.s >= 0.0 && c.s <= 1.0 && c.v >= 0.0 && c.v <= 1.0;
  };
  if (!in_range(m) || !in_range(i)) {
    throw InputError("color_dissimilarity: channels must lie in [0,1]");
  }
  double dh = hue_distance(m.h, i.h);
  double ds = scaled_hue ? (2.0 * dh) * (2.0 * dh) : dh * dh;
  double dv = m.v - i.v;
  double dd = 2.0 * dv * dv;
  double dg = std::abs(m.v - i.v) + std::abs(m.s - i.s);

  double ws = std::sqrt(m.s);
  double wd = std::max(0.0, 0.5 - m.v);
  double wg = std::max(0.0, 0.5 - m.s);
  double z = ws + wd + wg;
  if (z <= 0.0) {
    // Fully bright saturated-less corner (s = 0 impossible here since wg would be
    // 0.5; z = 0 cannot occur, but keep a safe fallback on the gray distance).
    return smooth_step(std::clamp(dg, 0.0, 1.0));
  }
  double x = (ws * ds + wd * dd + wg * dg) / z;
  x = std::clamp(x, 0.0, 1.0);
  return smooth_step(x);
}

}  // namespace egocap
