#pragma once

#include <cstdint>

namespace egocap {

// All channels normalized to [0, 1]; hue is periodic.
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

Rgb hsv_to_rgb(const Hsv& c);
Hsv rgb_to_hsv(const Rgb& c);

Rgb rgb_from_bytes(uint8_t r, uint8_t g, uint8_t b);
void rgb_to_bytes(const Rgb& c, uint8_t& r, uint8_t& g, uint8_t& b);

// Smooth step mapping mixture x in [0,1] to [-1,1]: phi(x) = 1 - (1-x)^4 (8x+2).
double smooth_step(double x);
double smooth_step_deriv(double x);

// Minimum angular hue distance in [0, 0.5].
double hue_distance(double h0, double h1);

// Dissimilarity of model color m and image color i in [-1, 1]; the weighting is
// driven by the model color. scaled_hue rescales the squared angular hue distance
// so opposing hues score 1 instead of 0.25.
double color_dissimilarity(const Hsv& m, const Hsv& i, bool scaled_hue = true);

}  // namespace egocap
