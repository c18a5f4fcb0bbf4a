#pragma once

#include <string>
#include <vector>

#include "egocap/color.hpp"

namespace egocap {

// HSV raster, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Hsv> pixels;

  static Image filled(int w, int h, const Hsv& c) {
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<size_t>(w) * h, c);
    return img;
  }

  Hsv& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  const Hsv& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

// 8-bit RGB PNG, converted through the hexcone transform on both directions.
Image load_png(const std::string& path);
void save_png(const Image& img, const std::string& path);

Image flip_horizontal(const Image& img);

}  // namespace egocap
