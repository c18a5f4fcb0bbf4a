#pragma once

#include <array>
#include <string>
#include <vector>

#include "egocap/types.hpp"

namespace egocap {

// Detection label order is fixed by the heat-map file format.
inline constexpr int kNumLabels = 18;

inline const std::array<std::string, kNumLabels>& label_names() {
  static const std::array<std::string, kNumLabels> names = {
      "head",    "neck",    "shoulder_l", "shoulder_r", "elbow_l", "elbow_r",
      "wrist_l", "wrist_r", "hand_l",     "hand_r",     "hip_l",   "hip_r",
      "knee_l",  "knee_r",  "ankle_l",    "ankle_r",    "foot_l",  "foot_r"};
  return names;
}

int label_index(const std::string& name);

// Left/right counterpart (head and neck map to themselves).
int mirror_label(int label);

// Coarse heat-map cell <-> full-resolution pixel coordinates. Cells are 8x
// coarser; a cell's representative pixel is its center.
inline constexpr int kHeatMapScale = 8;
inline double cell_to_pixel(int g) { return (g + 0.5) * kHeatMapScale; }
inline double pixel_to_cell(double px) { return px / kHeatMapScale - 0.5; }

// One camera's stack of per-label confidence grids.
struct HeatMaps {
  int grid_w = 0;
  int grid_h = 0;
  std::vector<float> data;  // kNumLabels * grid_h * grid_w, row-major per label

  struct Peak {
    Vec2 pixel = Vec2::Zero();  // full-resolution coordinates of the argmax cell
    float confidence = 0.0f;
    bool valid = false;  // false when the label's map is all zero
  };
  std::array<Peak, kNumLabels> peaks;

  float& at(int label, int gx, int gy) { return data[(label * grid_h + gy) * grid_w + gx]; }
  float at(int label, int gx, int gy) const { return data[(label * grid_h + gy) * grid_w + gx]; }

  static HeatMaps zeros(int grid_w, int grid_h);

  // Recomputes the per-label argmax cache. First cell in row-major order wins
  // ties; a label with an all-zero grid is marked invalid.
  void refresh_peaks();
};

struct HeatMapSet {
  HeatMaps left;
  HeatMaps right;
  const HeatMaps& cam(int idx) const { return idx == 0 ? left : right; }
};

HeatMaps load_heatmaps(const std::string& path);
void save_heatmaps(const HeatMaps& maps, const std::string& path);

}  // namespace egocap
