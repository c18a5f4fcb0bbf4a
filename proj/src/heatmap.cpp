#include "egocap/heatmap.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "egocap/errors.hpp"

namespace egocap {

int label_index(const std::string& name) {
  const auto& names = label_names();
  for (int i = 0; i < kNumLabels; ++i) {
    if (names[i] == name) return i;
  }
  throw InputError("unknown detection label: " + name);
}

int mirror_label(int label) {
  if (label < 2) return label;  // head, neck
  return (label % 2 == 0) ? label + 1 : label - 1;
}

HeatMaps HeatMaps::zeros(int grid_w, int grid_h) {
  HeatMaps m;
  m.grid_w = grid_w;
  m.grid_h = grid_h;
  m.data.assign(static_cast<size_t>(kNumLabels) * grid_h * grid_w, 0.0f);
  m.refresh_peaks();
  return m;
}

void HeatMaps::refresh_peaks() {
  for (int l = 0; l < kNumLabels; ++l) {
    Peak p;
    float best = 0.0f;
    int best_x = 0, best_y = 0;
    for (int gy = 0; gy < grid_h; ++gy) {
      for (int gx = 0; gx < grid_w; ++gx) {
        float v = at(l, gx, gy);
        if (v > best) {
          best = v;
          best_x = gx;
          best_y = gy;
        }
      }
    }
    if (best > 0.0f) {
      p.valid = true;
      p.confidence = best;
      p.pixel = Vec2(cell_to_pixel(best_x), cell_to_pixel(best_y));
    }
    peaks[l] = p;
  }
}

namespace {

constexpr char kMagic[4] = {'E', 'G', 'H', 'M'};

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

HeatMaps load_heatmaps(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw InputError(path + ": not an EGHM file");
  }
  HeatMaps m;
  m.grid_w = static_cast<int>(read_u32(in));
  m.grid_h = static_cast<int>(read_u32(in));
  uint32_t labels = read_u32(in);
  if (!in || labels != kNumLabels) {
    throw InputError(path + ": expected " + std::to_string(kNumLabels) + " labels");
  }
  if (m.grid_w <= 0 || m.grid_h <= 0 || m.grid_w > 1 << 16 || m.grid_h > 1 << 16) {
    throw InputError(path + ": bad grid size");
  }
  size_t count = static_cast<size_t>(kNumLabels) * m.grid_h * m.grid_w;
  m.data.resize(count);
  in.read(reinterpret_cast<char*>(m.data.data()), count * sizeof(float));
  if (!in) throw InputError(path + ": truncated data");
  for (float v : m.data) {
    if (!(v >= 0.0f && v <= 1.0f)) throw InputError(path + ": confidence outside [0,1]");
  }
  m.refresh_peaks();
  return m;
}

void save_heatmaps(const HeatMaps& maps, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(kMagic, 4);
  write_u32(out, static_cast<uint32_t>(maps.grid_w));
  write_u32(out, static_cast<uint32_t>(maps.grid_h));
  write_u32(out, kNumLabels);
  out.write(reinterpret_cast<const char*>(maps.data.data()),
            static_cast<std::streamsize>(maps.data.size() * sizeof(float)));
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace egocap
