#pragma once

#include <string>
#include <vector>

#include "egocap/energy.hpp"

namespace egocap {

struct TrackerConfig {
  int iterations = 200;
  int width = 128;   // processing resolution; the rig is expected to match
  int height = 128;
  double pixel_fraction = 0.25;
  double drop_prob = 0.5;
  double initial_step = 1e-4;
  double backtrack = 0.5;     // step multiplier on a failed checkpoint
  double cull_eps = 1e-6;
  uint64_t seed = 0;
  int checkpoint_every = 20;  // deterministic energy cadence
  int warmup_iterations = 20; // first-frame detection-only bootstrap
  int nodes = 64;
  int threads = 1;

  void validate() const;
};

// Rolling per-sequence state: the two previous pose estimates feed both the
// temporal energy term and the constant-velocity initialization.
struct TrackerState {
  Pose p1;  // previous frame
  Pose p2;  // frame before that
  int64_t frame = 0;
};

struct EnergySample {
  int64_t frame = 0;
  int64_t iteration = 0;
  double energy = 0.0;  // deterministic full-sampling value
};

struct FrameResult {
  Pose pose;
  double energy = 0.0;
  std::vector<EnergySample> log;
};

// Gradient descent from the extrapolated initialization with fresh pixel/blob
// samples each iteration. Every checkpoint_every iterations the deterministic
// full energy is evaluated; a non-improving checkpoint shrinks the step and
// restarts from the best iterate, and the best iterate (which includes the
// initialization) is returned. Null images skip the color term, null maps skip
// detection. Throws NumericError naming the iteration on non-finite values.
FrameResult optimize_frame(const EnergyContext& ctx, const TrackerConfig& cfg,
                           const TrackerState& state, const Image* left, const Image* right,
                           const HeatMapSet* maps);

struct FrameInput {
  const Image* left = nullptr;
  const Image* right = nullptr;
  const HeatMapSet* maps = nullptr;
};

struct TrackResult {
  std::vector<Pose> poses;
  std::vector<EnergySample> log;
  std::vector<std::string> errors;  // one entry per frame that needed recovery
};

// Tracks the sequence: frame 0 starts from the rest pose (optionally after a
// detection-only warm-up), later frames from constant-velocity extrapolation.
// A frame whose optimization fails numerically keeps its initialization and
// tracking continues.
TrackResult track_sequence(const BodyModel& body, const StereoRig& rig,
                           const EnergyWeights& weights, const TrackerConfig& cfg,
                           const std::vector<FrameInput>& frames);

// Per-component 5-tap Gaussian low-pass (sigma = 1 tap); truncated windows at
// the sequence edges are renormalized.
std::vector<Pose> smooth_output(const std::vector<Pose>& poses);

void save_pose_csv(const std::vector<Pose>& poses, const std::string& path);
std::vector<Pose> load_pose_csv(const std::string& path);
void save_energy_csv(const std::vector<EnergySample>& log, const std::string& path);

}  // namespace egocap
