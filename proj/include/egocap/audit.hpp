#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egocap/body.hpp"
#include "egocap/synth.hpp"
#include "egocap/tracker.hpp"

namespace egocap {

struct GradCheckOptions {
  int poses = 50;
  int width = 64;
  int height = 64;
  double h = 1e-5;
  double tol = 1e-4;
  double cull_eps = 1e-12;  // small enough that cull transitions stay far below
                            // finite-difference resolution
  uint64_t seed = 1;
  int nodes = 64;
  int threads = 1;
  int camera_points = 100;
};

struct GradCheckReport {
  double max_rel_error = 0.0;      // energy gradient vs central differences
  double camera_max_error = 0.0;   // worst ray-direction null-space violation
  double reprojection_max = 0.0;   // unproject -> project round trip, pixels
  int poses_checked = 0;
  bool pass = false;
};

// Audits the analytic energy gradient against central finite differences on a
// synthetic stereo frame, and the camera Jacobians by finite differences
// (moving a point along its own ray must not move its pixel).
GradCheckReport run_gradcheck(const GradCheckOptions& opt);

struct BenchOptions {
  int width = 32;
  int height = 32;
  std::vector<int> blob_counts{23, 45, 91, 182};
  int reps = 3;
  uint64_t seed = 3;
  int nodes = 64;
  int threads = 1;
  double cull_eps = 1e-6;
  // Speedup probe settings.
  int speed_width = 64;
  int speed_height = 64;
  int iterations = 200;
};

struct BenchScalingRow {
  int blobs = 0;
  double seconds_unculled = 0.0;
  double seconds_culled = 0.0;
};

struct BenchReport {
  std::vector<BenchScalingRow> scaling;
  double exponent_unculled = 0.0;
  double exponent_culled = 0.0;
  double cull_energy_delta_per_pixel = 0.0;  // |E(eps) - E(0)| / pixels
  double full_energy = 0.0;      // deterministic energy after full-sampling run
  double stoch_energy = 0.0;     // after default stochastic run
  double full_seconds = 0.0;
  double stoch_seconds = 0.0;
};

// Wall-clock scaling of the deterministic gradient against bodies resampled to
// different blob counts, plus the stochastic-vs-full optimizer comparison.
BenchReport run_bench(const BenchOptions& opt);

// Body resampled to `target` blobs along its blob chains; spatial detail
// scales inversely with the count so denser bodies are finer, not thicker.
BodyModel resample_body(const BodyModel& base, int target);

struct SequenceEval {
  PckResult pck_both;           // both cameras pooled, threshold 20 px
  double auc20 = 0.0;           // thresholds 0..20 px
  double mean_error_3d = 0.0;   // meters
};

SequenceEval evaluate_sequence(const BodyModel& body, const StereoRig& rig,
                               const std::vector<Pose>& tracked,
                               const std::vector<TruthRecord>& truth);

// Chart helper shared by the plot subcommand: one SVG line chart from columns.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<std::vector<double>>& ys,
                     const std::vector<std::string>& series_names);

}  // namespace egocap
