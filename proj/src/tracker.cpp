#include "egocap/tracker.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "egocap/errors.hpp"
#include "egocap/heatmap.hpp"
#include "egocap/log.hpp"

namespace egocap {

void TrackerConfig::validate() const {
  if (iterations < 1) throw InputError("tracker: iterations must be >= 1");
  if (width <= 0 || height <= 0 || width % kHeatMapScale != 0 || height % kHeatMapScale != 0) {
    throw InputError("tracker: resolution must be a positive multiple of the heat-map cell size");
  }
  if (!(pixel_fraction > 0.0 && pixel_fraction <= 1.0)) {
    throw InputError("tracker: pixel fraction must lie in (0,1]");
  }
  if (!(drop_prob >= 0.0 && drop_prob < 1.0)) {
    throw InputError("tracker: drop probability must lie in [0,1)");
  }
  if (!(initial_step > 0.0)) throw InputError("tracker: initial step must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw InputError("tracker: backtracking factor must lie in (0,1)");
  }
  if (cull_eps < 0.0) throw InputError("tracker: culling epsilon must be nonnegative");
  if (checkpoint_every < 1) throw InputError("tracker: checkpoint cadence must be >= 1");
  if (warmup_iterations < 0) throw InputError("tracker: warm-up iterations must be >= 0");
  if (nodes < 2) throw InputError("tracker: quadrature nodes must be >= 2");
}

namespace {

double deterministic_energy(const EnergyContext& ctx, const Pose& p, const Image* left,
                            const Image* right, const HeatMapSet* maps, const TrackerState& state,
                            uint64_t seed) {
  SampleSpec full;
  full.pixel_fraction = 1.0;
  full.drop_prob = 0.0;
  full.seed = seed;
  full.frame = state.frame;
  TotalEnergy te =
      total_energy(ctx, p, left, right, maps, &state.p1, &state.p2, full, false);
  return te.value;
}

}  // namespace

FrameResult optimize_frame(const EnergyContext& ctx, const TrackerConfig& cfg,
                           const TrackerState& state, const Image* left, const Image* right,
                           const HeatMapSet* maps) {
  cfg.validate();
  int ndof = ctx.body->skeleton.num_dofs();
  if (state.p1.size() != ndof || state.p2.size() != ndof) {
    throw InputError("tracker: state poses do not match the skeleton");
  }

  Pose p = state.p1 + ctx.weights.zeta * (state.p1 - state.p2);
  FrameResult out;
  double e0 = deterministic_energy(ctx, p, left, right, maps, state, cfg.seed);
  if (!std::isfinite(e0)) {
    throw NumericError("non-finite energy at initialization of frame " +
                       std::to_string(state.frame));
  }
  out.log.push_back(EnergySample{state.frame, 0, e0});
  Pose best_p = p;
  double best_e = e0;
  double step = cfg.initial_step;

  for (int it = 1; it <= cfg.iterations; ++it) {
    SampleSpec spec;
    spec.pixel_fraction = cfg.pixel_fraction;
    spec.drop_prob = cfg.drop_prob;
    spec.seed = cfg.seed;
    spec.frame = state.frame;
    spec.iteration = it;
    TotalEnergy te = total_energy(ctx, p, left, right, maps, &state.p1, &state.p2, spec, true);
    if (!std::isfinite(te.value) || !te.grad.allFinite()) {
      throw NumericError("non-finite energy or gradient at frame " +
                         std::to_string(state.frame) + ", iteration " + std::to_string(it));
    }
    p -= step * te.grad;
    if (!p.allFinite()) {
      throw NumericError("non-finite pose at frame " + std::to_string(state.frame) +
                         ", iteration " + std::to_string(it));
    }
    if (it % cfg.checkpoint_every == 0 || it == cfg.iterations) {
      double e = deterministic_energy(ctx, p, left, right, maps, state, cfg.seed);
      if (!std::isfinite(e)) {
        throw NumericError("non-finite energy at frame " + std::to_string(state.frame) +
                           ", iteration " + std::to_string(it));
      }
      out.log.push_back(EnergySample{state.frame, it, e});
      if (e < best_e) {
        best_e = e;
        best_p = p;
      } else {
        step *= cfg.backtrack;
        p = best_p;
      }
    }
  }
  out.pose = best_p;
  out.energy = best_e;
  return out;
}

TrackResult track_sequence(const BodyModel& body, const StereoRig& rig,
                           const EnergyWeights& weights, const TrackerConfig& cfg,
                           const std::vector<FrameInput>& frames) {
  cfg.validate();
  if (frames.empty()) throw InputError("tracker: empty sequence");
  if (rig.left.width != cfg.width || rig.left.height != cfg.height) {
    throw InputError("tracker: rig resolution does not match the configured resolution");
  }

  EnergyContext ctx;
  ctx.body = &body;
  ctx.rig = &rig;
  ctx.weights = weights;
  ctx.nodes = cfg.nodes;
  ctx.cull_eps = cfg.cull_eps;
  ctx.threads = cfg.threads;
  ctx.init();

  int ndof = body.skeleton.num_dofs();
  TrackResult out;
  out.poses.reserve(frames.size());

  TrackerState state;
  state.p1 = Pose::Zero(ndof);
  state.p2 = Pose::Zero(ndof);

  for (size_t t = 0; t < frames.size(); ++t) {
    const FrameInput& in = frames[t];
    for (const Image* img : {in.left, in.right}) {
      if (img && (img->width != cfg.width || img->height != cfg.height)) {
        throw InputError("tracker: frame image resolution does not match the configuration");
      }
    }
    state.frame = static_cast<int64_t>(t);

    if (t == 0 && cfg.warmup_iterations > 0 && in.maps) {
      // Detection-only bootstrap: color skipped by omitting the images.
      TrackerConfig wcfg = cfg;
      wcfg.iterations = cfg.warmup_iterations;
      try {
        FrameResult warm = optimize_frame(ctx, wcfg, state, nullptr, nullptr, in.maps);
        state.p1 = warm.pose;
        state.p2 = warm.pose;
      } catch (const NumericError& e) {
        out.errors.push_back("frame 0 warm-up: " + std::string(e.what()));
      }
    }

    Pose fallback = state.p1 + weights.zeta * (state.p1 - state.p2);
    Pose estimate;
    try {
      FrameResult res = optimize_frame(ctx, cfg, state, in.left, in.right, in.maps);
      estimate = res.pose;
      for (const EnergySample& s : res.log) out.log.push_back(s);
    } catch (const NumericError& e) {
      out.errors.push_back("frame " + std::to_string(t) + ": " + e.what());
      EGOCAP_LOG_WARN("recovering after numeric failure: %s", e.what());
      estimate = fallback;
    }
    out.poses.push_back(estimate);
    state.p2 = state.p1;
    state.p1 = estimate;
  }
  return out;
}

std::vector<Pose> smooth_output(const std::vector<Pose>& poses) {
  if (poses.empty()) throw InputError("smooth_output: empty sequence");
  const int radius = 2;
  double taps[2 * radius + 1];
  for (int k = -radius; k <= radius; ++k) taps[k + radius] = std::exp(-0.5 * k * k);
  int n = static_cast<int>(poses.size());
  std::vector<Pose> out(n);
  for (int t = 0; t < n; ++t) {
    Pose acc = Pose::Zero(poses[t].size());
    double wsum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      int s = t + k;
      if (s < 0 || s >= n) continue;
      acc += taps[k + radius] * poses[s];
      wsum += taps[k + radius];
    }
    out[t] = acc / wsum;
  }
  return out;
}

void save_pose_csv(const std::vector<Pose>& poses, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << "frame";
  if (!poses.empty()) {
    for (int d = 0; d < poses[0].size(); ++d) f << ",p" << d;
  }
  f << "\n";
  char buf[32];
  for (size_t t = 0; t < poses.size(); ++t) {
    f << t;
    for (int d = 0; d < poses[t].size(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.9g", poses[t][d]);
      f << "," << buf;
    }
    f << "\n";
  }
}

std::vector<Pose> load_pose_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::vector<Pose> poses;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line.rfind("frame", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError("bad pose CSV cell in " + path + ": " + cell);
      }
    }
    if (row.size() < 2) throw InputError("bad pose CSV row in " + path);
    Pose p(row.size() - 1);
    for (size_t i = 1; i < row.size(); ++i) p[static_cast<int>(i) - 1] = row[i];
    poses.push_back(p);
  }
  if (poses.empty()) throw InputError("empty pose CSV " + path);
  return poses;
}

void save_energy_csv(const std::vector<EnergySample>& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << "frame,iteration,energy\n";
  char buf[32];
  for (const EnergySample& s : log) {
    std::snprintf(buf, sizeof(buf), "%.9g", s.energy);
    f << s.frame << "," << s.iteration << "," << buf << "\n";
  }
}

}  // namespace egocap
