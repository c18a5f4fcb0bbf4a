#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "egocap/body.hpp"
#include "egocap/fisheye.hpp"
#include "egocap/heatmap.hpp"
#include "egocap/image.hpp"
#include "egocap/raycast.hpp"

namespace egocap {

struct EnergyWeights {
  double lambda_pose = 1e-4;
  double lambda_limit = 0.1;
  double lambda_smooth = 0.1;
  double lambda_detection = 1.0 / 3.0;
  double lambda_color = 1.0;
  double zeta = 0.25;  // temporal extrapolation damping
  bool scaled_hue = true;
  // When set, a detection blob's visibility ignores absorption by the body
  // blobs (the detector sees occluded parts). Off by default: the visibility
  // formula is applied literally within the full density field.
  bool detection_ignore_occlusion = false;
};

inline double pseudo_huber(double x) { return std::sqrt(1.0 + x * x) - 1.0; }
inline double pseudo_huber_deriv(double x) { return x / std::sqrt(1.0 + x * x); }

// Pixel sampling and gradient blob dropping for one stochastic evaluation.
// pixel_fraction 1 and drop_prob 0 reproduce the deterministic full objective.
struct SampleSpec {
  double pixel_fraction = 1.0;
  double drop_prob = 0.0;
  uint64_t seed = 0;
  int64_t frame = 0;
  int64_t iteration = 0;
};

// Immutable per-run evaluation context: model, rig, weights, quadrature and
// culling settings, plus cached pixel rays at the rig resolution.
struct EnergyContext {
  const BodyModel* body = nullptr;
  const StereoRig* rig = nullptr;
  EnergyWeights weights;
  int nodes = 64;
  double cull_eps = 1e-6;
  int threads = 1;

  struct CameraRays {
    int width = 0;
    int height = 0;
    std::vector<Ray> rays;          // per pixel, root frame
    std::vector<uint8_t> in_circle;  // 0 for pixels outside the image circle
  };
  CameraRays cam_rays[2];

  void init();  // builds the ray caches; call after setting body/rig
  const CameraRays& rays(Side s) const { return cam_rays[s == Side::kLeft ? 0 : 1]; }
};

struct EnergyBreakdown {
  double color = 0.0;
  double detection = 0.0;
  double pose = 0.0;
  double smooth = 0.0;
  double total() const { return color + detection + pose + smooth; }
};

double e_pose(const Skeleton& skel, const Pose& p, const EnergyWeights& w,
              Eigen::VectorXd* grad);

double e_smooth(const Pose& p, const Pose& prev1, const Pose& prev2, const EnergyWeights& w,
                Eigen::VectorXd* grad);

struct ColorDrop {
  double prob = 0.0;
  double scale = 1.0;  // 1/(1-prob)
  uint64_t seed = 0;
  int64_t frame = 0;
  int64_t iteration = 0;
};

// Single-camera visibility-weighted color dissimilarity sum. subset, when given,
// lists pixel indices sampled with replacement; the result is the unbiased
// (|all|/|subset|)-scaled estimator. grad_mean, when given, receives the
// gradient with respect to each body blob's world mean (accumulated). drop,
// when given alongside grad_mean, removes blobs from each pixel's gradient at
// random and rescales the kept ones.
double e_color(const EnergyContext& ctx, const std::vector<PosedBlob>& posed,
               const Image& image, Side side, const std::vector<int>* subset,
               std::vector<Vec3>* grad_mean, const ColorDrop* drop);

// Detection alignment term over both cameras, weights included (negative when
// aligned). Gradients accumulate into per-body-blob and per-label buffers.
double e_detection(const EnergyContext& ctx, const std::vector<PosedBlob>& posed,
                   const FkResult& fk, const HeatMapSet& maps,
                   std::vector<Vec3>* grad_mean_body, std::vector<Vec3>* grad_mean_det);

struct TotalEnergy {
  EnergyBreakdown terms;
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Full objective. left/right images may be null (color term skipped), maps may
// be null (detection skipped), prev poses may be null (smoothness skipped).
TotalEnergy total_energy(const EnergyContext& ctx, const Pose& p, const Image* left,
                         const Image* right, const HeatMapSet* maps, const Pose* prev1,
                         const Pose* prev2, const SampleSpec& sampling, bool with_grad);

// Pixel subset drawn with replacement for one camera and iteration.
std::vector<int> sample_pixels(const SampleSpec& spec, int cam_index, int width, int height);

}  // namespace egocap
