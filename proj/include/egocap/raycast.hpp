#pragma once

#include <vector>

#include "egocap/body.hpp"
#include "egocap/color.hpp"
#include "egocap/types.hpp"

namespace egocap {

// 1D reduction of an isotropic Gaussian blob along a ray: a Gaussian in the ray
// parameter with peak amplitude, mean and spread.
struct RayProfile {
  double amplitude = 0.0;  // c_q * exp(-d_perp^2 / (2 sigma^2))
  double s = 0.0;          // (mean - origin) . dir
  double sigma = 0.0;
};

RayProfile ray_profile(const PosedBlob& blob, const Ray& ray);

struct VisibilityResult {
  Eigen::VectorXd v;         // absorbed fraction per blob
  double transmittance = 1;  // 1 - sum v
};

// Absorbed light fraction per blob under translucent-media transport, evaluated
// by fixed-node Gauss-Legendre quadrature on [0, s_far] with the inner optical
// depth in closed form. Smooth in all blob parameters.
VisibilityResult visibility(const std::vector<PosedBlob>& blobs, const Ray& ray,
                            int nodes = 64);

// Indices whose thin-limit contribution amplitude*sigma*sqrt(2*pi) is >= epsilon.
std::vector<int> cull(const std::vector<PosedBlob>& blobs, const Ray& ray, double epsilon);

// Absorption-weighted blob colors over the background; hue via weighted circular
// mean, saturation and value via plain weighted sums. cull_eps skips blobs of
// negligible thin-limit mass.
Hsv render_pixel(const std::vector<PosedBlob>& blobs, const Ray& ray, const Hsv& background,
                 int nodes = 64, double cull_eps = 0.0);

// Reusable per-ray evaluation workspace. prepare() builds ray profiles, culls by
// the thin-limit mass threshold, and tabulates the quadrature; the value and
// gradient of any weighted sum W = sum_q d_q V_q then come cheaply. The gradient
// walks every (target blob, absorber blob) pair, which is quadratic in the
// per-ray blob count by design.
class RayEvaluator {
 public:
  void prepare(const std::vector<PosedBlob>& blobs, const Ray& ray, int nodes,
               double cull_eps);

  int active_count() const { return m_; }
  const std::vector<int>& active_indices() const { return idx_; }

  // V_q by original blob index (zero if culled).
  double value_of(int original_index) const;
  // V_q by position in active_indices().
  double value_at_active(int a) const { return v_[a]; }
  double total_absorption() const;

  // W = sum_q weights[q] V_q; weights indexed by original blob index.
  double weighted_value(const double* weights) const;

  // Accumulates dW/d(mean_j) and dW/d(sigma_j) into per-original-index buffers.
  // keep, when non-null, masks gradient target blobs (dropped targets contribute
  // nothing); kept targets are scaled by keep_scale.
  void weighted_gradient(const double* weights, const uint8_t* keep, double keep_scale,
                         Vec3* grad_mean, double* grad_sigma) const;

 private:
  using RowArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  int m_ = 0;
  int nodes_ = 0;
  double s_far_ = 0.0;
  int far_active_ = -1;  // active index whose reach defines s_far
  Vec3 o_ = Vec3::Zero();
  Vec3 n_ = Vec3::Zero();
  std::vector<int> idx_;
  std::vector<Vec3> rvec_;  // perpendicular offset (mean - o) - s n per active blob
  Eigen::ArrayXd amp_, s_, sig_, dperp2_, erf0_, v_;
  RowArray u_, E_, g_;            // active blobs x nodes
  Eigen::ArrayXd xk_, wk_, sk_, ek_;  // per node
  mutable Eigen::ArrayXd c1_, c2_, c3_, dvec_, scratch_;  // gradient scratch
};

// Per-blob visibility Jacobians (dV_q / d mean_j, dV_q / d sigma_j) for testing
// the analytic gradient against finite differences on small scenes.
struct VisibilityGradients {
  Eigen::VectorXd v;
  std::vector<Eigen::Matrix3Xd> dmean;  // dmean[q].col(j)
  Eigen::MatrixXd dsigma;               // (q, j)
};

VisibilityGradients visibility_gradients(const std::vector<PosedBlob>& blobs, const Ray& ray,
                                         int nodes = 64);

}  // namespace egocap
