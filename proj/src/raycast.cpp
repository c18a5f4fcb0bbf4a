#include "egocap/raycast.hpp"

#include <algorithm>
#include <cmath>

#include "egocap/errors.hpp"
#include "egocap/quadrature.hpp"

namespace egocap {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kReachSigmas = 6.0;

// erf saturates to +-1 well inside double precision beyond |x| = 6.
inline double erf_sat(double x) {
  if (x >= 6.0) return 1.0;
  if (x <= -6.0) return -1.0;
  return std::erf(x);
}

}  // namespace

RayProfile ray_profile(const PosedBlob& blob, const Ray& ray) {
  Vec3 w = blob.mean - ray.origin;
  double s = w.dot(ray.dir);
  double dperp2 = std::max(0.0, w.squaredNorm() - s * s);
  RayProfile p;
  p.s = s;
  p.sigma = blob.sigma;
  p.amplitude = blob.density * std::exp(-dperp2 / (2.0 * blob.sigma * blob.sigma));
  return p;
}

std::vector<int> cull(const std::vector<PosedBlob>& blobs, const Ray& ray, double epsilon) {
  if (epsilon < 0.0) throw InputError("cull: epsilon must be nonnegative");
  std::vector<int> kept;
  kept.reserve(blobs.size());
  for (int i = 0; i < static_cast<int>(blobs.size()); ++i) {
    RayProfile p = ray_profile(blobs[i], ray);
    if (p.amplitude * p.sigma * kSqrt2Pi >= epsilon) kept.push_back(i);
  }
  return kept;
}

void RayEvaluator::prepare(const std::vector<PosedBlob>& blobs, const Ray& ray, int nodes,
                           double cull_eps) {
  o_ = ray.origin;
  n_ = ray.dir;
  nodes_ = nodes;
  idx_.clear();
  rvec_.clear();
  int total = static_cast<int>(blobs.size());
  if (static_cast<int>(amp_.size()) < total) {
    amp_.resize(total);
    s_.resize(total);
    sig_.resize(total);
    dperp2_.resize(total);
    erf0_.resize(total);
  }
  m_ = 0;
  s_far_ = 0.0;
  far_active_ = -1;
  for (int i = 0; i < total; ++i) {
    const PosedBlob& b = blobs[i];
    Vec3 w = b.mean - o_;
    double s = w.dot(n_);
    double dperp2 = std::max(0.0, w.squaredNorm() - s * s);
    double amp = b.density * std::exp(-dperp2 / (2.0 * b.sigma * b.sigma));
    if (amp * b.sigma * kSqrt2Pi < cull_eps) continue;
    amp_[m_] = amp;
    s_[m_] = s;
    sig_[m_] = b.sigma;
    dperp2_[m_] = dperp2;
    double reach = s + kReachSigmas * b.sigma;
    if (far_active_ < 0 || reach > s_far_) {
      s_far_ = reach;
      far_active_ = m_;
    }
    idx_.push_back(i);
    rvec_.push_back(w - s * n_);
    ++m_;
  }
  if (m_ == 0 || s_far_ <= 0.0) {
    s_far_ = 0.0;
    v_ = Eigen::ArrayXd::Zero(m_);
    return;
  }

  const Quadrature& q = gauss_legendre(nodes_);
  if (static_cast<int>(xk_.size()) != nodes_) {
    xk_.resize(nodes_);
    wk_.resize(nodes_);
    for (int k = 0; k < nodes_; ++k) {
      xk_[k] = q.x[k];
      wk_[k] = q.w[k];
    }
    sk_.resize(nodes_);
    ek_.resize(nodes_);
  }
  sk_ = s_far_ * xk_;
  if (u_.rows() < m_ || u_.cols() != nodes_) {
    u_.resize(std::max<Eigen::Index>(m_, u_.rows()), nodes_);
    E_.resize(u_.rows(), nodes_);
    g_.resize(u_.rows(), nodes_);
  }
  for (int a = 0; a < m_; ++a) {
    double s = s_[a], sig = sig_[a], amp = amp_[a];
    double inv2s2 = 1.0 / (2.0 * sig * sig);
    u_.row(a).head(nodes_) = (-(sk_ - s).square() * inv2s2).exp();
    g_.row(a).head(nodes_) = amp * u_.row(a).head(nodes_);
    double erf0 = erf_sat(s / (M_SQRT2 * sig));
    erf0_[a] = erf0;
    double pref = sig * std::sqrt(M_PI / 2.0);
    double inv = 1.0 / (M_SQRT2 * sig);
    for (int k = 0; k < nodes_; ++k) {
      E_(a, k) = pref * (erf_sat((sk_[k] - s) * inv) + erf0);
    }
  }
  // Optical depth at the nodes and the shared quadrature factor.
  Eigen::VectorXd tau = E_.topRows(m_).matrix().transpose() * amp_.head(m_).matrix();
  ek_ = s_far_ * wk_ * (-tau.array()).exp();
  v_.resize(m_);
  v_ = (g_.topRows(m_).matrix() * ek_.matrix()).array();
}

double RayEvaluator::value_of(int original_index) const {
  for (int a = 0; a < m_; ++a) {
    if (idx_[a] == original_index) return v_[a];
  }
  return 0.0;
}

double RayEvaluator::total_absorption() const {
  return m_ == 0 ? 0.0 : v_.head(m_).sum();
}

double RayEvaluator::weighted_value(const double* weights) const {
  double w = 0.0;
  for (int a = 0; a < m_; ++a) w += weights[idx_[a]] * v_[a];
  return w;
}

void RayEvaluator::weighted_gradient(const double* weights, const uint8_t* keep,
                                     double keep_scale, Vec3* grad_mean,
                                     double* grad_sigma) const {
  if (m_ == 0 || s_far_ <= 0.0) return;
  if (dvec_.size() < m_) dvec_.resize(std::max<Eigen::Index>(m_, dvec_.size()));
  for (int a = 0; a < m_; ++a) dvec_[a] = weights[idx_[a]];
  double wv = (dvec_.head(m_) * v_.head(m_).array()).sum();
  if (c1_.size() != nodes_) {
    c1_.resize(nodes_);
    c2_.resize(nodes_);
    c3_.resize(nodes_);
  }
  if (scratch_.size() < m_) scratch_.resize(std::max<Eigen::Index>(m_, scratch_.size()));

  auto kept = [&](int a) { return keep == nullptr || keep[idx_[a]] != 0; };

  for (int j = 0; j < m_; ++j) {
    if (!kept(j)) continue;
    double sj = s_[j], sigj = sig_[j], ampj = amp_[j], dj = dvec_[j];
    c1_ = ek_ * E_.row(j).head(nodes_).transpose();
    c2_ = ek_ * u_.row(j).head(nodes_).transpose();
    c3_ = c2_ * (sk_ - sj);
    // Per-absorber dot products: quadratic in the active blob count.
    scratch_.head(m_) = (g_.topRows(m_).matrix() * c1_.matrix()).array();
    double sa = (dvec_.head(m_) * scratch_.head(m_)).sum();
    scratch_.head(m_) = (g_.topRows(m_).matrix() * c2_.matrix()).array();
    double sb = (dvec_.head(m_) * scratch_.head(m_)).sum();
    scratch_.head(m_) = (g_.topRows(m_).matrix() * c3_.matrix()).array();
    double sc = (dvec_.head(m_) * scratch_.head(m_)).sum();

    double u0 = std::exp(-sj * sj / (2.0 * sigj * sigj));
    double d1 = c2_.sum();
    double d2 = ampj * c3_.sum();
    double d3 = ampj * (c3_ * (sk_ - sj)).sum();

    double g_amp = -sa + dj * d1;
    double g_s = -ampj * (u0 * wv - sb) + dj * d2 / (sigj * sigj);
    double g_sig = -(ampj / sigj) * (sa - sc - sj * u0 * wv) + dj * d3 / (sigj * sigj * sigj);

    // Chain to the blob mean: s_j moves along the ray, the amplitude through the
    // perpendicular offset vector r_j = (mean - o) - s_j n.
    Vec3 gm = g_s * n_ + g_amp * (-ampj / (sigj * sigj)) * rvec_[j];
    grad_mean[idx_[j]] += keep_scale * gm;
    if (grad_sigma) {
      grad_sigma[idx_[j]] +=
          keep_scale * (g_sig + g_amp * ampj * dperp2_[j] / (sigj * sigj * sigj));
    }
  }

  // s_far tracks the farthest-reaching blob; route its derivative there.
  if (far_active_ >= 0 && kept(far_active_)) {
    Eigen::VectorXd pk = g_.topRows(m_).matrix().transpose() * dvec_.head(m_).matrix();
    Eigen::ArrayXd rho = g_.topRows(m_).colwise().sum().transpose();
    // P2_k = sum_q d_q g_qk (s_q - s_k)/sigma_q^2
    Eigen::ArrayXd wq1 = dvec_.head(m_) * s_.head(m_) / sig_.head(m_).square();
    Eigen::ArrayXd wq2 = dvec_.head(m_) / sig_.head(m_).square();
    Eigen::ArrayXd p2 =
        (g_.topRows(m_).matrix().transpose() * wq1.matrix()).array() -
        sk_ * (g_.topRows(m_).matrix().transpose() * wq2.matrix()).array();
    double dw_dsfar = wv / s_far_ + (ek_ * xk_ * (-rho * pk.array() + p2)).sum();
    grad_mean[idx_[far_active_]] += keep_scale * dw_dsfar * n_;
    if (grad_sigma) grad_sigma[idx_[far_active_]] += keep_scale * kReachSigmas * dw_dsfar;
  }
}

VisibilityResult visibility(const std::vector<PosedBlob>& blobs, const Ray& ray, int nodes) {
  RayEvaluator ev;
  ev.prepare(blobs, ray, nodes, 0.0);
  VisibilityResult out;
  out.v = Eigen::VectorXd::Zero(blobs.size());
  for (int a = 0; a < ev.active_count(); ++a) {
    out.v[ev.active_indices()[a]] = ev.value_at_active(a);
  }
  out.transmittance = 1.0 - out.v.sum();
  return out;
}

Hsv render_pixel(const std::vector<PosedBlob>& blobs, const Ray& ray, const Hsv& background,
                 int nodes, double cull_eps) {
  RayEvaluator ev;
  ev.prepare(blobs, ray, nodes, cull_eps);
  double t = std::max(0.0, 1.0 - ev.total_absorption());
  double sx = 0.0, sy = 0.0, s_acc = 0.0, v_acc = 0.0;
  for (int a = 0; a < ev.active_count(); ++a) {
    double w = ev.value_at_active(a);
    if (w <= 0.0) continue;
    const Hsv& c = blobs[ev.active_indices()[a]].color;
    double ang = 2.0 * M_PI * c.h;
    sx += w * std::cos(ang);
    sy += w * std::sin(ang);
    s_acc += w * c.s;
    v_acc += w * c.v;
  }
  double ang_bg = 2.0 * M_PI * background.h;
  sx += t * std::cos(ang_bg);
  sy += t * std::sin(ang_bg);
  s_acc += t * background.s;
  v_acc += t * background.v;
  Hsv out;
  if (std::abs(sx) + std::abs(sy) < 1e-300) {
    out.h = background.h;
  } else {
    double h = std::atan2(sy, sx) / (2.0 * M_PI);
    out.h = h - std::floor(h);
  }
  out.s = s_acc;
  out.v = v_acc;
  return out;
}

VisibilityGradients visibility_gradients(const std::vector<PosedBlob>& blobs, const Ray& ray,
                                         int nodes) {
  int n = static_cast<int>(blobs.size());
  RayEvaluator ev;
  ev.prepare(blobs, ray, nodes, 0.0);
  VisibilityGradients out;
  out.v = Eigen::VectorXd::Zero(n);
  out.dmean.assign(n, Eigen::Matrix3Xd::Zero(3, n));
  out.dsigma = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> weights(n, 0.0);
  std::vector<Vec3> gm(n, Vec3::Zero());
  std::vector<double> gs(n, 0.0);
  for (int q = 0; q < n; ++q) {
    out.v[q] = ev.value_of(q);
    std::fill(weights.begin(), weights.end(), 0.0);
    weights[q] = 1.0;
    std::fill(gm.begin(), gm.end(), Vec3::Zero());
    std::fill(gs.begin(), gs.end(), 0.0);
    ev.weighted_gradient(weights.data(), nullptr, 1.0, gm.data(), gs.data());
    for (int j = 0; j < n; ++j) {
      out.dmean[q].col(j) = gm[j];
      out.dsigma(q, j) = gs[j];
    }
  }
  return out;
}

}  // namespace egocap
