#include "egocap/energy.hpp"

#include <cmath>

#include "egocap/errors.hpp"
#include "egocap/parallel.hpp"
#include "egocap/rng.hpp"

namespace egocap {

void EnergyContext::init() {
  if (!body || !rig) throw InputError("energy context: body and rig required");
  for (int c = 0; c < 2; ++c) {
    Side side = c == 0 ? Side::kLeft : Side::kRight;
    const FisheyeCamera& cam = rig->camera(side);
    CameraRays& cr = cam_rays[c];
    cr.width = cam.width;
    cr.height = cam.height;
    size_t n = static_cast<size_t>(cam.width) * cam.height;
    cr.rays.assign(n, Ray{Vec3::Zero(), Vec3::UnitZ()});
    cr.in_circle.assign(n, 0);
    Mat2 affine_inv = cam.affine.inverse();
    const RigidTransform& ext = rig->extrinsic(side);
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        Vec2 px(x, y);
        Vec2 corrected = affine_inv * (px - cam.center);
        if (corrected.norm() > cam.rho_max) continue;
        Vec3 dir(corrected.x(), corrected.y(), cam.f(corrected.norm()));
        size_t i = static_cast<size_t>(y) * cam.width + x;
        cr.rays[i] = Ray{ext.t, ext.R * dir.normalized()};
        cr.in_circle[i] = 1;
      }
    }
  }
}

double e_pose(const Skeleton& skel, const Pose& p, const EnergyWeights& w,
              Eigen::VectorXd* grad) {
  double limit_term = 0.0, prior_term = 0.0;
  for (int d = 0; d < skel.num_dofs(); ++d) {
    double over = std::max(0.0, p[d] - skel.dofs[d].upper);
    double under = std::max(0.0, skel.dofs[d].lower - p[d]);
    limit_term += over * over + under * under;
    prior_term += pseudo_huber(p[d]);
    if (grad) {
      (*grad)[d] += w.lambda_limit * (2.0 * over - 2.0 * under) +
                    w.lambda_pose * pseudo_huber_deriv(p[d]);
    }
  }
  return w.lambda_limit * limit_term + w.lambda_pose * prior_term;
}

double e_smooth(const Pose& p, const Pose& prev1, const Pose& prev2, const EnergyWeights& w,
                Eigen::VectorXd* grad) {
  double sum = 0.0;
  for (int d = 0; d < p.size(); ++d) {
    double r = prev1[d] + w.zeta * (prev1[d] - prev2[d]) - p[d];
    sum += pseudo_huber(r);
    if (grad) (*grad)[d] += -w.lambda_smooth * pseudo_huber_deriv(r);
  }
  return w.lambda_smooth * sum;
}

namespace {

struct ColorAccum {
  double value = 0.0;
  std::vector<Vec3> gmean;
};

}  // namespace

double e_color(const EnergyContext& ctx, const std::vector<PosedBlob>& posed,
               const Image& image, Side side, const std::vector<int>* subset,
               std::vector<Vec3>* grad_mean, const ColorDrop* drop) {
  const EnergyContext::CameraRays& cr = ctx.rays(side);
  if (image.width != cr.width || image.height != cr.height) {
    throw InputError("e_color: image resolution does not match the rig");
  }
  size_t all = static_cast<size_t>(cr.width) * cr.height;
  size_t count = subset ? subset->size() : all;
  if (count == 0) throw InputError("e_color: empty pixel subset");
  double scale = subset ? static_cast<double>(all) / static_cast<double>(count) : 1.0;
  int nblobs = static_cast<int>(posed.size());
  int cam_index = side == Side::kLeft ? 0 : 1;
  bool with_grad = grad_mean != nullptr;

  ColorAccum init;
  if (with_grad) init.gmean.assign(nblobs, Vec3::Zero());

  auto body = [&](ColorAccum& acc, size_t begin, size_t end) {
    RayEvaluator ev;
    std::vector<double> weights(nblobs, 0.0);
    std::vector<uint8_t> keep;
    for (size_t i = begin; i < end; ++i) {
      int px = subset ? (*subset)[i] : static_cast<int>(i);
      if (!cr.in_circle[px]) continue;
      ev.prepare(posed, cr.rays[px], ctx.nodes, ctx.cull_eps);
      if (ev.active_count() == 0) continue;
      const Hsv& pixel_color = image.pixels[px];
      for (int a : ev.active_indices()) {
        weights[a] = color_dissimilarity(posed[a].color, pixel_color, ctx.weights.scaled_hue);
      }
      acc.value += ev.weighted_value(weights.data());
      if (with_grad) {
        const uint8_t* keep_ptr = nullptr;
        double keep_scale = 1.0;
        if (drop && drop->prob > 0.0) {
          keep.assign(nblobs, 1);
          uint64_t pixel_global =
              static_cast<uint64_t>(cam_index) * all + static_cast<uint64_t>(px);
          for (int a : ev.active_indices()) {
            double u = uniform({drop->seed, kStreamDrop, static_cast<uint64_t>(drop->frame),
                                static_cast<uint64_t>(drop->iteration), pixel_global,
                                static_cast<uint64_t>(a)});
            keep[a] = u >= drop->prob ? 1 : 0;
          }
          keep_ptr = keep.data();
          keep_scale = drop->scale;
        }
        ev.weighted_gradient(weights.data(), keep_ptr, keep_scale, acc.gmean.data(), nullptr);
      }
      for (int a : ev.active_indices()) weights[a] = 0.0;
    }
  };

  ColorAccum total = parallel_reduce<ColorAccum>(
      count, kDefaultChunk, ctx.threads, init, body, [&](ColorAccum& t, const ColorAccum& p) {
        t.value += p.value;
        for (size_t q = 0; q < p.gmean.size(); ++q) t.gmean[q] += p.gmean[q];
      });

  if (with_grad) {
    for (int q = 0; q < nblobs; ++q) (*grad_mean)[q] += scale * total.gmean[q];
  }
  return scale * total.value;
}

double e_detection(const EnergyContext& ctx, const std::vector<PosedBlob>& posed,
                   const FkResult& fk, const HeatMapSet& maps,
                   std::vector<Vec3>* grad_mean_body, std::vector<Vec3>* grad_mean_det) {
  int nb = static_cast<int>(posed.size());
  double energy = 0.0;
  std::vector<PosedBlob> field;
  std::vector<double> weights;
  std::vector<Vec3> gm;
  RayEvaluator ev;
  bool with_grad = grad_mean_body != nullptr;
  for (int c = 0; c < 2; ++c) {
    Side side = c == 0 ? Side::kLeft : Side::kRight;
    const HeatMaps& hm = maps.cam(c);
    const FisheyeCamera& cam = ctx.rig->camera(side);
    for (int l = 0; l < kNumLabels; ++l) {
      const HeatMaps::Peak& peak = hm.peaks[l];
      if (!peak.valid) continue;
      Vec2 corrected = cam.affine.inverse() * (peak.pixel - cam.center);
      if (corrected.norm() > cam.rho_max) continue;  // peak cell center off the circle
      Ray ray = ray_in_root(*ctx.rig, side, peak.pixel);

      const GaussianBlob& det = ctx.body->detection_blobs[l];
      PosedBlob posed_det = pose_blob(det, fk);
      if (ctx.weights.detection_ignore_occlusion) {
        field.assign(1, posed_det);
      } else {
        field = posed;
        field.push_back(posed_det);
      }
      int det_index = static_cast<int>(field.size()) - 1;
      ev.prepare(field, ray, ctx.nodes, ctx.cull_eps);
      weights.assign(field.size(), 0.0);
      weights[det_index] = -ctx.weights.lambda_detection * peak.confidence;
      energy += ev.weighted_value(weights.data());
      if (with_grad) {
        gm.assign(field.size(), Vec3::Zero());
        ev.weighted_gradient(weights.data(), nullptr, 1.0, gm.data(), nullptr);
        if (!ctx.weights.detection_ignore_occlusion) {
          for (int q = 0; q < nb; ++q) (*grad_mean_body)[q] += gm[q];
        }
        (*grad_mean_det)[l] += gm[det_index];
      }
    }
  }
  return energy;
}

std::vector<int> sample_pixels(const SampleSpec& spec, int cam_index, int width, int height) {
  uint64_t all = static_cast<uint64_t>(width) * height;
  auto n = static_cast<uint64_t>(std::llround(spec.pixel_fraction * static_cast<double>(all)));
  if (n == 0) n = 1;
  std::vector<int> subset(n);
  for (uint64_t i = 0; i < n; ++i) {
    subset[i] = static_cast<int>(
        uniform_index({spec.seed, kStreamPixels, static_cast<uint64_t>(spec.frame),
                       static_cast<uint64_t>(spec.iteration), static_cast<uint64_t>(cam_index), i},
                      all));
  }
  return subset;
}

TotalEnergy total_energy(const EnergyContext& ctx, const Pose& p, const Image* left,
                         const Image* right, const HeatMapSet* maps, const Pose* prev1,
                         const Pose* prev2, const SampleSpec& sampling, bool with_grad) {
  if (sampling.drop_prob < 0.0 || sampling.drop_prob >= 1.0) {
    throw InputError("drop probability must lie in [0,1)");
  }
  if (sampling.pixel_fraction <= 0.0 || sampling.pixel_fraction > 1.0) {
    throw InputError("pixel fraction must lie in (0,1]");
  }
  FkResult fk = forward_kinematics(ctx.body->skeleton, p);
  std::vector<PosedBlob> posed = pose_blobs(*ctx.body, fk);
  int nb = static_cast<int>(posed.size());

  TotalEnergy out;
  if (with_grad) out.grad = Eigen::VectorXd::Zero(ctx.body->skeleton.num_dofs());

  std::vector<Vec3> gmean_color, gmean_det_body, gmean_det;
  if (with_grad) {
    gmean_color.assign(nb, Vec3::Zero());
    gmean_det_body.assign(nb, Vec3::Zero());
    gmean_det.assign(kNumLabels, Vec3::Zero());
  }

  ColorDrop drop;
  const ColorDrop* drop_ptr = nullptr;
  if (with_grad && sampling.drop_prob > 0.0) {
    drop.prob = sampling.drop_prob;
    drop.scale = 1.0 / (1.0 - sampling.drop_prob);
    drop.seed = sampling.seed;
    drop.frame = sampling.frame;
    drop.iteration = sampling.iteration;
    drop_ptr = &drop;
  }

  const Image* images[2] = {left, right};
  for (int c = 0; c < 2; ++c) {
    if (!images[c]) continue;
    Side side = c == 0 ? Side::kLeft : Side::kRight;
    std::vector<int> subset;
    const std::vector<int>* subset_ptr = nullptr;
    if (sampling.pixel_fraction < 1.0) {
      subset = sample_pixels(sampling, c, images[c]->width, images[c]->height);
      subset_ptr = &subset;
    }
    out.terms.color += ctx.weights.lambda_color *
                       e_color(ctx, posed, *images[c], side, subset_ptr,
                               with_grad ? &gmean_color : nullptr, drop_ptr);
  }

  if (maps) {
    out.terms.detection = e_detection(ctx, posed, fk, *maps, with_grad ? &gmean_det_body : nullptr,
                                      with_grad ? &gmean_det : nullptr);
  }

  out.terms.pose = e_pose(ctx.body->skeleton, p, ctx.weights, with_grad ? &out.grad : nullptr);
  if (prev1 && prev2) {
    out.terms.smooth =
        e_smooth(p, *prev1, *prev2, ctx.weights, with_grad ? &out.grad : nullptr);
  }

  if (with_grad) {
    for (int q = 0; q < nb; ++q) {
      Vec3 g = ctx.weights.lambda_color * gmean_color[q] + gmean_det_body[q];
      if (g.isZero()) continue;
      accumulate_point_gradient(ctx.body->skeleton, fk, posed[q].bone, posed[q].mean, g,
                                out.grad);
    }
    for (int l = 0; l < kNumLabels; ++l) {
      if (gmean_det[l].isZero()) continue;
      const GaussianBlob& det = ctx.body->detection_blobs[l];
      Vec3 mean = fk.joint_tf[det.bone] * det.local_mean;
      accumulate_point_gradient(ctx.body->skeleton, fk, det.bone, mean, gmean_det[l], out.grad);
    }
  }

  out.value = out.terms.total();
  return out;
}

}  // namespace egocap
