#include "egocap/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "egocap/errors.hpp"
#include "egocap/parallel.hpp"
#include "egocap/raycast.hpp"

namespace egocap {

namespace {

const Hsv kSkin{0.07, 0.45, 0.85};
const Hsv kShirt{0.33, 0.85, 0.80};
const Hsv kPants{0.62, 0.80, 0.50};
const Hsv kShoes{0.00, 0.05, 0.15};
const Hsv kMarker{0.0, 0.0, 1.0};

const Mat3 kSagittalMirror = Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();

void add_joint(Skeleton& s, const std::string& name, int parent, const Vec3& offset) {
  s.joints.push_back(Joint{name, parent, offset});
}

void add_dof(Skeleton& s, int joint, const Vec3& axis, double lower, double upper) {
  s.dofs.push_back(Dof{joint, axis.normalized(), lower, upper});
}

void add_blob(BodyModel& m, int bone, const Vec3& local, double sigma, const Hsv& color) {
  m.blobs.push_back(GaussianBlob{bone, local, sigma, 1.0, color});
}

// Blobs at the given fractions of the segment from `bone` toward its child.
void add_chain(BodyModel& m, int bone, const Vec3& child_offset,
               const std::vector<double>& fracs, double sigma, const std::vector<Hsv>& colors) {
  for (size_t i = 0; i < fracs.size(); ++i) {
    add_blob(m, bone, fracs[i] * child_offset, sigma, colors[i]);
  }
}

void check_pose_within_limits(const Skeleton& skel, const Pose& pose) {
  if (pose.size() != skel.num_dofs()) throw InputError("pose size does not match the skeleton");
  for (int d = 0; d < skel.num_dofs(); ++d) {
    if (!std::isfinite(pose[d])) throw InputError("pose has non-finite entries");
    if (pose[d] < skel.dofs[d].lower - 1e-12 || pose[d] > skel.dofs[d].upper + 1e-12) {
      throw InputError("pose outside joint limits at dof " + std::to_string(d));
    }
  }
}

PointAnnotation project_point(const StereoRig& rig, Side side, const Vec3& world) {
  const RigidTransform& ext = rig.extrinsic(side);
  Vec3 in_cam = ext.R.transpose() * (world - ext.t);
  PointAnnotation a;
  try {
    a.pixel = rig.camera(side).project(in_cam);
    a.visible = true;
  } catch (const OutOfFovError&) {
    a.visible = false;
  }
  return a;
}

HeatMaps bumps_from_labels(const std::vector<PointAnnotation>& labels2d, int width, int height,
                           double sigma_cells) {
  HeatMaps hm = HeatMaps::zeros(width / kHeatMapScale, height / kHeatMapScale);
  double inv2s2 = 1.0 / (2.0 * sigma_cells * sigma_cells);
  for (int l = 0; l < kNumLabels; ++l) {
    if (!labels2d[l].visible) continue;
    double gxc = pixel_to_cell(labels2d[l].pixel.x());
    double gyc = pixel_to_cell(labels2d[l].pixel.y());
    for (int gy = 0; gy < hm.grid_h; ++gy) {
      for (int gx = 0; gx < hm.grid_w; ++gx) {
        double d2 = (gx - gxc) * (gx - gxc) + (gy - gyc) * (gy - gyc);
        hm.at(l, gx, gy) = static_cast<float>(std::exp(-d2 * inv2s2));
      }
    }
  }
  hm.refresh_peaks();
  return hm;
}

void check_mirror_rig(const StereoRig& rig) {
  const FisheyeCamera& l = rig.left;
  const FisheyeCamera& r = rig.right;
  const double tol = 1e-9;
  bool same = l.width == r.width && l.height == r.height &&
              (l.center - r.center).norm() <= tol && std::abs(l.rho_max - r.rho_max) <= tol &&
              (l.affine - r.affine).norm() <= tol;
  for (int i = 0; i < 5; ++i) same = same && std::abs(l.poly[i] - r.poly[i]) <= tol;
  if (!same) throw InputError("mirror augmentation needs identical left/right intrinsics");
  if (std::abs(l.affine(0, 1)) > tol || std::abs(l.affine(1, 0)) > tol) {
    throw InputError("mirror augmentation needs an axis-aligned pixel grid");
  }
  if (std::abs(2.0 * l.center.x() - (l.width - 1)) > 1e-6) {
    throw InputError("mirror augmentation needs a horizontally centered image circle");
  }
  Mat3 flip_x = Eigen::Vector3d(-1.0, 1.0, 1.0).asDiagonal();
  if ((rig.extrinsic_right.R - kSagittalMirror * rig.extrinsic_left.R * flip_x).norm() > 1e-9 ||
      (rig.extrinsic_right.t - kSagittalMirror * rig.extrinsic_left.t).norm() > 1e-9) {
    throw InputError("rig is not symmetric about the sagittal plane");
  }
}

std::string indexed_path(const std::string& dir, const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem, index, ext);
  return dir + "/" + buf;
}

nlohmann::json vec3_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

nlohmann::json annotations_json(const std::vector<PointAnnotation>& pts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PointAnnotation& a : pts) {
    arr.push_back({a.pixel.x(), a.pixel.y(), a.visible ? 1 : 0});
  }
  return arr;
}

std::vector<PointAnnotation> annotations_from_json(const nlohmann::json& arr) {
  std::vector<PointAnnotation> out;
  for (const auto& e : arr) {
    PointAnnotation a;
    a.pixel = Vec2(e.at(0).get<double>(), e.at(1).get<double>());
    a.visible = e.at(2).get<int>() != 0;
    out.push_back(a);
  }
  return out;
}

}  // namespace

SyntheticFrame generate_frame(const BodyModel& body, const StereoRig& rig_in, const Pose& pose,
                              const SynthConfig& cfg) {
  StereoRig rig = rig_in;
  if (cfg.width > 0 || cfg.height > 0) {
    if (cfg.width <= 0 || cfg.height <= 0) throw InputError("both frame dimensions required");
    double kx = static_cast<double>(cfg.width) / rig_in.left.width;
    double ky = static_cast<double>(cfg.height) / rig_in.left.height;
    if (std::abs(kx - ky) > 1e-12) throw InputError("frame resolution must preserve aspect");
    if (kx != 1.0) rig = rig_in.scaled(kx);
  }
  if (rig.left.width % kHeatMapScale != 0 || rig.left.height % kHeatMapScale != 0) {
    throw InputError("frame resolution must be a multiple of the heat-map cell size");
  }
  check_pose_within_limits(body.skeleton, pose);

  FkResult fk = forward_kinematics(body.skeleton, pose);
  std::vector<PosedBlob> posed = pose_blobs(body, fk);

  SyntheticFrame fr;
  fr.pose = pose;
  fr.joints3d.reserve(body.skeleton.num_joints());
  for (const RigidTransform& tf : fk.joint_tf) fr.joints3d.push_back(tf.t);
  fr.labels3d.reserve(kNumLabels);
  for (int l = 0; l < kNumLabels; ++l) {
    fr.labels3d.push_back(pose_blob(body.detection_blobs[l], fk).mean);
  }

  for (int c = 0; c < 2; ++c) {
    Side side = c == 0 ? Side::kLeft : Side::kRight;
    const FisheyeCamera& cam = rig.camera(side);
    const RigidTransform& ext = rig.extrinsic(side);
    Mat2 affine_inv = cam.affine.inverse();
    Image img = Image::filled(cam.width, cam.height, cfg.background);
    size_t npx = img.pixels.size();
    parallel_chunks(npx, kDefaultChunk, cfg.threads, [&](size_t, size_t b, size_t e) {
      for (size_t i = b; i < e; ++i) {
        int x = static_cast<int>(i) % cam.width;
        int y = static_cast<int>(i) / cam.width;
        Hsv bg = cfg.background;
        if (cfg.background_tile) {
          bg = cfg.background_tile->at(x % cfg.background_tile->width,
                                       y % cfg.background_tile->height);
        }
        Vec2 corrected = affine_inv * (Vec2(x, y) - cam.center);
        double rho = corrected.norm();
        if (rho > cam.rho_max) {
          img.pixels[i] = bg;
          continue;
        }
        Vec3 dir(corrected.x(), corrected.y(), cam.f(rho));
        Ray ray{ext.t, ext.R * dir.normalized()};
        img.pixels[i] = render_pixel(posed, ray, bg, cfg.nodes, cfg.cull_eps);
      }
    });
    fr.image(side) = std::move(img);

    fr.joints2d[c].reserve(fr.joints3d.size());
    for (const Vec3& x : fr.joints3d) fr.joints2d[c].push_back(project_point(rig, side, x));
    fr.labels2d[c].reserve(kNumLabels);
    for (const Vec3& x : fr.labels3d) fr.labels2d[c].push_back(project_point(rig, side, x));

    HeatMaps hm =
        bumps_from_labels(fr.labels2d[c], cam.width, cam.height, cfg.bump_sigma_cells);
    (c == 0 ? fr.maps.left : fr.maps.right) = std::move(hm);
  }
  return fr;
}

std::vector<int> mirror_joint_table(const Skeleton& skel) {
  std::vector<int> table(skel.num_joints());
  for (int j = 0; j < skel.num_joints(); ++j) {
    const std::string& name = skel.joints[j].name;
    if (name.size() > 2 && (name.ends_with("_l") || name.ends_with("_r"))) {
      std::string other = name.substr(0, name.size() - 1) + (name.back() == 'l' ? "r" : "l");
      table[j] = skel.joint_index(other);
    } else {
      table[j] = j;
    }
  }
  return table;
}

Pose mirror_pose(const Skeleton& skel, const Pose& pose) {
  if (pose.size() != skel.num_dofs()) throw InputError("pose size does not match the skeleton");
  std::vector<int> counterpart = mirror_joint_table(skel);
  std::vector<std::vector<int>> dofs_of(skel.num_joints());
  for (int d = 0; d < skel.num_dofs(); ++d) dofs_of[skel.dofs[d].joint].push_back(d);

  Pose out = Pose::Zero(skel.num_dofs());
  for (int j = 0; j < skel.num_joints(); ++j) {
    int j2 = counterpart[j];
    if ((skel.joints[j2].offset - kSagittalMirror * skel.joints[j].offset).norm() > 1e-9 ||
        dofs_of[j].size() != dofs_of[j2].size()) {
      throw InputError("skeleton is not left/right symmetric");
    }
    for (size_t k = 0; k < dofs_of[j].size(); ++k) {
      const Dof& d = skel.dofs[dofs_of[j][k]];
      const Dof& d2 = skel.dofs[dofs_of[j2][k]];
      double align = (kSagittalMirror * d.axis).dot(d2.axis);
      if (std::abs(align) < 1.0 - 1e-9) {
        throw InputError("skeleton dof axes are not mirror symmetric");
      }
      // R(Ma, -t) = R(-Ma, t): counterpart value keeps or flips sign with the
      // axis orientation.
      double value = align > 0 ? -pose[dofs_of[j][k]] : pose[dofs_of[j][k]];
      double lo = align > 0 ? -d.upper : d.lower;
      double hi = align > 0 ? -d.lower : d.upper;
      if (std::abs(lo - d2.lower) > 1e-9 || std::abs(hi - d2.upper) > 1e-9) {
        throw InputError("skeleton dof limits are not mirror symmetric");
      }
      out[dofs_of[j2][k]] = value;
    }
  }
  return out;
}

SyntheticFrame mirror_augment(const SyntheticFrame& frame, const BodyModel& body,
                              const StereoRig& rig) {
  check_mirror_rig(rig);
  std::vector<int> cjoint = mirror_joint_table(body.skeleton);

  SyntheticFrame out;
  out.left = flip_horizontal(frame.right);
  out.right = flip_horizontal(frame.left);
  out.pose = mirror_pose(body.skeleton, frame.pose);

  out.joints3d.resize(frame.joints3d.size());
  for (size_t j = 0; j < frame.joints3d.size(); ++j) {
    out.joints3d[cjoint[j]] = kSagittalMirror * frame.joints3d[j];
  }
  out.labels3d.resize(frame.labels3d.size());
  for (int l = 0; l < kNumLabels; ++l) {
    out.labels3d[mirror_label(l)] = kSagittalMirror * frame.labels3d[l];
  }

  double umax = frame.left.width - 1;
  auto flip_annotation = [&](const PointAnnotation& a) {
    PointAnnotation b = a;
    b.pixel.x() = umax - a.pixel.x();
    return b;
  };
  for (int c = 0; c < 2; ++c) {
    int src = 1 - c;  // new left comes from old right and vice versa
    out.joints2d[c].resize(frame.joints2d[src].size());
    for (size_t j = 0; j < frame.joints2d[src].size(); ++j) {
      out.joints2d[c][cjoint[j]] = flip_annotation(frame.joints2d[src][j]);
    }
    out.labels2d[c].resize(kNumLabels);
    for (int l = 0; l < kNumLabels; ++l) {
      out.labels2d[c][mirror_label(l)] = flip_annotation(frame.labels2d[src][l]);
    }
  }

  auto flip_maps = [](const HeatMaps& m) {
    HeatMaps out_m = HeatMaps::zeros(m.grid_w, m.grid_h);
    for (int l = 0; l < kNumLabels; ++l) {
      int l2 = mirror_label(l);
      for (int gy = 0; gy < m.grid_h; ++gy) {
        for (int gx = 0; gx < m.grid_w; ++gx) {
          out_m.at(l2, gx, gy) = m.at(l, m.grid_w - 1 - gx, gy);
        }
      }
    }
    out_m.refresh_peaks();
    return out_m;
  };
  out.maps.left = flip_maps(frame.maps.right);
  out.maps.right = flip_maps(frame.maps.left);
  return out;
}

Image gamma_jitter(const Image& image, double gamma) {
  if (!(gamma >= 0.5 && gamma <= 2.0)) throw InputError("gamma must lie in [0.5, 2]");
  Image out = image;
  for (Hsv& p : out.pixels) p.v = std::pow(p.v, gamma);
  return out;
}

Image scale_jitter(const Image& image, double factor) {
  if (!(factor >= 0.85 && factor <= 1.15)) throw InputError("scale factor must lie in [0.85, 1.15]");
  Image out = image;
  double cx = 0.5 * (image.width - 1);
  double cy = 0.5 * (image.height - 1);
  auto rgb_at = [&](int x, int y) {
    x = std::min(std::max(x, 0), image.width - 1);
    y = std::min(std::max(y, 0), image.height - 1);
    return hsv_to_rgb(image.at(x, y));
  };
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double sx = cx + (x - cx) / factor;
      double sy = cy + (y - cy) / factor;
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      double fx = sx - x0, fy = sy - y0;
      Rgb c00 = rgb_at(x0, y0), c10 = rgb_at(x0 + 1, y0);
      Rgb c01 = rgb_at(x0, y0 + 1), c11 = rgb_at(x0 + 1, y0 + 1);
      Rgb mix;
      mix.r = (1 - fy) * ((1 - fx) * c00.r + fx * c10.r) + fy * ((1 - fx) * c01.r + fx * c11.r);
      mix.g = (1 - fy) * ((1 - fx) * c00.g + fx * c10.g) + fy * ((1 - fx) * c01.g + fx * c11.g);
      mix.b = (1 - fy) * ((1 - fx) * c00.b + fx * c10.b) + fy * ((1 - fx) * c01.b + fx * c11.b);
      out.at(x, y) = rgb_to_hsv(mix);
    }
  }
  return out;
}

BodyModel default_body() {
  BodyModel m;
  Skeleton& s = m.skeleton;
  add_joint(s, "head", -1, Vec3(0, 0, 0));
  add_joint(s, "neck", 0, Vec3(0, 0, 0.12));
  add_joint(s, "chest", 1, Vec3(0, 0, 0.18));
  add_joint(s, "clav_l", 2, Vec3(0, -0.03, 0.04));
  add_joint(s, "clav_r", 2, Vec3(0, 0.03, 0.04));
  add_joint(s, "shoulder_l", 3, Vec3(0, -0.16, 0.01));
  add_joint(s, "shoulder_r", 4, Vec3(0, 0.16, 0.01));
  add_joint(s, "elbow_l", 5, Vec3(0, -0.07, 0.27));
  add_joint(s, "elbow_r", 6, Vec3(0, 0.07, 0.27));
  add_joint(s, "wrist_l", 7, Vec3(0, -0.04, 0.26));
  add_joint(s, "wrist_r", 8, Vec3(0, 0.04, 0.26));
  add_joint(s, "hip_l", 2, Vec3(0, -0.10, 0.48));
  add_joint(s, "hip_r", 2, Vec3(0, 0.10, 0.48));
  add_joint(s, "knee_l", 11, Vec3(0.01, -0.01, 0.44));
  add_joint(s, "knee_r", 12, Vec3(0.01, 0.01, 0.44));
  add_joint(s, "ankle_l", 13, Vec3(-0.02, -0.01, 0.42));
  add_joint(s, "ankle_r", 14, Vec3(-0.02, 0.01, 0.42));

  const Vec3 ux = Vec3::UnitX(), uy = Vec3::UnitY(), uz = Vec3::UnitZ();
  add_dof(s, 1, ux, -0.6, 0.6);
  add_dof(s, 1, uy, -0.6, 0.6);
  add_dof(s, 1, uz, -0.9, 0.9);
  add_dof(s, 2, ux, -0.5, 0.5);
  add_dof(s, 2, uy, -0.5, 0.5);
  add_dof(s, 2, uz, -0.7, 0.7);
  add_dof(s, 2, Vec3(std::sin(0.3), 0, std::cos(0.3)), -0.4, 0.4);
  add_dof(s, 3, uy, -0.3, 0.4);
  add_dof(s, 3, uz, -0.3, 0.3);
  add_dof(s, 4, uy, -0.3, 0.4);
  add_dof(s, 4, uz, -0.3, 0.3);
  add_dof(s, 5, ux, -1.5, 1.5);
  add_dof(s, 5, uy, -1.5, 1.5);
  add_dof(s, 5, uz, -0.9, 0.9);
  add_dof(s, 6, ux, -1.5, 1.5);
  add_dof(s, 6, uy, -1.5, 1.5);
  add_dof(s, 6, uz, -0.9, 0.9);
  add_dof(s, 7, uy, -0.1, 2.4);
  add_dof(s, 7, uz, -1.2, 1.2);
  add_dof(s, 8, uy, -0.1, 2.4);
  add_dof(s, 8, uz, -1.2, 1.2);
  add_dof(s, 9, ux, -0.6, 0.6);
  add_dof(s, 9, uy, -0.6, 0.6);
  add_dof(s, 10, ux, -0.6, 0.6);
  add_dof(s, 10, uy, -0.6, 0.6);
  add_dof(s, 11, ux, -0.9, 0.9);
  add_dof(s, 11, uy, -1.2, 1.2);
  add_dof(s, 11, uz, -0.8, 0.8);
  add_dof(s, 12, ux, -0.9, 0.9);
  add_dof(s, 12, uy, -1.2, 1.2);
  add_dof(s, 12, uz, -0.8, 0.8);
  add_dof(s, 13, uy, -2.2, 0.05);
  add_dof(s, 14, uy, -2.2, 0.05);
  add_dof(s, 15, ux, -0.5, 0.5);
  add_dof(s, 15, uy, -0.7, 0.7);
  add_dof(s, 16, ux, -0.5, 0.5);
  add_dof(s, 16, uy, -0.7, 0.7);

  // Head cluster, mostly behind the cameras.
  add_blob(m, 0, Vec3(0, 0, 0), 0.09, kSkin);
  add_blob(m, 0, Vec3(0.04, 0, 0.02), 0.09, kSkin);
  add_blob(m, 0, Vec3(-0.04, 0, 0.02), 0.09, kSkin);
  add_blob(m, 0, Vec3(0, 0.04, 0.02), 0.09, kSkin);
  add_blob(m, 0, Vec3(0, -0.04, 0.02), 0.09, kSkin);
  add_blob(m, 0, Vec3(0.03, 0, -0.04), 0.09, kSkin);
  add_blob(m, 0, Vec3(0, 0, 0.06), 0.09, kSkin);
  // Neck column.
  for (double z : {0.02, 0.05, 0.08, 0.11, 0.14}) add_blob(m, 1, Vec3(0, 0, z), 0.045, kSkin);
  // Torso grid plus side pads.
  for (double yy : {-0.08, 0.0, 0.08}) {
    for (double zz : {0.04, 0.14, 0.24, 0.34, 0.44}) {
      add_blob(m, 2, Vec3(0, yy, zz), 0.075, kShirt);
    }
  }
  add_blob(m, 2, Vec3(0, -0.13, 0.10), 0.075, kShirt);
  add_blob(m, 2, Vec3(0, 0.13, 0.10), 0.075, kShirt);
  add_blob(m, 2, Vec3(0, -0.13, 0.30), 0.075, kShirt);
  add_blob(m, 2, Vec3(0, 0.13, 0.30), 0.075, kShirt);
  // Clavicles, upper arms (sleeved then bare), forearms, hands.
  add_chain(m, 3, s.joints[5].offset, {0.33, 0.67}, 0.05, {kShirt, kShirt});
  add_chain(m, 4, s.joints[6].offset, {0.33, 0.67}, 0.05, {kShirt, kShirt});
  add_chain(m, 5, s.joints[7].offset, {0.1, 0.3, 0.5, 0.7, 0.9}, 0.042,
            {kShirt, kShirt, kSkin, kSkin, kSkin});
  add_chain(m, 6, s.joints[8].offset, {0.1, 0.3, 0.5, 0.7, 0.9}, 0.042,
            {kShirt, kShirt, kSkin, kSkin, kSkin});
  add_chain(m, 7, s.joints[9].offset, {0.1, 0.3, 0.5, 0.7, 0.9}, 0.038,
            {kSkin, kSkin, kSkin, kSkin, kSkin});
  add_chain(m, 8, s.joints[10].offset, {0.1, 0.3, 0.5, 0.7, 0.9}, 0.038,
            {kSkin, kSkin, kSkin, kSkin, kSkin});
  add_blob(m, 9, Vec3(0, 0, 0.02), 0.04, kSkin);
  add_blob(m, 9, Vec3(0, 0, 0.09), 0.04, kSkin);
  add_blob(m, 10, Vec3(0, 0, 0.02), 0.04, kSkin);
  add_blob(m, 10, Vec3(0, 0, 0.09), 0.04, kSkin);
  // Thighs, shanks, feet.
  std::vector<double> thigh{0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
  add_chain(m, 11, s.joints[13].offset, thigh, 0.055, std::vector<Hsv>(7, kPants));
  add_chain(m, 12, s.joints[14].offset, thigh, 0.055, std::vector<Hsv>(7, kPants));
  std::vector<double> shank{0.05, 0.23, 0.41, 0.59, 0.77, 0.95};
  add_chain(m, 13, s.joints[15].offset, shank, 0.045, std::vector<Hsv>(6, kPants));
  add_chain(m, 14, s.joints[16].offset, shank, 0.045, std::vector<Hsv>(6, kPants));
  for (int foot : {15, 16}) {
    add_blob(m, foot, Vec3(0.02, 0, 0.02), 0.035, kShoes);
    add_blob(m, foot, Vec3(0.08, 0, 0.03), 0.035, kShoes);
    add_blob(m, foot, Vec3(0.14, 0, 0.03), 0.035, kShoes);
  }

  auto det = [&](int bone, const Vec3& local) {
    m.detection_blobs.push_back(GaussianBlob{bone, local, 0.05, 1.0, kMarker});
  };
  det(0, Vec3::Zero());            // head
  det(1, Vec3::Zero());            // neck
  det(5, Vec3::Zero());            // shoulder_l
  det(6, Vec3::Zero());            // shoulder_r
  det(7, Vec3::Zero());            // elbow_l
  det(8, Vec3::Zero());            // elbow_r
  det(9, Vec3::Zero());            // wrist_l
  det(10, Vec3::Zero());           // wrist_r
  det(9, Vec3(0, 0, 0.10));        // hand_l
  det(10, Vec3(0, 0, 0.10));       // hand_r
  det(11, Vec3::Zero());           // hip_l
  det(12, Vec3::Zero());           // hip_r
  det(13, Vec3::Zero());           // knee_l
  det(14, Vec3::Zero());           // knee_r
  det(15, Vec3::Zero());           // ankle_l
  det(16, Vec3::Zero());           // ankle_r
  det(15, Vec3(0.10, 0, 0.03));    // foot_l
  det(16, Vec3(0.10, 0, 0.03));    // foot_r

  m.validate();
  return m;
}

StereoRig default_rig() {
  FisheyeCamera cam;
  cam.width = 128;
  cam.height = 128;
  cam.center = Vec2(63.5, 63.5);
  cam.poly = {52.0, 0.0, -0.018, 0.0, 0.0};
  cam.affine = Mat2::Identity();
  cam.rho_max = 56.0;

  StereoRig rig;
  rig.left = cam;
  rig.right = cam;
  Mat3 r;
  r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  rig.extrinsic_left = RigidTransform{r, Vec3(0.08, -0.17, 0.03)};
  rig.extrinsic_right = RigidTransform{r, Vec3(0.08, 0.17, 0.03)};
  rig.validate();
  return rig;
}

Pose walking_pose(const Skeleton& skel, int frame, int period) {
  if (period <= 0) throw InputError("walking period must be positive");
  double ph = 2.0 * M_PI * frame / period;
  Pose p = Pose::Zero(skel.num_dofs());
  auto sn = [&](double phase) { return std::sin(ph + phase); };
  p[0] = 0.04 * std::sin(2 * ph + 0.3);   // neck nod
  p[1] = 0.05 * std::sin(2 * ph);         // neck sway
  p[2] = 0.06 * sn(0.5);                  // neck turn
  p[3] = 0.05 * std::sin(2 * ph + 0.5);   // chest pitch
  p[4] = 0.04 * std::sin(2 * ph + 1.2);   // chest roll
  p[5] = 0.08 * sn(0.0);                  // torso twist
  p[6] = 0.04 * sn(1.0);                  // torso lean
  p[7] = 0.05 * sn(0.0);
  p[8] = 0.03 * sn(0.2);
  p[9] = -0.05 * sn(0.0);
  p[10] = -0.03 * sn(0.2);
  p[11] = 0.12 + 0.06 * sn(1.0);          // arms held slightly out
  p[12] = 0.45 * sn(0.0);                 // arm swing
  p[13] = 0.08 * sn(0.6);
  p[14] = -0.12 - 0.06 * sn(1.0);
  p[15] = -0.45 * sn(0.0);
  p[16] = -0.08 * sn(0.6);
  p[17] = 0.5 + 0.35 * sn(0.4);           // elbow flex
  p[18] = 0.15 * sn(0.9);
  p[19] = 0.5 - 0.35 * sn(0.4);
  p[20] = -0.15 * sn(0.9);
  p[21] = 0.05 * sn(1.1);
  p[22] = 0.1 * sn(0.8);
  p[23] = -0.05 * sn(1.1);
  p[24] = -0.1 * sn(0.8);
  p[25] = 0.04 + 0.03 * sn(0.7);
  p[26] = -0.5 * sn(0.0);                 // leg swing, antiphase with arms
  p[27] = 0.05 * sn(0.0);
  p[28] = -0.04 - 0.03 * sn(0.7);
  p[29] = 0.5 * sn(0.0);
  p[30] = -0.05 * sn(0.0);
  p[31] = -0.6 + 0.55 * sn(M_PI / 2);     // knee flex
  p[32] = -0.6 - 0.55 * sn(M_PI / 2);
  p[33] = 0.03 * sn(0.0);
  p[34] = 0.2 * sn(M_PI / 3);
  p[35] = -0.03 * sn(0.0);
  p[36] = -0.2 * sn(M_PI / 3);
  check_pose_within_limits(skel, p);
  return p;
}

std::string frame_image_path(const std::string& dir, Side side, int index) {
  return indexed_path(dir, side == Side::kLeft ? "left" : "right", index, "png");
}

std::string frame_maps_path(const std::string& dir, Side side, int index) {
  return indexed_path(dir, side == Side::kLeft ? "maps_left" : "maps_right", index, "eghm");
}

std::string frame_truth_path(const std::string& dir, int index) {
  return indexed_path(dir, "truth", index, "json");
}

void save_frame(const SyntheticFrame& frame, const std::string& dir, int index) {
  std::filesystem::create_directories(dir);
  save_png(frame.left, frame_image_path(dir, Side::kLeft, index));
  save_png(frame.right, frame_image_path(dir, Side::kRight, index));
  save_heatmaps(frame.maps.left, frame_maps_path(dir, Side::kLeft, index));
  save_heatmaps(frame.maps.right, frame_maps_path(dir, Side::kRight, index));

  nlohmann::json j;
  j["pose"] = std::vector<double>(frame.pose.data(), frame.pose.data() + frame.pose.size());
  nlohmann::json j3 = nlohmann::json::array(), l3 = nlohmann::json::array();
  for (const Vec3& v : frame.joints3d) j3.push_back(vec3_json(v));
  for (const Vec3& v : frame.labels3d) l3.push_back(vec3_json(v));
  j["joints3d"] = j3;
  j["labels3d"] = l3;
  j["joints2d"] = {{"left", annotations_json(frame.joints2d[0])},
                   {"right", annotations_json(frame.joints2d[1])}};
  j["labels2d"] = {{"left", annotations_json(frame.labels2d[0])},
                   {"right", annotations_json(frame.labels2d[1])}};
  std::ofstream out(frame_truth_path(dir, index));
  if (!out) throw InputError("cannot write " + frame_truth_path(dir, index));
  out << j.dump(1) << "\n";
}

TruthRecord load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad truth file " + path + ": " + e.what());
  }
  try {
    TruthRecord t;
    std::vector<double> pose = j.at("pose").get<std::vector<double>>();
    t.pose = Eigen::Map<Pose>(pose.data(), pose.size());
    for (const auto& e : j.at("joints3d")) {
      t.joints3d.push_back(Vec3(e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()));
    }
    for (const auto& e : j.at("labels3d")) {
      t.labels3d.push_back(Vec3(e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()));
    }
    t.joints2d[0] = annotations_from_json(j.at("joints2d").at("left"));
    t.joints2d[1] = annotations_from_json(j.at("joints2d").at("right"));
    t.labels2d[0] = annotations_from_json(j.at("labels2d").at("left"));
    t.labels2d[1] = annotations_from_json(j.at("labels2d").at("right"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad truth file " + path + ": " + e.what());
  }
}

}  // namespace egocap
