#pragma once

#include <array>
#include <string>

#include "egocap/types.hpp"

namespace egocap {

// Omnidirectional camera: a ray through pixel (u,v) has camera-frame direction
// [u', v', f(rho)] with (u',v') the affine-corrected, center-subtracted pixel,
// rho = |(u',v')| and f a polynomial in rho.
struct FisheyeCamera {
  int width = 0;
  int height = 0;
  Vec2 center = Vec2::Zero();
  std::array<double, 5> poly{};  // a0..a4, a1 conventionally 0
  Mat2 affine = Mat2::Identity();
  double rho_max = 0.0;

  double f(double rho) const {
    const auto& a = poly;
    return a[0] + rho * (a[1] + rho * (a[2] + rho * (a[3] + rho * a[4])));
  }
  double f_deriv(double rho) const {
    const auto& a = poly;
    return a[1] + rho * (2.0 * a[2] + rho * (3.0 * a[3] + rho * 4.0 * a[4]));
  }

  // Throws InputError if f(0) = 0, f is not monotone on [0, rho_max], or the
  // affine matrix is singular.
  void validate() const;

  // Pixel -> unit direction in camera frame. Throws OutOfFovError outside the
  // image circle.
  Vec3 unproject(const Vec2& pixel) const;

  // Camera-frame point -> pixel. Throws OutOfFovError outside the modeled field
  // of view and NumericError if the root finder fails to converge.
  Vec2 project(const Vec3& point) const;

  // Same lens geometry at k times the resolution.
  FisheyeCamera scaled(double k) const;
};

enum class Side { kLeft, kRight };

struct StereoRig {
  FisheyeCamera left;
  FisheyeCamera right;
  RigidTransform extrinsic_left;   // camera frame -> head/root frame
  RigidTransform extrinsic_right;

  // Distance between the two camera centers, meters. Typical head rigs sit
  // around 30-40 cm.
  double baseline() const { return (extrinsic_left.t - extrinsic_right.t).norm(); }

  const FisheyeCamera& camera(Side s) const { return s == Side::kLeft ? left : right; }
  const RigidTransform& extrinsic(Side s) const {
    return s == Side::kLeft ? extrinsic_left : extrinsic_right;
  }

  void validate() const;
  StereoRig scaled(double k) const;
};

Ray ray_in_root(const StereoRig& rig, Side side, const Vec2& pixel);

FisheyeCamera load_camera(const std::string& path);
void save_camera(const FisheyeCamera& cam, const std::string& path);

// Rig file references two camera files (relative to its directory) and two
// row-major 3x4 extrinsics.
StereoRig load_rig(const std::string& path);
void save_rig(const StereoRig& rig, const std::string& path,
              const std::string& left_cam_file, const std::string& right_cam_file);

}  // namespace egocap
