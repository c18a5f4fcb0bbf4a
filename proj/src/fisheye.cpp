#include "egocap/fisheye.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "egocap/errors.hpp"

namespace egocap {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

void FisheyeCamera::validate() const {
  if (width <= 0 || height <= 0) throw InputError("camera: nonpositive image size");
  if (poly[0] == 0.0) throw InputError("camera: f(0) = a0 must be nonzero");
  if (rho_max <= 0.0) throw InputError("camera: rho_max must be positive");
  if (std::abs(affine.determinant()) < 1e-12) throw InputError("camera: singular affine matrix");
  // Monotonicity of f over the image circle, sampled densely.
  int n = 2048;
  double prev = f(0.0);
  int dir = 0;
  for (int i = 1; i <= n; ++i) {
    double cur = f(rho_max * i / n);
    if (cur > prev) {
      if (dir < 0) throw InputError("camera: f not monotone on [0, rho_max]");
      dir = 1;
    } else if (cur < prev) {
      if (dir > 0) throw InputError("camera: f not monotone on [0, rho_max]");
      dir = -1;
    }
    prev = cur;
  }
}

Vec3 FisheyeCamera::unproject(const Vec2& pixel) const {
  Vec2 corrected = affine.inverse() * (pixel - center);
  double rho = corrected.norm();
  if (rho > rho_max) {
    throw OutOfFovError("pixel outside image circle");
  }
  Vec3 dir(corrected.x(), corrected.y(), f(rho));
  return dir.normalized();
}

Vec2 FisheyeCamera::project(const Vec3& point) const {
  double r = std::hypot(point.x(), point.y());
  double z = point.z();
  if (r == 0.0 && z == 0.0) throw InputError("project: point at camera center");
  if (r < 1e-14 * std::abs(z)) {
    // On the optical axis; valid only on the side the lens looks at.
    if (z * poly[0] <= 0.0) throw OutOfFovError("point behind the lens axis");
    return center;
  }
  auto h = [&](double rho) { return f(rho) * r - z * rho; };
  double lo = 0.0, hi = rho_max;
  double hlo = h(lo), hhi = h(hi);
  if (hlo == 0.0) return center;
  if (hlo * hhi > 0.0) throw OutOfFovError("point outside modeled field of view");
  // Safeguarded Newton: f(rho)/rho is monotone on the domain, so one root.
  double rho = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double val = h(rho);
    if (val == 0.0) {
      converged = true;
      break;
    }
    if ((val > 0.0) == (hlo > 0.0)) {
      lo = rho;
    } else {
      hi = rho;
    }
    double dh = f_deriv(rho) * r - z;
    double next = rho - val / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - rho) < 1e-14 * rho_max) {
      rho = next;
      converged = true;
      break;
    }
    rho = next;
  }
  if (!converged) throw NumericError("project: root finder did not converge");
  Vec2 corrected = (rho / r) * Vec2(point.x(), point.y());
  return affine * corrected + center;
}

FisheyeCamera FisheyeCamera::scaled(double k) const {
  if (k <= 0.0) throw InputError("scaled: factor must be positive");
  FisheyeCamera out = *this;
  out.width = static_cast<int>(std::lround(width * k));
  out.height = static_cast<int>(std::lround(height * k));
  // Pixel-center mapping: continuous coordinate x in the source grid lands at
  // k*(x + 0.5) - 0.5 in the scaled grid.
  out.center = k * (center + Vec2(0.5, 0.5)) - Vec2(0.5, 0.5);
  double ki = 1.0;  // k^(1-i)
  for (int i = 0; i < 5; ++i) {
    out.poly[i] = poly[i] * k * ki;
    ki /= k;
  }
  out.rho_max = rho_max * k;
  return out;
}

void StereoRig::validate() const {
  left.validate();
  right.validate();
  for (const RigidTransform* e : {&extrinsic_left, &extrinsic_right}) {
    Mat3 should_be_identity = e->R * e->R.transpose();
    if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
        std::abs(e->R.determinant() - 1.0) > 1e-9) {
      throw InputError("rig: extrinsic rotation not orthonormal with det +1");
    }
  }
}

StereoRig StereoRig::scaled(double k) const {
  StereoRig out = *this;
  out.left = left.scaled(k);
  out.right = right.scaled(k);
  return out;
}

Ray ray_in_root(const StereoRig& rig, Side side, const Vec2& pixel) {
  const RigidTransform& ext = rig.extrinsic(side);
  Vec3 dir = rig.camera(side).unproject(pixel);
  return {ext.t, ext.R * dir};
}

FisheyeCamera load_camera(const std::string& path) {
  json j = read_json(path);
  FisheyeCamera cam;
  try {
    cam.width = j.at("image").at(0).get<int>();
    cam.height = j.at("image").at(1).get<int>();
    cam.center = Vec2(j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>());
    for (int i = 0; i < 5; ++i) cam.poly[i] = j.at("poly").at(i).get<double>();
    if (j.contains("affine")) {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) cam.affine(r, c) = j.at("affine").at(r).at(c).get<double>();
    }
    cam.rho_max = j.at("rho_max").get<double>();
  } catch (const json::exception& e) {
    throw InputError("camera file " + path + ": " + e.what());
  }
  cam.validate();
  return cam;
}

void save_camera(const FisheyeCamera& cam, const std::string& path) {
  json j;
  j["image"] = {cam.width, cam.height};
  j["center"] = {cam.center.x(), cam.center.y()};
  j["poly"] = cam.poly;
  j["affine"] = {{cam.affine(0, 0), cam.affine(0, 1)}, {cam.affine(1, 0), cam.affine(1, 1)}};
  j["rho_max"] = cam.rho_max;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

namespace {

RigidTransform parse_extrinsic(const json& arr, const std::string& what) {
  if (arr.size() != 12) throw InputError(what + ": expected 12 row-major values");
  RigidTransform t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      double v = arr.at(r * 4 + c).get<double>();
      if (c < 3) {
        t.R(r, c) = v;
      } else {
        t.t(r) = v;
      }
    }
  }
  return t;
}

}  // namespace

StereoRig load_rig(const std::string& path) {
  json j = read_json(path);
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  StereoRig rig;
  try {
    rig.left = load_camera((dir / j.at("left").get<std::string>()).string());
    rig.right = load_camera((dir / j.at("right").get<std::string>()).string());
    rig.extrinsic_left = parse_extrinsic(j.at("extrinsic_left"), "extrinsic_left");
    rig.extrinsic_right = parse_extrinsic(j.at("extrinsic_right"), "extrinsic_right");
  } catch (const json::exception& e) {
    throw InputError("rig file " + path + ": " + e.what());
  }
  rig.validate();
  return rig;
}

void save_rig(const StereoRig& rig, const std::string& path,
              const std::string& left_cam_file, const std::string& right_cam_file) {
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  save_camera(rig.left, (dir / left_cam_file).string());
  save_camera(rig.right, (dir / right_cam_file).string());
  json j;
  j["left"] = left_cam_file;
  j["right"] = right_cam_file;
  auto flat = [](const RigidTransform& t) {
    std::array<double, 12> a;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r * 4 + c] = t.R(r, c);
      a[r * 4 + 3] = t.t(r);
    }
    return a;
  };
  j["extrinsic_left"] = flat(rig.extrinsic_left);
  j["extrinsic_right"] = flat(rig.extrinsic_right);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace egocap
