#pragma once

#include <Eigen/Dense>

namespace egocap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Pose = Eigen::VectorXd;

struct RigidTransform {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 operator*(const Vec3& x) const { return R * x + t; }
  RigidTransform operator*(const RigidTransform& o) const {
    return {R * o.R, R * o.t + t};
  }
  RigidTransform inverse() const {
    Mat3 Rt = R.transpose();
    return {Rt, -(Rt * t)};
  }
};

struct Ray {
  Vec3 origin;
  Vec3 dir;  // unit length
};

}  // namespace egocap
