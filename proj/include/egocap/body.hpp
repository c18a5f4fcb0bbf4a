#pragma once

#include <string>
#include <vector>

#include "egocap/color.hpp"
#include "egocap/types.hpp"

namespace egocap {

struct Joint {
  std::string name;
  int parent = -1;       // -1 for the root
  Vec3 offset = Vec3::Zero();  // rest offset from parent, meters
};

// One rotational twist: unit axis anchored at its joint's center.
struct Dof {
  int joint = 0;
  Vec3 axis = Vec3::UnitX();
  double lower = 0.0;
  double upper = 0.0;
};

struct Skeleton {
  std::vector<Joint> joints;
  std::vector<Dof> dofs;  // ordered by joint index

  int num_joints() const { return static_cast<int>(joints.size()); }
  int num_dofs() const { return static_cast<int>(dofs.size()); }
  int joint_index(const std::string& name) const;

  // Dof indices on the chain from the root down to and including `joint`.
  const std::vector<int>& ancestor_dofs(int joint) const { return ancestor_dofs_[joint]; }

  // Checks the head-rooted 17-joint / 37-dof structure, topological parent
  // order, zero dofs on the root, unit axes, and ordered limits. Also builds
  // the ancestor-dof table; call after filling the fields.
  void validate();

 private:
  std::vector<std::vector<int>> ancestor_dofs_;
};

struct GaussianBlob {
  int bone = 0;
  Vec3 local_mean = Vec3::Zero();
  double sigma = 0.0;
  double density = 0.0;  // c_q
  Hsv color;
};

struct BodyModel {
  Skeleton skeleton;
  std::vector<GaussianBlob> blobs;
  // One per detection label, aligned with label_names() order.
  std::vector<GaussianBlob> detection_blobs;

  void validate();
};

struct FkResult {
  std::vector<RigidTransform> joint_tf;  // bone frame -> root frame
  std::vector<Vec3> dof_axis_world;      // current world direction per dof
  std::vector<Vec3> dof_anchor_world;    // world anchor (joint position) per dof
};

FkResult forward_kinematics(const Skeleton& skel, const Pose& pose);
std::vector<Vec3> joint_positions(const Skeleton& skel, const Pose& pose);

struct PosedBlob {
  Vec3 mean = Vec3::Zero();
  double sigma = 0.0;
  double density = 0.0;
  Hsv color;
  int bone = 0;
};

std::vector<PosedBlob> pose_blobs(const BodyModel& body, const FkResult& fk);
PosedBlob pose_blob(const GaussianBlob& blob, const FkResult& fk);

// d(world point)/d(pose entry d) = axis_d x (point - anchor_d) for every dof on
// the bone's ancestor chain; zero elsewhere.
Eigen::Matrix3Xd point_jacobian(const Skeleton& skel, const FkResult& fk, int bone,
                                const Vec3& world_point);

// grad_pose += J(point)^T * grad_point, without materializing J.
void accumulate_point_gradient(const Skeleton& skel, const FkResult& fk, int bone,
                               const Vec3& world_point, const Vec3& grad_point,
                               Eigen::VectorXd& grad_pose);

BodyModel load_body(const std::string& path);
void save_body(const BodyModel& body, const std::string& path);

}  // namespace egocap
