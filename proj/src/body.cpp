#include "egocap/body.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "egocap/errors.hpp"
#include "egocap/heatmap.hpp"

namespace egocap {

int Skeleton::joint_index(const std::string& name) const {
  for (int i = 0; i < num_joints(); ++i) {
    if (joints[i].name == name) return i;
  }
  throw InputError("unknown joint: " + name);
}

void Skeleton::validate() {
  if (num_joints() != 17) throw InputError("skeleton: expected 17 joints");
  if (joints[0].parent != -1) throw InputError("skeleton: joint 0 must be the root");
  for (int i = 1; i < num_joints(); ++i) {
    if (joints[i].parent < 0 || joints[i].parent >= i) {
      throw InputError("skeleton: parents must precede children");
    }
  }
  if (num_dofs() != 37) throw InputError("skeleton: expected 37 pose parameters");
  int prev_joint = 0;
  for (const Dof& d : dofs) {
    if (d.joint <= 0 || d.joint >= num_joints()) {
      throw InputError("skeleton: dof on invalid joint (root carries none)");
    }
    if (d.joint < prev_joint) throw InputError("skeleton: dofs must be ordered by joint");
    prev_joint = d.joint;
    if (std::abs(d.axis.norm() - 1.0) > 1e-9) throw InputError("skeleton: dof axis not unit");
    if (!(d.lower <= d.upper)) throw InputError("skeleton: dof limits out of order");
  }
  ancestor_dofs_.assign(num_joints(), {});
  for (int j = 0; j < num_joints(); ++j) {
    if (joints[j].parent >= 0) ancestor_dofs_[j] = ancestor_dofs_[joints[j].parent];
    for (int d = 0; d < num_dofs(); ++d) {
      if (dofs[d].joint == j) ancestor_dofs_[j].push_back(d);
    }
  }
}

void BodyModel::validate() {
  skeleton.validate();
  auto check_blob = [&](const GaussianBlob& b, const char* what) {
    if (b.bone < 0 || b.bone >= skeleton.num_joints()) {
      throw InputError(std::string(what) + ": invalid bone index");
    }
    if (!(b.sigma > 0.0)) throw InputError(std::string(what) + ": sigma must be positive");
    if (!(b.density > 0.0)) throw InputError(std::string(what) + ": density must be positive");
    for (double c : {b.color.h, b.color.s, b.color.v}) {
      if (!(c >= 0.0 && c <= 1.0)) throw InputError(std::string(what) + ": color outside [0,1]");
    }
  };
  for (const auto& b : blobs) check_blob(b, "blob");
  if (static_cast<int>(detection_blobs.size()) != kNumLabels) {
    throw InputError("body: expected one detection blob per label");
  }
  for (const auto& b : detection_blobs) check_blob(b, "detection blob");
}

FkResult forward_kinematics(const Skeleton& skel, const Pose& pose) {
  if (pose.size() != skel.num_dofs()) throw InputError("pose size mismatch");
  if (!pose.allFinite()) throw NumericError("pose has non-finite entries");
  FkResult out;
  out.joint_tf.resize(skel.num_joints());
  out.dof_axis_world.resize(skel.num_dofs());
  out.dof_anchor_world.resize(skel.num_dofs());
  int d = 0;
  for (int j = 0; j < skel.num_joints(); ++j) {
    RigidTransform t;
    if (skel.joints[j].parent >= 0) t = out.joint_tf[skel.joints[j].parent];
    t.t += t.R * skel.joints[j].offset;
    while (d < skel.num_dofs() && skel.dofs[d].joint == j) {
      out.dof_axis_world[d] = t.R * skel.dofs[d].axis;
      out.dof_anchor_world[d] = t.t;
      t.R = t.R * Eigen::AngleAxisd(pose[d], skel.dofs[d].axis).toRotationMatrix();
      ++d;
    }
    out.joint_tf[j] = t;
  }
  return out;
}

std::vector<Vec3> joint_positions(const Skeleton& skel, const Pose& pose) {
  FkResult fk = forward_kinematics(skel, pose);
  std::vector<Vec3> out(skel.num_joints());
  for (int j = 0; j < skel.num_joints(); ++j) out[j] = fk.joint_tf[j].t;
  return out;
}

PosedBlob pose_blob(const GaussianBlob& blob, const FkResult& fk) {
  PosedBlob p;
  p.mean = fk.joint_tf[blob.bone] * blob.local_mean;
  p.sigma = blob.sigma;
  p.density = blob.density;
  p.color = blob.color;
  p.bone = blob.bone;
  return p;
}

std::vector<PosedBlob> pose_blobs(const BodyModel& body, const FkResult& fk) {
  std::vector<PosedBlob> out;
  out.reserve(body.blobs.size());
  for (const auto& b : body.blobs) out.push_back(pose_blob(b, fk));
  return out;
}

Eigen::Matrix3Xd point_jacobian(const Skeleton& skel, const FkResult& fk, int bone,
                                const Vec3& world_point) {
  Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, skel.num_dofs());
  for (int d : skel.ancestor_dofs(bone)) {
    jac.col(d) = fk.dof_axis_world[d].cross(world_point - fk.dof_anchor_world[d]);
  }
  return jac;
}

void accumulate_point_gradient(const Skeleton& skel, const FkResult& fk, int bone,
                               const Vec3& world_point, const Vec3& grad_point,
                               Eigen::VectorXd& grad_pose) {
  for (int d : skel.ancestor_dofs(bone)) {
    grad_pose[d] +=
        grad_point.dot(fk.dof_axis_world[d].cross(world_point - fk.dof_anchor_world[d]));
  }
}

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& a) { return Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()); }

GaussianBlob parse_blob(const json& jb, bool detection) {
  GaussianBlob b;
  b.bone = -1;
  if (detection) {
    b.bone = jb.at("joint").get<int>();
    if (jb.contains("local_mean")) b.local_mean = parse_vec3(jb.at("local_mean"));
  } else {
    b.bone = jb.at("bone").get<int>();
    b.local_mean = parse_vec3(jb.at("local_mean"));
  }
  b.sigma = jb.at("sigma").get<double>();
  b.density = jb.at("density").get<double>();
  if (jb.contains("hsv")) {
    b.color = Hsv{jb.at("hsv").at(0).get<double>(), jb.at("hsv").at(1).get<double>(),
                  jb.at("hsv").at(2).get<double>()};
  } else {
    b.color = Hsv{0.0, 0.0, 1.0};
  }
  return b;
}

}  // namespace

BodyModel load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
  BodyModel body;
  try {
    for (const auto& jj : j.at("joints")) {
      Joint joint;
      joint.name = jj.at("name").get<std::string>();
      joint.parent = jj.at("parent").get<int>();
      joint.offset = parse_vec3(jj.at("offset"));
      body.skeleton.joints.push_back(joint);
    }
    for (const auto& jd : j.at("dofs")) {
      Dof d;
      d.joint = jd.at("joint").get<int>();
      d.axis = parse_vec3(jd.at("axis")).normalized();
      d.lower = jd.at("limits").at(0).get<double>();
      d.upper = jd.at("limits").at(1).get<double>();
      body.skeleton.dofs.push_back(d);
    }
    for (const auto& jb : j.at("blobs")) body.blobs.push_back(parse_blob(jb, false));
    body.detection_blobs.resize(kNumLabels);
    std::vector<bool> seen(kNumLabels, false);
    for (const auto& jb : j.at("detection_blobs")) {
      int l = label_index(jb.at("label").get<std::string>());
      if (seen[l]) throw InputError("duplicate detection label");
      seen[l] = true;
      body.detection_blobs[l] = parse_blob(jb, true);
    }
    for (int l = 0; l < kNumLabels; ++l) {
      if (!seen[l]) throw InputError("missing detection label: " + label_names()[l]);
    }
  } catch (const json::exception& e) {
    throw InputError("body file " + path + ": " + e.what());
  }
  body.validate();
  return body;
}

void save_body(const BodyModel& body, const std::string& path) {
  json j;
  j["joints"] = json::array();
  for (const auto& joint : body.skeleton.joints) {
    j["joints"].push_back({{"name", joint.name},
                           {"parent", joint.parent},
                           {"offset", {joint.offset.x(), joint.offset.y(), joint.offset.z()}}});
  }
  j["dofs"] = json::array();
  for (const auto& d : body.skeleton.dofs) {
    j["dofs"].push_back({{"joint", d.joint},
                         {"axis", {d.axis.x(), d.axis.y(), d.axis.z()}},
                         {"limits", {d.lower, d.upper}}});
  }
  j["blobs"] = json::array();
  for (const auto& b : body.blobs) {
    j["blobs"].push_back(
        {{"bone", b.bone},
         {"local_mean", {b.local_mean.x(), b.local_mean.y(), b.local_mean.z()}},
         {"sigma", b.sigma},
         {"density", b.density},
         {"hsv", {b.color.h, b.color.s, b.color.v}}});
  }
  j["detection_blobs"] = json::array();
  for (int l = 0; l < kNumLabels; ++l) {
    const auto& b = body.detection_blobs[l];
    j["detection_blobs"].push_back(
        {{"label", label_names()[l]},
         {"joint", b.bone},
         {"local_mean", {b.local_mean.x(), b.local_mean.y(), b.local_mean.z()}},
         {"sigma", b.sigma},
         {"density", b.density}});
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace egocap
