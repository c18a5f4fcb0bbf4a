#pragma once

#include <string>
#include <vector>

#include "egocap/body.hpp"
#include "egocap/fisheye.hpp"
#include "egocap/heatmap.hpp"
#include "egocap/image.hpp"

namespace egocap {

struct PointAnnotation {
  Vec2 pixel = Vec2::Zero();
  bool visible = false;
};

// Ground-truthed stereo frame: rendered images, detector-style heat maps, and
// the pose / joint / label annotations they were rendered from.
struct SyntheticFrame {
  Image left, right;
  HeatMapSet maps;
  Pose pose;
  std::vector<Vec3> joints3d;              // world joint centers
  std::vector<Vec3> labels3d;              // world label anchor points
  std::vector<PointAnnotation> joints2d[2];  // per camera, joint order
  std::vector<PointAnnotation> labels2d[2];  // per camera, label order

  const Image& image(Side s) const { return s == Side::kLeft ? left : right; }
  Image& image(Side s) { return s == Side::kLeft ? left : right; }
};

struct SynthConfig {
  Hsv background{0.55, 0.15, 0.9};
  const Image* background_tile = nullptr;  // tiled across the frame when set
  int width = 0;    // 0: rig native resolution, else the rig is rescaled
  int height = 0;
  int nodes = 64;
  double cull_eps = 1e-8;       // invisible at 8-bit quantization
  double bump_sigma_cells = 2.0;  // heat-map confidence spread
  int threads = 1;
};

// Renders both fisheye views of the posed body over the background and builds
// per-label Gaussian heat-map bumps at the projected label points. Labels that
// project outside the field of view get an all-zero map.
SyntheticFrame generate_frame(const BodyModel& body, const StereoRig& rig, const Pose& pose,
                              const SynthConfig& cfg = {});

// Sagittal-mirror counterpart tables and pose remap. Joint names pair by their
// _l/_r suffix; unsuffixed joints are their own counterpart.
std::vector<int> mirror_joint_table(const Skeleton& skel);
Pose mirror_pose(const Skeleton& skel, const Pose& pose);

// Turns the frame into its mirror sample: images swap cameras and flip
// horizontally, label and joint identities swap sides, annotations and heat
// maps transform accordingly, and the ground truth becomes the mirrored pose.
// Requires a rig that is symmetric about the body's sagittal plane.
SyntheticFrame mirror_augment(const SyntheticFrame& frame, const BodyModel& body,
                              const StereoRig& rig);

// Value-channel gamma curve, gamma in [0.5, 2]; hue and saturation unchanged.
Image gamma_jitter(const Image& image, double gamma);

// Zoom about the image center by factor in [0.85, 1.15] at fixed resolution
// (bilinear in RGB). Training-time augmentation parity; unused by the tracker.
Image scale_jitter(const Image& image, double factor);

// Built-in reference actor and head-mounted stereo rig used by the harness
// whenever no model files are supplied.
BodyModel default_body();
StereoRig default_rig();

// Deterministic walking cycle within joint limits; period in frames.
Pose walking_pose(const Skeleton& skel, int frame, int period = 36);

// Frame file layout inside a sequence directory.
std::string frame_image_path(const std::string& dir, Side side, int index);
std::string frame_maps_path(const std::string& dir, Side side, int index);
std::string frame_truth_path(const std::string& dir, int index);

void save_frame(const SyntheticFrame& frame, const std::string& dir, int index);

// Ground-truth sidecar contents (pose + annotations) for evaluation.
struct TruthRecord {
  Pose pose;
  std::vector<Vec3> joints3d;
  std::vector<Vec3> labels3d;
  std::vector<PointAnnotation> joints2d[2];
  std::vector<PointAnnotation> labels2d[2];
};

TruthRecord load_truth(const std::string& path);

}  // namespace egocap
