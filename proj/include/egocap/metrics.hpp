#pragma once

#include <vector>

#include "egocap/body.hpp"
#include "egocap/synth.hpp"

namespace egocap {

struct PckResult {
  std::vector<double> per_label;  // percentage; 100 when a label has no samples
  double mean = 0.0;              // over labels that have samples
};

// Percentage of predictions within `threshold` pixels (Euclidean, inclusive) of
// ground truth, per label and averaged. Outer index frames, inner labels;
// invisible ground-truth points are skipped, invisible predictions of visible
// points count as misses.
PckResult pck(const std::vector<std::vector<PointAnnotation>>& pred,
              const std::vector<std::vector<PointAnnotation>>& gt, double threshold);

// Trapezoidal area under pck_percent(threshold)/100, normalized by the
// threshold range. Thresholds must be sorted ascending (repeats allowed).
double auc(const std::vector<double>& thresholds, const std::vector<double>& pck_percent);

// Mean Euclidean distance over frames and joints.
double mean_joint_error_3d(const std::vector<std::vector<Vec3>>& pred,
                           const std::vector<std::vector<Vec3>>& gt);
double mean_joint_error_3d(const Skeleton& skel, const std::vector<Pose>& pred,
                           const std::vector<Pose>& gt);

}  // namespace egocap
