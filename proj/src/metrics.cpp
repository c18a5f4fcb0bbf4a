#include "egocap/metrics.hpp"

#include <cmath>

#include "egocap/errors.hpp"

namespace egocap {

PckResult pck(const std::vector<std::vector<PointAnnotation>>& pred,
              const std::vector<std::vector<PointAnnotation>>& gt, double threshold) {
  if (!(threshold > 0.0)) throw InputError("pck: threshold must be positive");
  if (pred.size() != gt.size()) throw InputError("pck: sequence lengths differ");
  if (pred.empty()) throw InputError("pck: empty sequences");
  size_t labels = gt[0].size();
  for (size_t t = 0; t < gt.size(); ++t) {
    if (pred[t].size() != labels || gt[t].size() != labels) {
      throw InputError("pck: label sets do not match");
    }
  }
  std::vector<int> hits(labels, 0), total(labels, 0);
  for (size_t t = 0; t < gt.size(); ++t) {
    for (size_t l = 0; l < labels; ++l) {
      if (!gt[t][l].visible) continue;
      ++total[l];
      if (pred[t][l].visible && (pred[t][l].pixel - gt[t][l].pixel).norm() <= threshold) {
        ++hits[l];
      }
    }
  }
  PckResult out;
  out.per_label.resize(labels);
  double sum = 0.0;
  int counted = 0;
  for (size_t l = 0; l < labels; ++l) {
    out.per_label[l] = total[l] == 0 ? 100.0 : 100.0 * hits[l] / total[l];
    if (total[l] > 0) {
      sum += out.per_label[l];
      ++counted;
    }
  }
  out.mean = counted == 0 ? 100.0 : sum / counted;
  return out;
}

double auc(const std::vector<double>& thresholds, const std::vector<double>& pck_percent) {
  if (thresholds.size() != pck_percent.size()) throw InputError("auc: size mismatch");
  if (thresholds.size() < 2) throw InputError("auc: need at least two thresholds");
  for (size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] < thresholds[i - 1]) throw InputError("auc: thresholds must be sorted");
  }
  double range = thresholds.back() - thresholds.front();
  if (!(range > 0.0)) throw InputError("auc: zero threshold range");
  double area = 0.0;
  for (size_t i = 1; i < thresholds.size(); ++i) {
    area += 0.5 * (pck_percent[i] + pck_percent[i - 1]) / 100.0 *
            (thresholds[i] - thresholds[i - 1]);
  }
  return area / range;
}

double mean_joint_error_3d(const std::vector<std::vector<Vec3>>& pred,
                           const std::vector<std::vector<Vec3>>& gt) {
  if (pred.size() != gt.size()) throw InputError("joint error: sequence lengths differ");
  if (pred.empty()) throw InputError("joint error: empty sequences");
  double sum = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < gt.size(); ++t) {
    if (pred[t].size() != gt[t].size()) throw InputError("joint error: joint counts differ");
    for (size_t j = 0; j < gt[t].size(); ++j) {
      sum += (pred[t][j] - gt[t][j]).norm();
      ++count;
    }
  }
  if (count == 0) throw InputError("joint error: no joints");
  return sum / static_cast<double>(count);
}

double mean_joint_error_3d(const Skeleton& skel, const std::vector<Pose>& pred,
                           const std::vector<Pose>& gt) {
  if (pred.size() != gt.size()) throw InputError("joint error: sequence lengths differ");
  std::vector<std::vector<Vec3>> a, b;
  a.reserve(pred.size());
  b.reserve(gt.size());
  for (size_t t = 0; t < pred.size(); ++t) {
    a.push_back(joint_positions(skel, pred[t]));
    b.push_back(joint_positions(skel, gt[t]));
  }
  return mean_joint_error_3d(a, b);
}

}  // namespace egocap
