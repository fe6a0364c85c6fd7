#include "artdir/kabsch.hpp"

#include <Eigen/Dense>

namespace artdir {

namespace {
constexpr double kSigmaMinRel = 1e-12;
}

RigidTransform fit_rigid(const Correspondences& c) {
  const std::size_t n = c.size();
  if (c.targets.size() != n) {
    throw DataError("fit_rigid: source/target length mismatch");
  }
  if (n < 3) {
    throw InsufficientPoints("fit_rigid: need at least 3 correspondences");
  }

  Vec3 cs = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    cs += c.sources[i];
    ct += c.targets[i];
  }
  cs /= static_cast<double>(n);
  ct /= static_cast<double>(n);

  // Cross-covariance H = sum s_i' t_i'^T and source scatter for the
  // degeneracy test.
  Mat3 h = Mat3::Zero();
  Mat3 scatter = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 s = c.sources[i] - cs;
    const Vec3 t = c.targets[i] - ct;
    h += s * t.transpose();
    scatter += s * s.transpose();
  }

  // Rank(scatter) < 2 means collinear or coincident sources: the rotation
  // about the residual axis is unconstrained. Planar sets (rank 2) are fine.
  {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
    const Vec3 ev = eig.eigenvalues();  // ascending
    if (!(ev(1) > kSigmaMinRel * ev(2))) {
      throw DegenerateConfiguration(
          "fit_rigid: collinear or coincident source points");
    }
  }

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();
  return RigidTransform{r, ct - r * cs};
}

double residual(const Correspondences& c, const RigidTransform& t) {
  const std::size_t n = c.size();
  if (n == 0 || c.targets.size() != n) {
    throw DataError("residual: empty or mismatched correspondences");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += (t * c.sources[i] - c.targets[i]).squaredNorm();
  }
  return acc / static_cast<double>(n);
}

}  // namespace artdir
