#include "acgeom/synth.h"

#include "acgeom/affine.h"
#include "acgeom/error.h"
#include "acgeom/solvers.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace acgeom {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Vec3 RandomUnitVector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Mat3 RandomRotation(std::mt19937_64& rng, double max_angle) {
  std::uniform_real_distribution<double> angle(0.0, max_angle);
  const Vec3 axis = RandomUnitVector(rng);
  return Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix();
}

// Random affinity with positive determinant: log-uniform scale, any rotation,
// and a unit-determinant SPD shape with moderate anisotropy.
Mat2 RandomAffinity(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_scale(-0.7, 0.7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                               std::numbers::pi);
  std::uniform_real_distribution<double> stretch(-0.5, 0.5);
  const double k = stretch(rng);
  const Mat2 Q = Rotation2(angle(rng));
  const Mat2 shape = Q * Eigen::Vector2d(std::exp(k), std::exp(-k)).asDiagonal() *
                     Q.transpose();
  AffineDecomposition d;
  d.scale_ratio = std::exp(log_scale(rng));
  d.orientation_delta = angle(rng);
  d.residual_shape = shape - Mat2::Identity();
  return SynthesizeAffine(d);
}

}  // namespace

SyntheticScene GenerateScene(std::uint64_t seed, int n_planes,
                             const CameraSpec& camera) {
  if (n_planes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one plane");
  }
  camera.K1.Validate();
  camera.K2.Validate();
  if (!(camera.baseline > 0.0)) {
    throw Error(ErrorCode::kDegenerateCamera, "baseline must be nonzero");
  }
  if (!(camera.min_depth > 0.0) || !(camera.max_depth >= camera.min_depth)) {
    throw Error(ErrorCode::kDegenerateCamera,
                "planes must lie in front of the first camera");
  }
  if (!(camera.width > 0.0) || !(camera.height > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }

  std::mt19937_64 rng(seed);
  SyntheticScene scene;
  scene.K1 = camera.K1;
  scene.K2 = camera.K2;
  scene.width = camera.width;
  scene.height = camera.height;
  scene.baseline = camera.baseline;
  if (camera.fixed_pose) {
    if (!(camera.fixed_pose->t.norm() > 0.0)) {
      throw Error(ErrorCode::kDegenerateCamera, "translation must be nonzero");
    }
    scene.pose.R = camera.fixed_pose->R;
    scene.pose.t = camera.fixed_pose->t.normalized();
  } else {
    scene.pose.R = RandomRotation(rng, camera.max_rotation_deg * kDegToRad);
    scene.pose.t = RandomUnitVector(rng);
  }

  const Mat3 E = CrossMatrix(scene.pose.t) * scene.pose.R;
  scene.F_gt = FundamentalFromEssential(EssentialMatrix{E}, camera.K1, camera.K2);

  std::uniform_real_distribution<double> depth(camera.min_depth, camera.max_depth);
  std::uniform_real_distribution<double> tilt(0.0,
                                              camera.max_plane_tilt_deg * kDegToRad);
  std::uniform_real_distribution<double> azimuth(-std::numbers::pi,
                                                 std::numbers::pi);
  const Vec3 t_metric = camera.baseline * scene.pose.t;
  for (int k = 0; k < n_planes; ++k) {
    const double az = azimuth(rng);
    const Vec3 axis(std::cos(az), std::sin(az), 0.0);
    Plane plane;
    plane.normal = Eigen::AngleAxisd(tilt(rng), axis) * Vec3::UnitZ();
    plane.offset = depth(rng);
    scene.planes.push_back(plane);

    Mat3 H = camera.K2.K() *
             (scene.pose.R + t_metric * plane.normal.transpose() / plane.offset) *
             camera.K1.Kinv();
    H /= H(2, 2);
    scene.H_gt.push_back(Homography{H});
  }
  return scene;
}

SampledAcs SampleAcs(const SyntheticScene& scene, int n, const NoiseSpec& noise,
                     std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  if (!(noise.point_sigma >= 0.0) || !(noise.affine_rel_sigma >= 0.0) ||
      !(noise.outlier_fraction >= 0.0) || !(noise.outlier_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid noise specification");
  }
  std::mt19937_64 rng(seed);
  // Separate stream for the noise: the geometry does not depend on NoiseSpec.
  std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> ux(0.0, scene.width);
  std::uniform_real_distribution<double> uy(0.0, scene.height);
  std::normal_distribution<double> pixel_noise(0.0, 1.0);

  const auto n_outliers =
      static_cast<std::size_t>(std::llround(noise.outlier_fraction * n));
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_outlier(order.size(), false);
  for (std::size_t i = 0; i < n_outliers; ++i) is_outlier[order[i]] = true;

  const Mat3 K1inv = scene.K1.Kinv();
  const Mat3 K2 = scene.K2.K();
  const Vec3 t_metric = scene.baseline * scene.pose.t;
  const int n_planes = static_cast<int>(scene.planes.size());

  SampledAcs out;
  out.acs.reserve(order.size());
  int next_plane = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    AffineCorrespondence ac;
    if (is_outlier[i]) {
      ac.p1 = Point2(ux(rng), uy(rng));
      ac.p2 = Point2(ux(rng), uy(rng));
      ac.A = RandomAffinity(rng);
      out.acs.push_back(ac);
      out.inlier.push_back(false);
      out.plane.push_back(-1);
      continue;
    }
    const int k = next_plane;
    next_plane = (next_plane + 1) % n_planes;
    const Plane& plane = scene.planes[static_cast<std::size_t>(k)];
    bool found = false;
    for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
      const Point2 p1(ux(rng), uy(rng));
      const Vec3 ray = K1inv * Homogeneous(p1);
      const double denom = plane.normal.dot(ray);
      if (!(denom > 1e-9)) continue;
      const Vec3 X1 = (plane.offset / denom) * ray;
      const Vec3 X2 = scene.pose.R * X1 + t_metric;
      if (!(X2.z() > 1e-9)) continue;
      const Vec3 q = K2 * X2;
      const Point2 p2(q.x() / q.z(), q.y() / q.z());
      if (p2.x() < 0.0 || p2.x() >= scene.width || p2.y() < 0.0 ||
          p2.y() >= scene.height) {
        continue;
      }
      ac.p1 = p1;
      ac.p2 = p2;
      ac.A = GtAffineFromHomography(scene.H_gt[static_cast<std::size_t>(k)], p1);
      found = true;
    }
    if (!found) {
      throw Error(ErrorCode::kDegenerateCamera,
                  "plane " + std::to_string(k) + " is not visible in both views");
    }
    if (noise.point_sigma > 0.0) {
      ac.p2.x() += noise.point_sigma * pixel_noise(noise_rng);
      ac.p2.y() += noise.point_sigma * pixel_noise(noise_rng);
    }
    if (noise.affine_rel_sigma > 0.0) {
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          ac.A(r, c) *= 1.0 + noise.affine_rel_sigma * pixel_noise(noise_rng);
        }
      }
    }
    out.acs.push_back(ac);
    out.inlier.push_back(true);
    out.plane.push_back(k);
  }
  return out;
}

}  // namespace acgeom
