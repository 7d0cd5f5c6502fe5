#pragma once

#include "acgeom/types.h"

#include <cstdint>
#include <optional>
#include <vector>

namespace acgeom {

// Plane n . X = offset in the first camera frame.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 5.0;
};

struct CameraSpec {
  CameraIntrinsics K1{800.0, 800.0, 320.0, 240.0, 0.0};
  CameraIntrinsics K2{800.0, 800.0, 320.0, 240.0, 0.0};
  double width = 640.0;
  double height = 480.0;
  double baseline = 1.0;
  double max_rotation_deg = 15.0;
  // When set, R and the translation direction are taken from here instead of
  // being drawn at random; the translation is rescaled to `baseline`.
  std::optional<RelativePose> fixed_pose;
  // Plane offsets are drawn from [min_depth, max_depth].
  double min_depth = 4.0;
  double max_depth = 8.0;
  double max_plane_tilt_deg = 30.0;
};

struct SyntheticScene {
  CameraIntrinsics K1;
  CameraIntrinsics K2;
  double width = 0.0;
  double height = 0.0;
  RelativePose pose;      // unit translation direction
  double baseline = 1.0;  // metric length of the translation
  std::vector<Plane> planes;
  FundamentalMatrix F_gt;
  std::vector<Homography> H_gt;  // one per plane, pixel coordinates
};

struct NoiseSpec {
  double point_sigma = 0.0;       // pixels, added to each coordinate of p2
  double affine_rel_sigma = 0.0;  // a_ij *= 1 + N(0, affine_rel_sigma)
  double outlier_fraction = 0.0;  // in [0, 1)
};

struct SampledAcs {
  std::vector<AffineCorrespondence> acs;
  std::vector<bool> inlier;
  std::vector<int> plane;  // -1 for outliers
};

// Seeded random camera pair and planes. Throws kDegenerateCamera for a zero
// baseline or planes that are not in front of the first camera.
SyntheticScene GenerateScene(std::uint64_t seed, int n_planes,
                             const CameraSpec& camera = {});

// n correspondences; inliers are spread round-robin across the planes, each
// sampled uniformly in image 1, back-projected and kept when visible in
// image 2. Exactly llround(outlier_fraction * n) are replaced by uniform
// random points with random (det > 0) affinities. Noise is drawn from its own
// stream, so for a fixed seed the noise-free geometry and the outlier set do
// not depend on the noise levels.
SampledAcs SampleAcs(const SyntheticScene& scene, int n, const NoiseSpec& noise,
                     std::uint64_t seed);

}  // namespace acgeom
