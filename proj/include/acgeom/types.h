#pragma once

#include <Eigen/Core>

#include <vector>

namespace acgeom {

using Point2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// A point pair plus the 2x2 local affine frame mapping an infinitesimal
// neighbourhood of p1 onto the neighbourhood of p2, i.e. A = d(p2)/d(p1).
struct AffineCorrespondence {
  Point2 p1 = Point2::Zero();
  Point2 p2 = Point2::Zero();
  Mat2 A = Mat2::Identity();
};

struct PointPair {
  Point2 p1 = Point2::Zero();
  Point2 p2 = Point2::Zero();
};

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;

  Mat3 K() const;
  Mat3 Kinv() const;
  // Throws kInvalidArgument unless fx > 0 and fy > 0.
  void Validate() const;
};

struct FundamentalMatrix {
  Mat3 F = Mat3::Zero();
};

struct EssentialMatrix {
  Mat3 E = Mat3::Zero();
};

struct Homography {
  Mat3 H = Mat3::Identity();
};

// Rotation plus unit translation direction of camera 2 relative to camera 1:
// X2 = R * X1 + t.
struct RelativePose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::UnitX();
};

inline Vec3 Homogeneous(const Point2& p) { return Vec3(p.x(), p.y(), 1.0); }

std::vector<PointPair> ToPointPairs(const std::vector<AffineCorrespondence>& acs);

// Skew-symmetric cross-product matrix [v]_x.
Mat3 CrossMatrix(const Vec3& v);

bool AllFinite(const AffineCorrespondence& ac);

}  // namespace acgeom
