#include "acgeom/types.h"

#include "acgeom/error.h"

#include <cmath>

namespace acgeom {

Mat3 CameraIntrinsics::K() const {
  Mat3 K;
  K << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return K;
}

Mat3 CameraIntrinsics::Kinv() const {
  Mat3 Ki;
  Ki << 1.0 / fx, -skew / (fx * fy), (skew * cy - cx * fy) / (fx * fy),
      0.0, 1.0 / fy, -cy / fy, 0.0, 0.0, 1.0;
  return Ki;
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy) ||
      !std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(skew)) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera intrinsics need finite values and fx, fy > 0");
  }
}

std::vector<PointPair> ToPointPairs(
    const std::vector<AffineCorrespondence>& acs) {
  std::vector<PointPair> pairs;
  pairs.reserve(acs.size());
  for (const auto& ac : acs) pairs.push_back({ac.p1, ac.p2});
  return pairs;
}

Mat3 CrossMatrix(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

bool AllFinite(const AffineCorrespondence& ac) {
  return ac.p1.allFinite() && ac.p2.allFinite() && ac.A.allFinite();
}

}  // namespace acgeom
