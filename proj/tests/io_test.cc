#include "acgeom/io.h"

#include "acgeom/error.h"
#include "support.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

namespace acgeom::io {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message != nullptr) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "expected an acgeom::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(FormatReal, RoundTripsExactly) {
  test::Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = test::Gaussian(rng, 1.0) * std::pow(10.0, test::Uniform(rng, -30, 30));
    EXPECT_EQ(ParseReal(FormatReal(v)), v);
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, std::numeric_limits<double>::min(),
                   std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(ParseReal(FormatReal(v)), v);
  }
  EXPECT_EQ(FormatReal(0.5), "0.5");
}

TEST(ParseReal, RejectsGarbage) {
  for (const char* bad : {"", "1.0x", "abc", "1,5", " ", "1e999"}) {
    EXPECT_EQ(CodeOf([&] { ParseReal(bad); }), ErrorCode::kParseError) << bad;
  }
}

TEST(AcText, RoundTripIsByteIdentical) {
  test::Rng rng(5);
  std::vector<AffineCorrespondence> acs;
  for (int i = 0; i < 50; ++i) acs.push_back(test::RandomAc(rng));
  const std::string first = FormatAcText(acs);
  EXPECT_EQ(first.substr(0, first.find('\n')), kAcHeader);
  const auto parsed = ParseAcText(first);
  ASSERT_EQ(parsed.size(), acs.size());
  for (std::size_t i = 0; i < acs.size(); ++i) {
    EXPECT_EQ(parsed[i].p1, acs[i].p1);
    EXPECT_EQ(parsed[i].p2, acs[i].p2);
    EXPECT_EQ(parsed[i].A, acs[i].A);
  }
  EXPECT_EQ(FormatAcText(parsed), first);
}

TEST(AcText, CommentsBlankLinesAndNoHeader) {
  const auto acs = ParseAcText("# note\n\n1,2,3,4,1,0,0,1\n  # more\n5,6,7,8,2,0,0,2\n");
  ASSERT_EQ(acs.size(), 2u);
  EXPECT_EQ(acs[1].p2, Point2(7, 8));
  EXPECT_EQ(acs[1].A(0, 0), 2.0);
}

TEST(AcText, ErrorsNameTheLine) {
  std::string msg;
  EXPECT_EQ(CodeOf([&] { ParseAcText("x1,y1,x2,y2,a11,a12,a21,a22\n1,2,3,4,1,0,0,1\n1,2,3,4,1,0,0\n"); }, &msg),
            ErrorCode::kParseError);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_EQ(CodeOf([&] { ParseAcText("1,2,3,4,1,0,zero,1\n"); }, &msg),
            ErrorCode::kParseError);
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  EXPECT_EQ(CodeOf([&] { ParseAcText("1,2,3,4,1,0,inf,1\n"); }),
            ErrorCode::kParseError);
}

TEST(MatrixText, OneOrThreeLines) {
  const Mat3 a = ParseMatrixText("1 2 3 4 5 6 7 8 9\n");
  const Mat3 b = ParseMatrixText("1 2 3\n4 5 6\n7 8 9\n");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a(1, 2), 6.0);
  EXPECT_EQ(FormatMatrixText(ParseMatrixText(FormatMatrixText(a))), FormatMatrixText(a));
}

TEST(MatrixText, WrongCountIsDimensionMismatch) {
  EXPECT_EQ(CodeOf([] { ParseMatrixText("1 2 3 4 5 6 7 8\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ParseMatrixText("1 2 3 4 5 6 7 8 9 10\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ParseMatrixText("1 2 3 4 five 6 7 8 9\n"); }),
            ErrorCode::kParseError);
}

TEST(PoseText, RoundTrip) {
  test::Rng rng(8);
  RelativePose pose;
  pose.R = test::RandomRotation(rng, 1.0);
  pose.t = Vec3(0.3, -0.4, 0.866).normalized();
  const std::string text = FormatPoseText(pose);
  const RelativePose back = ParsePoseText(text);
  EXPECT_EQ(back.R, pose.R);
  EXPECT_EQ(back.t, pose.t);
  EXPECT_EQ(FormatPoseText(back), text);
  EXPECT_EQ(CodeOf([] { ParsePoseText("1 0 0 0 1 0 0 0 1\n"); }),
            ErrorCode::kDimensionMismatch);
}

TEST(IntrinsicsText, RoundTripAndOptionalSkew) {
  const CameraIntrinsics K = ParseIntrinsicsText("800 810 320 240\n");
  EXPECT_EQ(K.skew, 0.0);
  EXPECT_EQ(K.fy, 810.0);
  const std::string text = FormatIntrinsicsText(K);
  EXPECT_EQ(FormatIntrinsicsText(ParseIntrinsicsText(text)), text);
  EXPECT_EQ(CodeOf([] { ParseIntrinsicsText("800 320 240\n"); }),
            ErrorCode::kDimensionMismatch);
}

TEST(LabelsText, RoundTripAndErrors) {
  const std::vector<bool> labels{true, false, false, true};
  EXPECT_EQ(FormatLabelsText(labels), "1\n0\n0\n1\n");
  EXPECT_EQ(ParseLabelsText("1\n0\n0\n1\n"), labels);
  std::string msg;
  EXPECT_EQ(CodeOf([&] { ParseLabelsText("1\n2\n"); }, &msg), ErrorCode::kParseError);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(PointsText, SpacesOrCommas) {
  const auto pts = ParsePointsText("1 2\n3,4\n");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1], Point2(3, 4));
  EXPECT_EQ(CodeOf([] { ParsePointsText("1 2 3\n"); }), ErrorCode::kParseError);
}

TEST(MatchesText, AcceptsAcRows) {
  const auto m = ParseMatchesText("x1,y1,x2,y2\n1,2,3,4\n5,6,7,8,1,0,0,1\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].p2, Point2(7, 8));
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([] { ReadFile("/nonexistent/dir/file.txt"); }), ErrorCode::kIoError);
  EXPECT_EQ(CodeOf([] { WriteFile("/nonexistent/dir/file.txt", "x"); }),
            ErrorCode::kIoError);
}

TEST(RunReport, RoundTrip) {
  RunReport r;
  r.command = "estimate";
  r.seed = 18446744073709551615ull;
  r.AddConfig("acs", "data/a b.csv");
  r.AddConfig("threshold", "0.5");
  r.AddConfig("csv", "");
  r.AddMetric("score", 0.1 + 0.2);
  r.AddMetric("inliers", 120);
  r.timing_ms.emplace_back("total", 12.5);
  const std::string text = r.Serialize();
  const RunReport back = RunReport::Parse(text);
  EXPECT_EQ(back.command, r.command);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.config, r.config);
  EXPECT_EQ(back.metrics, r.metrics);
  EXPECT_EQ(back.timing_ms, r.timing_ms);
  EXPECT_EQ(back.Serialize(), text);
  EXPECT_EQ(back.Metric("score"), 0.1 + 0.2);
  EXPECT_THROW(back.Metric("missing"), std::out_of_range);
  EXPECT_EQ(CodeOf([] { RunReport::Parse("command estimate\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { RunReport::Parse("bogus = 1\n"); }), ErrorCode::kParseError);
}

}  // namespace
}  // namespace acgeom::io
