#pragma once

#include "acgeom/types.h"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace acgeom::io {

// 17 significant digits; parses back to exactly the same double.
std::string FormatReal(double v);

// Strict parse of a whole token; throws kParseError.
double ParseReal(const std::string& token);

inline constexpr const char* kAcHeader = "x1,y1,x2,y2,a11,a12,a21,a22";

// AC files: header line, one correspondence per comma-separated line, '#'
// comments and blank lines ignored. Throws kParseError naming the line.
std::vector<AffineCorrespondence> ParseAcText(const std::string& text);
std::string FormatAcText(const std::vector<AffineCorrespondence>& acs);

// Matches files: x1,y1,x2,y2 rows (AC rows are accepted, the affine part is
// ignored); optional header.
std::vector<PointPair> ParseMatchesText(const std::string& text);

// Points files: "x y" or "x,y" per line.
std::vector<Point2> ParsePointsText(const std::string& text);

// 3x3 matrix: nine whitespace-separated reals, row-major, on one or three
// lines. Throws kParseError for bad tokens, kDimensionMismatch when the count
// is not nine.
Mat3 ParseMatrixText(const std::string& text);
std::string FormatMatrixText(const Mat3& m);

// Pose: line 1 rotation (9 reals row-major), line 2 translation (3 reals).
RelativePose ParsePoseText(const std::string& text);
std::string FormatPoseText(const RelativePose& pose);

// Intrinsics: "fx fy cx cy [skew]".
CameraIntrinsics ParseIntrinsicsText(const std::string& text);
std::string FormatIntrinsicsText(const CameraIntrinsics& K);

// Labels / masks: one 0 or 1 per line.
std::vector<bool> ParseLabelsText(const std::string& text);
std::string FormatLabelsText(const std::vector<bool>& labels);

// Throws kIoError.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

// Key-value run report. Lines are "key = value"; config values are echoed
// verbatim, metrics and timings are reals.
struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, double>> timing_ms;

  void AddConfig(const std::string& key, const std::string& value);
  void AddMetric(const std::string& key, double value);
  // Throws std::out_of_range when absent.
  double Metric(const std::string& key) const;

  std::string Serialize() const;
  // Throws kParseError.
  static RunReport Parse(const std::string& text);
};

}  // namespace acgeom::io
