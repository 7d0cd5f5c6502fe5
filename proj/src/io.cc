#include "acgeom/io.h"

#include "acgeom/error.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acgeom::io {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Non-blank, non-comment lines paired with their 1-based line numbers.
std::vector<std::pair<int, std::string>> DataLines(const std::string& text) {
  std::vector<std::pair<int, std::string>> lines;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(number, t);
  }
  return lines;
}

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(Trim(field));
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::vector<std::string> Tokens(const std::string& text) {
  std::vector<std::string> tokens;
  for (const auto& [number, line] : DataLines(text)) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  return tokens;
}

std::vector<double> Reals(const std::vector<std::string>& fields, int line) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) {
    try {
      out.push_back(ParseReal(f));
    } catch (const Error&) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                              ": invalid number '" + f + "'");
    }
  }
  return out;
}

bool IsHeader(const std::string& line) {
  return !line.empty() && (line.front() == 'x' || line.front() == 'X');
}

}  // namespace

std::string FormatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseReal(const std::string& token) {
  if (token.empty()) throw Error(ErrorCode::kParseError, "empty number");
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  // ERANGE on underflow still yields the correctly rounded subnormal.
  if (end != begin + token.size() || (errno == ERANGE && std::isinf(v))) {
    throw Error(ErrorCode::kParseError, "invalid number '" + token + "'");
  }
  return v;
}

std::vector<AffineCorrespondence> ParseAcText(const std::string& text) {
  std::vector<AffineCorrespondence> acs;
  bool first = true;
  for (const auto& [number, line] : DataLines(text)) {
    if (first && IsHeader(line)) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = Split(line, ',');
    if (fields.size() != 8) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": expected 8 fields, got " +
                      std::to_string(fields.size()));
    }
    const auto v = Reals(fields, number);
    AffineCorrespondence ac;
    ac.p1 = Point2(v[0], v[1]);
    ac.p2 = Point2(v[2], v[3]);
    ac.A << v[4], v[5], v[6], v[7];
    if (!AllFinite(ac)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": non-finite value");
    }
    acs.push_back(ac);
  }
  return acs;
}

std::string FormatAcText(const std::vector<AffineCorrespondence>& acs) {
  std::string out = std::string(kAcHeader) + "\n";
  for (const auto& ac : acs) {
    const double v[8] = {ac.p1.x(), ac.p1.y(), ac.p2.x(), ac.p2.y(),
                         ac.A(0, 0), ac.A(0, 1), ac.A(1, 0), ac.A(1, 1)};
    for (int i = 0; i < 8; ++i) {
      if (i > 0) out += ',';
      out += FormatReal(v[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<PointPair> ParseMatchesText(const std::string& text) {
  std::vector<PointPair> matches;
  bool first = true;
  for (const auto& [number, line] : DataLines(text)) {
    if (first && IsHeader(line)) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = Split(line, ',');
    if (fields.size() != 4 && fields.size() != 8) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) +
                      ": expected 4 or 8 fields, got " +
                      std::to_string(fields.size()));
    }
    const auto v = Reals(fields, number);
    matches.push_back({Point2(v[0], v[1]), Point2(v[2], v[3])});
  }
  return matches;
}

std::vector<Point2> ParsePointsText(const std::string& text) {
  std::vector<Point2> points;
  for (auto [number, line] : DataLines(text)) {
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": expected 2 coordinates");
    }
    const auto v = Reals(fields, number);
    points.emplace_back(v[0], v[1]);
  }
  return points;
}

Mat3 ParseMatrixText(const std::string& text) {
  const auto tokens = Tokens(text);
  std::vector<double> v;
  for (const auto& t : tokens) v.push_back(ParseReal(t));
  if (v.size() != 9) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected 9 matrix entries, got " + std::to_string(v.size()));
  }
  Mat3 m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return m;
}

std::string FormatMatrixText(const Mat3& m) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    out += FormatReal(m(r, 0)) + ' ' + FormatReal(m(r, 1)) + ' ' +
           FormatReal(m(r, 2)) + '\n';
  }
  return out;
}

RelativePose ParsePoseText(const std::string& text) {
  const auto lines = DataLines(text);
  if (lines.size() != 2) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pose file needs exactly 2 lines, got " +
                    std::to_string(lines.size()));
  }
  std::vector<std::vector<double>> rows;
  for (const auto& [number, line] : lines) {
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    rows.push_back(Reals(fields, number));
  }
  if (rows[0].size() != 9 || rows[1].size() != 3) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pose file needs 9 rotation and 3 translation entries");
  }
  RelativePose pose;
  const auto& r = rows[0];
  pose.R << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
  pose.t = Vec3(rows[1][0], rows[1][1], rows[1][2]);
  return pose;
}

std::string FormatPoseText(const RelativePose& pose) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (r + c > 0) out += ' ';
      out += FormatReal(pose.R(r, c));
    }
  }
  out += '\n' + FormatReal(pose.t.x()) + ' ' + FormatReal(pose.t.y()) + ' ' +
         FormatReal(pose.t.z()) + '\n';
  return out;
}

CameraIntrinsics ParseIntrinsicsText(const std::string& text) {
  const auto tokens = Tokens(text);
  if (tokens.size() != 4 && tokens.size() != 5) {
    throw Error(ErrorCode::kDimensionMismatch,
                "intrinsics need 'fx fy cx cy [skew]'");
  }
  std::vector<double> v;
  for (const auto& t : tokens) v.push_back(ParseReal(t));
  CameraIntrinsics K{v[0], v[1], v[2], v[3], v.size() == 5 ? v[4] : 0.0};
  K.Validate();
  return K;
}

std::string FormatIntrinsicsText(const CameraIntrinsics& K) {
  return FormatReal(K.fx) + ' ' + FormatReal(K.fy) + ' ' + FormatReal(K.cx) +
         ' ' + FormatReal(K.cy) + ' ' + FormatReal(K.skew) + '\n';
}

std::vector<bool> ParseLabelsText(const std::string& text) {
  std::vector<bool> labels;
  for (const auto& [number, line] : DataLines(text)) {
    if (line == "0") {
      labels.push_back(false);
    } else if (line == "1") {
      labels.push_back(true);
    } else {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": expected 0 or 1");
    }
  }
  return labels;
}

std::string FormatLabelsText(const std::vector<bool>& labels) {
  std::string out;
  for (bool b : labels) out += b ? "1\n" : "0\n";
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

void RunReport::AddConfig(const std::string& key, const std::string& value) {
  config.emplace_back(key, value);
}

void RunReport::AddMetric(const std::string& key, double value) {
  metrics.emplace_back(key, value);
}

double RunReport::Metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("no metric '" + key + "'");
}

std::string RunReport::Serialize() const {
  std::string out = "command = " + command + "\nseed = " + std::to_string(seed) + "\n";
  for (const auto& [k, v] : config) out += "config." + k + " = " + v + "\n";
  for (const auto& [k, v] : metrics) out += "metric." + k + " = " + FormatReal(v) + "\n";
  for (const auto& [k, v] : timing_ms) out += "timing_ms." + k + " = " + FormatReal(v) + "\n";
  return out;
}

RunReport RunReport::Parse(const std::string& text) {
  RunReport report;
  for (const auto& [number, line] : DataLines(text)) {
    // Trimming strips the trailing space of an empty value.
    const std::string padded = line + ' ';
    const auto eq = padded.find(" = ");
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = padded.substr(0, eq);
    const std::string value = line.substr(std::min(eq + 3, line.size()));
    auto starts = [&](const char* prefix) { return key.rfind(prefix, 0) == 0; };
    auto rest = [&](const char* prefix) {
      return key.substr(std::string(prefix).size());
    };
    if (key == "command") {
      report.command = value;
    } else if (key == "seed") {
      report.seed = std::stoull(value);
    } else if (starts("config.")) {
      report.config.emplace_back(rest("config."), value);
    } else if (starts("metric.")) {
      report.metrics.emplace_back(rest("metric."), ParseReal(value));
    } else if (starts("timing_ms.")) {
      report.timing_ms.emplace_back(rest("timing_ms."), ParseReal(value));
    } else {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
  }
  return report;
}

}  // namespace acgeom::io
