#include "acgeom/cli.h"

#include "acgeom/error.h"
#include "acgeom/io.h"
#include "acgeom/metrics.h"
#include "acgeom/residuals.h"
#include "acgeom/robust.h"
#include "acgeom/solvers.h"
#include "acgeom/synth.h"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

namespace acgeom::cli {
namespace fs = std::filesystem;
namespace {

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kPointAtInfinity:
      return kExitData;
    case ErrorCode::kNoModelFound:
    case ErrorCode::kDegenerateConfiguration:
    case ErrorCode::kCheiralityAmbiguity:
    case ErrorCode::kSingularNormalMatrix:
      return kExitEstimation;
    case ErrorCode::kTooFewCorrespondences:
    case ErrorCode::kTooFewConstraints:
      return kExitInsufficient;
    default:
      return kExitInput;
  }
}

// Reads and parses a file, prefixing parse failures with the path.
template <class Parser>
auto Load(const std::string& path, Parser parse) {
  const std::string text = io::ReadFile(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

struct Common {
  std::string report_path;
  bool timing = false;
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--report", c.report_path, "Also write the report here");
  cmd->add_flag("--timing", c.timing,
                "Include wall-clock timings (makes reports non-reproducible)");
}

class Stopwatch {
 public:
  double Ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void Emit(io::RunReport& report, const Common& c, const Stopwatch& clock,
          std::ostream& out) {
  if (c.timing) report.timing_ms.emplace_back("total", clock.Ms());
  const std::string text = report.Serialize();
  out << text;
  if (!c.report_path.empty()) io::WriteFile(c.report_path, text);
}

void Summarize(io::RunReport& report, const std::string& name,
               const std::vector<double>& values) {
  if (values.empty()) return;
  double sum = 0.0;
  double max = 0.0;
  for (double v : values) {
    sum += v;
    max = std::max(max, v);
  }
  report.AddMetric(name + ".mean", sum / static_cast<double>(values.size()));
  report.AddMetric(name + ".median", Median(values));
  report.AddMetric(name + ".max", max);
}

std::vector<std::pair<std::string, fs::path>> SortedFiles(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, dir.string() + " is not a directory");
  }
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files.emplace_back(entry.path().stem().string(), entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path FindByStem(const fs::path& dir, const std::string& stem) {
  for (const auto& [s, path] : SortedFiles(dir)) {
    if (s == stem) return path;
  }
  throw Error(ErrorCode::kIoError,
              "no ground truth for '" + stem + "' in " + dir.string());
}

// ---------------------------------------------------------------- residuals

struct ResidualsArgs {
  std::string acs, F, out;
  Common common;
};

int RunResiduals(const ResidualsArgs& a, std::ostream& out) {
  Stopwatch clock;
  const auto acs = Load(a.acs, io::ParseAcText);
  const FundamentalMatrix F{Load(a.F, io::ParseMatrixText)};

  std::string table = "index,E_PC,SD_P,M0,N0,SD_A1,SD_A2\n";
  std::vector<double> epc, sdp, m0, n0, sda1, sda2;
  for (std::size_t i = 0; i < acs.size(); ++i) {
    const auto& ac = acs[i];
    const double e = EpipolarResidual(ac.p1, ac.p2, F);
    const double sp = SampsonPoint(ac.p1, ac.p2, F);
    const auto ar = AffineConstraintResidual(ac, F);
    const auto sa = SampsonAffine(ac, F);
    table += std::to_string(i) + ',' + io::FormatReal(e) + ',' +
             io::FormatReal(sp) + ',' + io::FormatReal(ar.m0) + ',' +
             io::FormatReal(ar.n0) + ',' + io::FormatReal(sa.first) + ',' +
             io::FormatReal(sa.second) + '\n';
    epc.push_back(std::abs(e));
    sdp.push_back(sp);
    m0.push_back(std::abs(ar.m0));
    n0.push_back(std::abs(ar.n0));
    sda1.push_back(sa.first);
    sda2.push_back(sa.second);
  }
  if (!a.out.empty()) io::WriteFile(a.out, table);

  io::RunReport report;
  report.command = "residuals";
  report.AddConfig("acs", a.acs);
  report.AddConfig("F", a.F);
  report.AddConfig("out", a.out);
  report.AddMetric("n", static_cast<double>(acs.size()));
  Summarize(report, "abs_E_PC", epc);
  Summarize(report, "SD_P", sdp);
  Summarize(report, "abs_M0", m0);
  Summarize(report, "abs_N0", n0);
  Summarize(report, "SD_A1", sda1);
  Summarize(report, "SD_A2", sda2);
  Emit(report, a.common, clock, out);
  return kExitOk;
}

// ----------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string acs, model = "fundamental", intrinsics, intrinsics2, out_dir = ".";
  RansacConfig cfg;
  bool no_lo = false;
  Common common;
};

int RunEstimate(EstimateArgs a, std::ostream& out) {
  Stopwatch clock;
  const auto acs = Load(a.acs, io::ParseAcText);
  a.cfg.lo_enabled = !a.no_lo;
  fs::create_directories(a.out_dir);

  io::RunReport report;
  report.command = "estimate";
  report.seed = a.cfg.seed;
  report.AddConfig("acs", a.acs);
  report.AddConfig("model", a.model);
  report.AddConfig("threshold", io::FormatReal(a.cfg.threshold));
  report.AddConfig("affine_weight", io::FormatReal(a.cfg.affine_weight));
  report.AddConfig("confidence", io::FormatReal(a.cfg.confidence));
  report.AddConfig("max_iterations", std::to_string(a.cfg.max_iterations));
  report.AddConfig("lo", a.cfg.lo_enabled ? "1" : "0");
  report.AddConfig("out_dir", a.out_dir);

  RobustEstimate est;
  const fs::path dir(a.out_dir);
  if (a.model == "fundamental") {
    est = RansacFundamental(acs, a.cfg);
  } else if (a.model == "homography") {
    est = RansacHomography(acs, {}, a.cfg);
  } else if (a.model == "essential") {
    if (a.intrinsics.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--model essential requires --intrinsics");
    }
    const auto K1 = Load(a.intrinsics, io::ParseIntrinsicsText);
    const auto K2 = a.intrinsics2.empty()
                        ? K1
                        : Load(a.intrinsics2, io::ParseIntrinsicsText);
    report.AddConfig("intrinsics", a.intrinsics);
    report.AddConfig("intrinsics2", a.intrinsics2);
    const PoseEstimate pe = RansacPose(acs, K1, K2, a.cfg);
    est = pe.estimate;
    io::WriteFile(dir / "pose.txt", io::FormatPoseText(pe.pose));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown model '" + a.model + "'");
  }
  io::WriteFile(dir / "model.txt", io::FormatMatrixText(est.model));
  io::WriteFile(dir / "inliers.txt", io::FormatLabelsText(est.inlier_mask));

  report.AddMetric("n", static_cast<double>(acs.size()));
  report.AddMetric("inliers", static_cast<double>(est.InlierCount()));
  report.AddMetric("iterations", est.iterations_run);
  report.AddMetric("score", est.score);
  Emit(report, a.common, clock, out);
  return kExitOk;
}

// ----------------------------------------------------------------- eval-mma

struct EvalMmaArgs {
  std::string matches, gt, csv;
  Common common;
};

int RunEvalMma(const EvalMmaArgs& a, std::ostream& out) {
  Stopwatch clock;
  const auto files = SortedFiles(a.matches);
  if (files.empty()) {
    throw Error(ErrorCode::kIoError, "no match files in " + a.matches);
  }
  io::RunReport report;
  report.command = "eval-mma";
  report.AddConfig("matches", a.matches);
  report.AddConfig("gt", a.gt);
  report.AddConfig("csv", a.csv);

  std::vector<MmaCurve> curves;
  int n_matches = 0;
  for (const auto& [stem, path] : files) {
    const fs::path gt_path = FindByStem(a.gt, stem);
    const auto matches = Load(path.string(), io::ParseMatchesText);
    const Homography H{Load(gt_path.string(), io::ParseMatrixText)};
    curves.push_back(ComputeMmaCurve(matches, H));
    n_matches += static_cast<int>(matches.size());
    report.AddMetric("pair." + stem + ".n", static_cast<double>(matches.size()));
    report.AddMetric("pair." + stem + ".mma_score", MmaScore(curves.back()));
  }
  const MatchEvalReport agg = AggregateMma(curves, n_matches);
  report.AddMetric("n_pairs", agg.n_pairs);
  report.AddMetric("n_matches", agg.n_matches);
  for (int thr = 1; thr <= 10; ++thr) {
    report.AddMetric("mma@" + std::to_string(thr),
                     agg.curve.mma_at[static_cast<std::size_t>(thr - 1)]);
  }
  report.AddMetric("mma_score", agg.mma_score);

  if (!a.csv.empty()) {
    std::string csv = "threshold,aggregate";
    for (const auto& f : files) csv += ',' + f.first;
    csv += '\n';
    for (std::size_t k = 0; k < 10; ++k) {
      csv += std::to_string(k + 1) + ',' + io::FormatReal(agg.curve.mma_at[k]);
      for (const auto& c : curves) csv += ',' + io::FormatReal(c.mma_at[k]);
      csv += '\n';
    }
    io::WriteFile(a.csv, csv);
  }
  Emit(report, a.common, clock, out);
  return kExitOk;
}

// ---------------------------------------------------------------- eval-pose

struct EvalPoseArgs {
  std::string est, gt, csv;
  std::vector<double> thresholds{5.0, 10.0, 20.0};
  Common common;
};

int RunEvalPose(const EvalPoseArgs& a, std::ostream& out) {
  Stopwatch clock;
  const auto est_files = SortedFiles(a.est);
  const auto gt_files = SortedFiles(a.gt);
  if (est_files.size() != gt_files.size()) {
    throw Error(ErrorCode::kIoError,
                "pose count mismatch: " + std::to_string(est_files.size()) +
                    " estimated vs " + std::to_string(gt_files.size()) +
                    " ground truth");
  }
  if (est_files.empty()) throw Error(ErrorCode::kIoError, "no pose files");

  io::RunReport report;
  report.command = "eval-pose";
  report.AddConfig("est", a.est);
  report.AddConfig("gt", a.gt);
  std::string thr_echo;
  for (double t : a.thresholds) {
    thr_echo += (thr_echo.empty() ? "" : ",") + io::FormatReal(t);
  }
  report.AddConfig("thresholds", thr_echo);
  report.AddConfig("csv", a.csv);

  std::vector<double> rot, trans, combined;
  for (std::size_t i = 0; i < est_files.size(); ++i) {
    const auto& [stem, path] = est_files[i];
    if (gt_files[i].first != stem) {
      throw Error(ErrorCode::kIoError, "pose files do not align: '" + stem +
                                           "' vs '" + gt_files[i].first + "'");
    }
    const auto est = Load(path.string(), io::ParsePoseText);
    const auto gt = Load(gt_files[i].second.string(), io::ParsePoseText);
    const PoseError pe = ComputePoseError(est, gt);
    rot.push_back(pe.rotation_deg);
    trans.push_back(pe.translation_deg);
    combined.push_back(std::max(pe.rotation_deg, pe.translation_deg));
    report.AddMetric("pair." + stem + ".rotation_deg", pe.rotation_deg);
    report.AddMetric("pair." + stem + ".translation_deg", pe.translation_deg);
  }
  const auto auc = PoseAuc(combined, a.thresholds);
  report.AddMetric("n_pairs", static_cast<double>(rot.size()));
  for (std::size_t k = 0; k < auc.size(); ++k) {
    report.AddMetric("auc@" + io::FormatReal(a.thresholds[k]), auc[k]);
  }
  report.AddMetric("rotation_rmse", Rmse(rot));
  report.AddMetric("translation_rmse", Rmse(trans));
  report.AddMetric("rotation_median", Median(rot));
  report.AddMetric("translation_median", Median(trans));

  if (!a.csv.empty()) {
    // Cumulative recall of the combined error, the curve the AUC integrates.
    std::vector<double> sorted = combined;
    std::sort(sorted.begin(), sorted.end());
    std::string csv = "error_deg,recall\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      csv += io::FormatReal(sorted[i]) + ',' +
             io::FormatReal(static_cast<double>(i + 1) /
                            static_cast<double>(sorted.size())) +
             '\n';
    }
    io::WriteFile(a.csv, csv);
  }
  Emit(report, a.common, clock, out);
  return kExitOk;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
  std::uint64_t seed = 0;
  int n = 100;
  int planes = 4;
  NoiseSpec noise;
  std::string out_dir;
  Common common;
};

int RunSynth(const SynthArgs& a, std::ostream& out) {
  Stopwatch clock;
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "cannot create " + a.out_dir);
  }
  const SyntheticScene scene = GenerateScene(a.seed, a.planes);
  // Independent stream for the correspondences.
  const SampledAcs sample = SampleAcs(scene, a.n, a.noise, a.seed + 1);

  io::WriteFile(dir / "acs.csv", io::FormatAcText(sample.acs));
  io::WriteFile(dir / "labels.txt", io::FormatLabelsText(sample.inlier));
  io::WriteFile(dir / "F.txt", io::FormatMatrixText(scene.F_gt.F));
  io::WriteFile(dir / "pose.txt", io::FormatPoseText(scene.pose));
  io::WriteFile(dir / "K1.txt", io::FormatIntrinsicsText(scene.K1));
  io::WriteFile(dir / "K2.txt", io::FormatIntrinsicsText(scene.K2));
  for (std::size_t k = 0; k < scene.H_gt.size(); ++k) {
    io::WriteFile(dir / ("H_" + std::to_string(k) + ".txt"),
                  io::FormatMatrixText(scene.H_gt[k].H));
  }

  io::RunReport report;
  report.command = "synth";
  report.seed = a.seed;
  report.AddConfig("n", std::to_string(a.n));
  report.AddConfig("planes", std::to_string(a.planes));
  report.AddConfig("point_sigma", io::FormatReal(a.noise.point_sigma));
  report.AddConfig("affine_sigma", io::FormatReal(a.noise.affine_rel_sigma));
  report.AddConfig("outliers", io::FormatReal(a.noise.outlier_fraction));
  report.AddConfig("out_dir", a.out_dir);
  const auto inliers = std::count(sample.inlier.begin(), sample.inlier.end(), true);
  report.AddMetric("n", static_cast<double>(sample.acs.size()));
  report.AddMetric("inliers", static_cast<double>(inliers));
  report.AddMetric("outliers", static_cast<double>(sample.acs.size()) -
                                   static_cast<double>(inliers));
  Emit(report, a.common, clock, out);
  return kExitOk;
}

// ---------------------------------------------------------------- gt-affine

struct GtAffineArgs {
  std::string H, points, out;
  Common common;
};

int RunGtAffine(const GtAffineArgs& a, std::ostream& out, std::ostream& err) {
  Stopwatch clock;
  const Homography H{Load(a.H, io::ParseMatrixText)};
  const auto points = Load(a.points, io::ParsePointsText);
  std::vector<AffineCorrespondence> acs;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      AffineCorrespondence ac;
      ac.p1 = points[i];
      ac.p2 = ApplyHomography(H, points[i]);
      ac.A = GtAffineFromHomography(H, points[i]);
      acs.push_back(ac);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPointAtInfinity) throw;
      ++skipped;
      err << "warning: point " << i << " maps to infinity; skipped\n";
    }
  }
  io::WriteFile(a.out, io::FormatAcText(acs));

  io::RunReport report;
  report.command = "gt-affine";
  report.AddConfig("H", a.H);
  report.AddConfig("points", a.points);
  report.AddConfig("out", a.out);
  report.AddMetric("n", static_cast<double>(points.size()));
  report.AddMetric("written", static_cast<double>(acs.size()));
  report.AddMetric("skipped", static_cast<double>(skipped));
  Emit(report, a.common, clock, out);
  if (skipped > 0) {
    err << "warning: " << skipped << " point(s) at infinity skipped\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int DefaultThreads() {
  const char* env = std::getenv("ACGEOM_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  return (end != env && *end == '\0' && v > 0) ? static_cast<int>(v) : 1;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Affine-correspondence two-view geometry toolkit", "acgeom"};
  app.require_subcommand(1);

  ResidualsArgs res;
  auto* c_res = app.add_subcommand(
      "residuals", "Epipolar, affine and Sampson residuals of an AC file under F");
  c_res->add_option("--acs", res.acs, "AC file")->required();
  c_res->add_option("--F", res.F, "Fundamental matrix file")->required();
  c_res->add_option("--out", res.out, "Per-AC residual table (CSV)");
  AddCommon(c_res, res.common);

  EstimateArgs est;
  est.cfg.threads = DefaultThreads();
  auto* c_est = app.add_subcommand("estimate", "Robust model estimation");
  c_est->add_option("--acs", est.acs, "AC file")->required();
  c_est->add_option("--model", est.model, "fundamental | essential | homography")
      ->check(CLI::IsMember({"fundamental", "essential", "homography"}));
  c_est->add_option("--intrinsics", est.intrinsics,
                    "Intrinsics file (camera 1, and camera 2 unless given)");
  c_est->add_option("--intrinsics2", est.intrinsics2, "Intrinsics of camera 2");
  c_est->add_option("--threshold", est.cfg.threshold, "Inlier threshold, pixels");
  c_est->add_option("--seed", est.cfg.seed, "Random seed");
  c_est->add_option("--affine-weight", est.cfg.affine_weight,
                    "Weight of affine residuals in the model score");
  c_est->add_option("--confidence", est.cfg.confidence, "RANSAC confidence");
  c_est->add_option("--max-iterations", est.cfg.max_iterations,
                    "Iteration cap");
  c_est->add_flag("--no-lo", est.no_lo, "Disable local optimization");
  c_est->add_option("--threads", est.cfg.threads,
                    "Worker threads (default: ACGEOM_THREADS or 1)");
  c_est->add_option("--out-dir", est.out_dir,
                    "Directory for model.txt, inliers.txt and pose.txt");
  AddCommon(c_est, est.common);

  EvalMmaArgs mma;
  auto* c_mma = app.add_subcommand(
      "eval-mma", "Mean matching accuracy against ground-truth homographies");
  c_mma->add_option("--matches", mma.matches, "Directory of match files")
      ->required();
  c_mma->add_option("--gt", mma.gt, "Directory of homography files (same stems)")
      ->required();
  c_mma->add_option("--csv", mma.csv, "Write the MMA curves as CSV");
  AddCommon(c_mma, mma.common);

  EvalPoseArgs pose;
  auto* c_pose = app.add_subcommand("eval-pose", "Relative pose AUC and RMSE");
  c_pose->add_option("--est", pose.est, "Directory of estimated pose files")
      ->required();
  c_pose->add_option("--gt", pose.gt, "Directory of ground-truth pose files")
      ->required();
  c_pose->add_option("--thresholds", pose.thresholds, "AUC thresholds, degrees")
      ->delimiter(',');
  c_pose->add_option("--csv", pose.csv, "Write the cumulative recall curve");
  AddCommon(c_pose, pose.common);

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "Synthetic two-view scene with ACs");
  c_syn->add_option("--seed", syn.seed, "Random seed");
  c_syn->add_option("--n", syn.n, "Number of correspondences");
  c_syn->add_option("--planes", syn.planes, "Number of scene planes");
  c_syn->add_option("--point-sigma", syn.noise.point_sigma,
                    "Gaussian noise on p2, pixels per coordinate");
  c_syn->add_option("--affine-sigma", syn.noise.affine_rel_sigma,
                    "Relative noise on affine entries");
  c_syn->add_option("--outliers", syn.noise.outlier_fraction,
                    "Outlier fraction in [0, 1)");
  c_syn->add_option("--out-dir", syn.out_dir, "Output directory")->required();
  AddCommon(c_syn, syn.common);

  GtAffineArgs gta;
  auto* c_gta = app.add_subcommand(
      "gt-affine", "Ground-truth affine frames from a homography");
  c_gta->add_option("--H", gta.H, "Homography file")->required();
  c_gta->add_option("--points", gta.points, "Points in image 1")->required();
  c_gta->add_option("--out", gta.out, "Output AC file")->required();
  AddCommon(c_gta, gta.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (c_res->parsed()) return RunResiduals(res, out);
    if (c_est->parsed()) return RunEstimate(est, out);
    if (c_mma->parsed()) return RunEvalMma(mma, out);
    if (c_pose->parsed()) return RunEvalPose(pose, out);
    if (c_syn->parsed()) return RunSynth(syn, out);
    if (c_gta->parsed()) return RunGtAffine(gta, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace acgeom::cli
