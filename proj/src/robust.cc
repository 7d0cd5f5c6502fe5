#include "acgeom/robust.h"

#include "acgeom/error.h"
#include "acgeom/kernels/batch.h"
#include "acgeom/solvers.h"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <thread>

namespace acgeom {
namespace {

// Hypotheses are generated and evaluated in blocks of this size, then merged
// strictly in index order; the block size is fixed so that the result does not
// depend on the number of worker threads.
constexpr std::size_t kBlockSize = 32;
constexpr int kMaxLocalOptimizationSteps = 5;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

template <std::size_t K>
std::array<std::size_t, K> DrawSample(std::uint64_t seed, std::uint64_t index,
                                      std::size_t n) {
  std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(index)));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::array<std::size_t, K> sample{};
  for (std::size_t k = 0; k < K; ++k) {
    bool fresh = false;
    while (!fresh) {
      sample[k] = pick(rng);
      fresh = std::find(sample.begin(), sample.begin() + k, sample[k]) ==
              sample.begin() + k;
    }
  }
  return sample;
}

struct Evaluation {
  std::size_t inliers = 0;
  double score = 0.0;
};

struct Scratch {
  std::vector<double> r0, r1, r2;
};

struct Candidate {
  bool valid = false;
  Mat3 model = Mat3::Zero();
  Evaluation eval;
  std::uint64_t index = 0;
};

bool Better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.eval.inliers != b.eval.inliers) return a.eval.inliers > b.eval.inliers;
  if (a.eval.score != b.eval.score) return a.eval.score < b.eval.score;
  return a.index < b.index;
}

// Clipped cost; NaN and +inf saturate at the cap.
double Truncate(double value, double cap) { return value <= cap ? value : cap; }

class FundamentalProblem {
 public:
  static constexpr std::size_t kSampleSize = 3;

  FundamentalProblem(std::span<const AffineCorrespondence> acs,
                     const RansacConfig& cfg)
      : acs_(acs),
        batch_(kernels::AcBatch::FromCorrespondences(acs)),
        thr_sq_(cfg.threshold * cfg.threshold),
        affine_weight_(cfg.affine_weight) {}

  std::size_t size() const { return acs_.size(); }

  std::optional<Mat3> Fit(std::span<const std::size_t> idx) const {
    std::vector<AffineCorrespondence> subset;
    subset.reserve(idx.size());
    for (std::size_t i : idx) subset.push_back(acs_[i]);
    try {
      return FundamentalFromAcs(subset).F;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  Evaluation Evaluate(const Mat3& F, Scratch& s,
                      std::vector<bool>* mask = nullptr) const {
    const std::size_t n = size();
    s.r0.resize(n);
    s.r1.resize(n);
    s.r2.resize(n);
    kernels::SampsonBatch(batch_, F, s.r0, s.r1, s.r2);
    Evaluation e;
    if (mask != nullptr) mask->assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const bool inlier = s.r0[i] <= thr_sq_;
      if (inlier) ++e.inliers;
      if (mask != nullptr) (*mask)[i] = inlier;
      e.score += Truncate(s.r0[i] + affine_weight_ * (s.r1[i] + s.r2[i]),
                          thr_sq_);
    }
    return e;
  }

 private:
  std::span<const AffineCorrespondence> acs_;
  kernels::AcBatch batch_;
  double thr_sq_;
  double affine_weight_;
};

class HomographyProblem {
 public:
  static constexpr std::size_t kSampleSize = 2;

  HomographyProblem(std::span<const AffineCorrespondence> acs,
                    std::span<const PointPair> extra, const RansacConfig& cfg)
      : acs_(acs),
        extra_(extra),
        batch_(kernels::AcBatch::FromCorrespondences(acs)),
        thr_sq_(cfg.threshold * cfg.threshold),
        affine_weight_(cfg.affine_weight) {
    std::vector<AffineCorrespondence> as_acs;
    for (const auto& pp : extra) {
      as_acs.push_back({pp.p1, pp.p2, Mat2::Zero()});
    }
    extra_batch_ = kernels::AcBatch::FromCorrespondences(as_acs);
  }

  // Minimal samples are drawn from the ACs only.
  std::size_t size() const { return acs_.size(); }

  std::optional<Mat3> Fit(std::span<const std::size_t> idx,
                          std::span<const std::size_t> extra_idx = {}) const {
    std::vector<AffineCorrespondence> subset;
    for (std::size_t i : idx) subset.push_back(acs_[i]);
    std::vector<PointPair> extra;
    for (std::size_t i : extra_idx) extra.push_back(extra_[i]);
    try {
      return HomographyFromAcs(subset, extra).H;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  Evaluation Evaluate(const Mat3& H, Scratch& s,
                      std::vector<bool>* mask = nullptr) const {
    const Mat3 H_inv = H.inverse();
    const std::size_t n = acs_.size();
    const std::size_t m = extra_.size();
    if (mask != nullptr) mask->assign(n + m, false);
    Evaluation e;
    s.r0.resize(n);
    s.r1.resize(n);
    kernels::TransferBatch(batch_, H, H_inv, s.r0, s.r1);
    for (std::size_t i = 0; i < n; ++i) {
      const bool inlier = s.r0[i] <= thr_sq_;
      if (inlier) ++e.inliers;
      if (mask != nullptr) (*mask)[i] = inlier;
      e.score += Truncate(s.r0[i] + affine_weight_ * s.r1[i], thr_sq_);
    }
    if (m > 0) {
      s.r0.resize(m);
      s.r1.resize(m);
      kernels::TransferBatch(extra_batch_, H, H_inv, s.r0, s.r1);
      for (std::size_t i = 0; i < m; ++i) {
        const bool inlier = s.r0[i] <= thr_sq_;
        if (inlier) ++e.inliers;
        if (mask != nullptr) (*mask)[n + i] = inlier;
        e.score += Truncate(s.r0[i], thr_sq_);
      }
    }
    return e;
  }

  std::optional<Mat3> Refit(const std::vector<bool>& mask) const {
    std::vector<std::size_t> idx, extra_idx;
    for (std::size_t i = 0; i < acs_.size(); ++i) {
      if (mask[i]) idx.push_back(i);
    }
    for (std::size_t i = 0; i < extra_.size(); ++i) {
      if (mask[acs_.size() + i]) extra_idx.push_back(i);
    }
    return Fit(idx, extra_idx);
  }

 private:
  std::span<const AffineCorrespondence> acs_;
  std::span<const PointPair> extra_;
  kernels::AcBatch batch_;
  kernels::AcBatch extra_batch_;
  double thr_sq_;
  double affine_weight_;
};

std::optional<Mat3> Refit(const FundamentalProblem& p,
                          const std::vector<bool>& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(i);
  }
  return p.Fit(idx);
}

std::optional<Mat3> Refit(const HomographyProblem& p,
                          const std::vector<bool>& mask) {
  return p.Refit(mask);
}

template <class Problem>
Candidate Hypothesis(const Problem& p, const RansacConfig& cfg,
                     std::uint64_t index, Scratch& scratch) {
  const auto sample =
      DrawSample<Problem::kSampleSize>(cfg.seed, index, p.size());
  Candidate c;
  c.index = index;
  if (auto model = p.Fit(sample)) {
    c.valid = true;
    c.model = *model;
    c.eval = p.Evaluate(c.model, scratch);
  }
  return c;
}

template <class Problem>
void EvaluateBlock(const Problem& p, const RansacConfig& cfg,
                   std::uint64_t first, std::vector<Candidate>& block) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(cfg.threads, 1), block.size());
  auto work = [&](std::size_t w) {
    Scratch scratch;
    for (std::size_t j = w; j < block.size(); j += workers) {
      block[j] = Hypothesis(p, cfg, first + j, scratch);
    }
  };
  if (workers <= 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
}

template <class Problem>
RobustEstimate RunRansac(const Problem& p, const RansacConfig& cfg,
                         ModelKind kind) {
  Candidate best;
  Scratch scratch;
  const auto n_data = static_cast<double>(p.size());
  std::uint64_t bound = static_cast<std::uint64_t>(cfg.max_iterations);
  std::uint64_t merged = 0;
  std::vector<Candidate> block;

  while (merged < bound) {
    block.assign(kBlockSize, Candidate{});
    EvaluateBlock(p, cfg, merged, block);
    for (const Candidate& c : block) {
      if (merged >= bound) break;
      ++merged;
      if (!Better(c, best)) continue;
      best = c;
      if (cfg.lo_enabled) {
        std::vector<bool> mask;
        for (int step = 0; step < kMaxLocalOptimizationSteps; ++step) {
          p.Evaluate(best.model, scratch, &mask);
          const auto refit = Refit(p, mask);
          if (!refit) break;
          Candidate lo;
          lo.valid = true;
          lo.model = *refit;
          lo.eval = p.Evaluate(lo.model, scratch);
          lo.index = best.index;
          if (!Better(lo, best)) break;
          best = lo;
        }
      }
      const double w =
          std::min(1.0, static_cast<double>(best.eval.inliers) / n_data);
      bound = static_cast<std::uint64_t>(
          AdaptiveIterationBound(w, static_cast<int>(Problem::kSampleSize),
                                 cfg.confidence, cfg.max_iterations));
    }
  }

  if (!best.valid || best.eval.inliers < Problem::kSampleSize) {
    throw Error(ErrorCode::kNoModelFound,
                "no hypothesis reached the minimal number of inliers");
  }
  RobustEstimate out;
  out.kind = kind;
  out.model = best.model;
  out.score = p.Evaluate(best.model, scratch, &out.inlier_mask).score;
  out.iterations_run = static_cast<int>(merged);
  return out;
}

}  // namespace

void RansacConfig::Validate() const {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be > 0");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence must be in (0, 1)");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  if (!(affine_weight >= 0.0) || !std::isfinite(affine_weight)) {
    throw Error(ErrorCode::kInvalidArgument, "affine_weight must be >= 0");
  }
}

std::size_t RobustEstimate::InlierCount() const {
  return static_cast<std::size_t>(
      std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

int AdaptiveIterationBound(double inlier_ratio, int sample_size,
                           double confidence, int max_iterations) {
  if (!(inlier_ratio > 0.0)) return max_iterations;
  const double all_inlier = std::pow(std::min(inlier_ratio, 1.0), sample_size);
  if (all_inlier >= 1.0) return 1;
  const double n = std::ceil(std::log(1.0 - confidence) / std::log1p(-all_inlier));
  if (!(n < static_cast<double>(max_iterations))) return max_iterations;
  return std::max(1, static_cast<int>(n));
}

RobustEstimate RansacFundamental(std::span<const AffineCorrespondence> acs,
                                 const RansacConfig& cfg) {
  cfg.Validate();
  if (acs.size() < FundamentalProblem::kSampleSize) {
    throw Error(ErrorCode::kTooFewCorrespondences,
                "need at least 3 affine correspondences, got " +
                    std::to_string(acs.size()));
  }
  return RunRansac(FundamentalProblem(acs, cfg), cfg, ModelKind::kFundamental);
}

PoseEstimate RansacPose(std::span<const AffineCorrespondence> acs,
                        const CameraIntrinsics& K1, const CameraIntrinsics& K2,
                        const RansacConfig& cfg) {
  K1.Validate();
  K2.Validate();
  PoseEstimate out;
  out.estimate = RansacFundamental(acs, cfg);
  out.F = FundamentalMatrix{out.estimate.model};
  const EssentialMatrix E = EssentialFromFundamental(out.F, K1, K2);
  std::vector<PointPair> inliers;
  for (std::size_t i = 0; i < acs.size(); ++i) {
    if (out.estimate.inlier_mask[i]) inliers.push_back({acs[i].p1, acs[i].p2});
  }
  out.pose = DecomposeEssential(E, inliers, K1, K2);
  out.estimate.kind = ModelKind::kEssential;
  out.estimate.model = E.E;
  return out;
}

RobustEstimate RansacHomography(std::span<const AffineCorrespondence> acs,
                                std::span<const PointPair> extra_points,
                                const RansacConfig& cfg) {
  cfg.Validate();
  if (acs.size() < HomographyProblem::kSampleSize) {
    throw Error(ErrorCode::kTooFewCorrespondences,
                "need at least 2 affine correspondences, got " +
                    std::to_string(acs.size()));
  }
  return RunRansac(HomographyProblem(acs, extra_points, cfg), cfg,
                   ModelKind::kHomography);
}

}  // namespace acgeom
