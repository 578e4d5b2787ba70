#include "pex/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pex {

namespace {

template <typename A, typename B>
void require_same_size(const A& a, const B& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kGridMismatch, "grids differ in size");
  }
}

void require_same_size(const Image8& a, const Image8& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kGridMismatch, "images differ in size");
  }
}

std::array<double, kSsimWindow * kSsimWindow> gaussian_window() {
  constexpr double kSigma = 1.5;
  constexpr int kHalf = kSsimWindow / 2;
  std::array<double, kSsimWindow * kSsimWindow> w{};
  double sum = 0.0;
  for (int y = 0; y < kSsimWindow; ++y) {
    for (int x = 0; x < kSsimWindow; ++x) {
      const double dx = x - kHalf;
      const double dy = y - kHalf;
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
      w[static_cast<std::size_t>(y * kSsimWindow + x)] = v;
      sum += v;
    }
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

double coverage(const TrinaryGrid& observed, const TrinaryGrid& truth) {
  require_same_size(observed, truth);
  std::size_t free_total = 0;
  std::size_t seen = 0;
  const auto obs = observed.cells();
  const auto gt = truth.cells();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] != CellClass::kFree) continue;
    ++free_total;
    if (obs[i] == CellClass::kFree) ++seen;
  }
  if (free_total == 0) {
    throw Error(ErrorCode::kNoFreeCells, "truth map has no free cells");
  }
  return static_cast<double>(seen) / static_cast<double>(free_total);
}

double accuracy(const TrinaryGrid& pred, const TrinaryGrid& truth) {
  require_same_size(pred, truth);
  std::size_t classified = 0;
  std::size_t agree = 0;
  const auto p = pred.cells();
  const auto gt = truth.cells();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (p[i] == CellClass::kUncertain) continue;
    ++classified;
    if (p[i] == gt[i]) ++agree;
  }
  if (classified == 0) return 1.0;
  return static_cast<double>(agree) / static_cast<double>(classified);
}

double psnr(const Image8& a, const Image8& b) {
  require_same_size(a, b);
  if (a.pixels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty image");
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
    sse += d * d;
  }
  if (sse == 0.0) return kPsnrCap;
  const double mse = sse / static_cast<double>(a.pixels.size());
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const Image8& a, const Image8& b) {
  require_same_size(a, b);
  if (a.width < kSsimWindow || a.height < kSsimWindow) {
    throw Error(ErrorCode::kTooSmall, "ssim needs images of at least 11x11");
  }
  constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
  static const auto kWeights = gaussian_window();

  double total = 0.0;
  const int ny = a.height - kSsimWindow + 1;
  const int nx = a.width - kSsimWindow + 1;
  for (int y0 = 0; y0 < ny; ++y0) {
    for (int x0 = 0; x0 < nx; ++x0) {
      double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
      for (int y = 0; y < kSsimWindow; ++y) {
        const std::size_t row = static_cast<std::size_t>(y0 + y) * static_cast<std::size_t>(a.width);
        for (int x = 0; x < kSsimWindow; ++x) {
          const double w = kWeights[static_cast<std::size_t>(y * kSsimWindow + x)];
          const double va = a.pixels[row + static_cast<std::size_t>(x0 + x)];
          const double vb = b.pixels[row + static_cast<std::size_t>(x0 + x)];
          mu_a += w * va;
          mu_b += w * vb;
          // Pixel products are exact, so swapping a and b is bit-symmetric.
          aa += w * (va * va);
          bb += w * (vb * vb);
          ab += w * (va * vb);
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
               ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
    }
  }
  return total / (static_cast<double>(nx) * static_cast<double>(ny));
}

void validate_weights(const ObjectiveWeights& w) {
  for (double v : {w.theta1, w.theta2, w.theta3, w.rho}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "objective weights must be finite and >= 0");
    }
  }
}

double map_l1_error(const TrinaryGrid& truth, const ProbabilityGrid& prob) {
  require_same_size(truth, prob);
  if (truth.size() == 0) return 0.0;
  double sum = 0.0;
  const auto gt = truth.cells();
  const auto p = prob.cells();
  for (std::size_t i = 0; i < gt.size(); ++i) sum += std::abs(lift_value(gt[i]) - p[i]);
  return sum / static_cast<double>(gt.size());
}

double objective(const ObjectiveWeights& w, double steps, double l1_map_error) {
  return w.theta1 * w.rho + w.theta2 * steps + w.theta3 * l1_map_error;
}

}  // namespace pex
