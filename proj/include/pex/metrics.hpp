#pragma once

#include "pex/grid.hpp"
#include "pex/map_io.hpp"

namespace pex {

// Observed-free cells that are truly free over all truly free cells.
// Throws kNoFreeCells when the truth has no free cell.
double coverage(const TrinaryGrid& observed, const TrinaryGrid& truth);

// Agreement with the truth over cells that `pred` classifies; 1.0 when none.
double accuracy(const TrinaryGrid& pred, const TrinaryGrid& truth);

// Identical images score this cap instead of infinity.
inline constexpr double kPsnrCap = 99.0;

double psnr(const Image8& a, const Image8& b);

// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, L = 255, averaged over all fully contained windows.
inline constexpr int kSsimWindow = 11;
double ssim(const Image8& a, const Image8& b);

struct ObjectiveWeights {
  double theta1 = 0.0;  // model size
  double theta2 = 1.0;  // exploration time
  double theta3 = 0.0;  // final map error
  double rho = 0.0;     // predictor parameter count
};

void validate_weights(const ObjectiveWeights& w);

// Mean |lift(truth) - prob| over all cells.
double map_l1_error(const TrinaryGrid& truth, const ProbabilityGrid& prob);

double objective(const ObjectiveWeights& w, double steps, double l1_map_error);

}  // namespace pex
