#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entflow/bspline.hpp"
#include "entflow/dataset.hpp"

namespace entflow {

// x ln x extended by continuity: 0 at x = 0. Rejects x outside [0, 1].
double xlogx(double x);

struct EntropyPoint {
  double n_a = 0.0;
  double s_a = 0.0;
};

std::vector<EntropyPoint> to_points(std::span<const TrajectorySample> samples);

// Least-squares coefficients of S(n) = c1 n ln n + c2 (1-n) ln(1-n).
struct BinaryFitResult {
  double c1 = 0.0;
  double c2 = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;
  std::size_t point_count = 0;   // points entering the fit
  std::size_t rejected_count = 0;  // points dropped for n_A > 1 (diagnostic)
};

// Exact solution of the 2x2 normal equations of the linear model in the
// regressors (n ln n, (1-n) ln(1-n)). Points with n_A > 1 lie outside the
// model's domain and are dropped with a count; n_A < 0 is an error.
BinaryFitResult fit_binary_entropy(std::span<const EntropyPoint> points);

// Least-squares clamped cubic B-spline over [n_min, n_max] with uniformly
// spaced interior knots.
struct SplineFit {
  int degree = 3;
  std::vector<double> knots;
  std::vector<double> coefficients;
  double n_min = 0.0;
  double n_max = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;
  std::size_t point_count = 0;

  double evaluate(double n) const;  // rejects n outside [n_min, n_max]
};

SplineFit fit_bspline(std::span<const EntropyPoint> points, int interior_knots = 8);

// 1 - SS_res / SS_tot against the mean predictor. Rejects length mismatch,
// fewer than 2 values, and zero variance of y.
double r_squared(std::span<const double> y, std::span<const double> y_hat);

struct HeatmapCell {
  double U = 0.0;
  double h = 0.0;
  std::optional<BinaryFitResult> fit;  // empty on per-group failure
  std::string error;
};

// One fit_binary_entropy per (U, h) group; failures become empty cells.
std::vector<HeatmapCell> r2_heatmap(const TrajectoryDataset& ds);

}  // namespace entflow
