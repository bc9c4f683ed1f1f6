#include "entflow/curvefit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "entflow/numio.hpp"

namespace entflow {

double xlogx(double x) {
  if (!(x >= 0.0) || x > 1.0)
    throw ConfigError("xlogx argument " + format_g17(x) + " outside [0, 1]");
  if (x == 0.0) return 0.0;
  return x * std::log(x);
}

std::vector<EntropyPoint> to_points(std::span<const TrajectorySample> samples) {
  std::vector<EntropyPoint> pts;
  pts.reserve(samples.size());
  for (const TrajectorySample& s : samples) pts.push_back({s.n_a, s.s_a});
  return pts;
}

BinaryFitResult fit_binary_entropy(std::span<const EntropyPoint> points) {
  BinaryFitResult result;
  std::vector<EntropyPoint> kept;
  kept.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EntropyPoint& p = points[i];
    if (!std::isfinite(p.n_a) || !std::isfinite(p.s_a))
      throw ConfigError("non-finite point at index " + std::to_string(i));
    if (p.n_a < 0.0)
      throw ConfigError("n_A = " + format_g17(p.n_a) + " below 0 at index " + std::to_string(i));
    if (p.n_a > 1.0) {
      ++result.rejected_count;  // outside the binary-entropy domain
      continue;
    }
    kept.push_back(p);
  }
  if (kept.size() < 3)
    throw ConfigError("binary-entropy fit needs >= 3 points in [0, 1], got " +
                      std::to_string(kept.size()));

  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (const EntropyPoint& p : kept) {
    const double r1 = xlogx(p.n_a);
    const double r2 = xlogx(1.0 - p.n_a);
    a11 += r1 * r1;
    a12 += r1 * r2;
    a22 += r2 * r2;
    b1 += r1 * p.s_a;
    b2 += r2 * p.s_a;
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(det > 1e-14 * a11 * a22) || a11 == 0.0 || a22 == 0.0)
    throw NumericError("singular design: the two regressors are (near) proportional");
  result.c1 = (b1 * a22 - b2 * a12) / det;
  result.c2 = (a11 * b2 - a12 * b1) / det;

  double mean = 0;
  for (const EntropyPoint& p : kept) mean += p.s_a;
  mean /= static_cast<double>(kept.size());
  double ss_res = 0, ss_tot = 0;
  for (const EntropyPoint& p : kept) {
    const double fit = result.c1 * xlogx(p.n_a) + result.c2 * xlogx(1.0 - p.n_a);
    ss_res += (p.s_a - fit) * (p.s_a - fit);
    ss_tot += (p.s_a - mean) * (p.s_a - mean);
  }
  if (ss_tot == 0.0) throw NumericError("R^2 undefined: zero variance in S_A");
  result.r_squared = 1.0 - ss_res / ss_tot;
  result.residual_rms = std::sqrt(ss_res / static_cast<double>(kept.size()));
  result.point_count = kept.size();
  return result;
}

double SplineFit::evaluate(double n) const {
  if (!(n >= n_min && n <= n_max))
    throw ConfigError("spline evaluated at " + format_g17(n) + " outside [" + format_g17(n_min) +
                      ", " + format_g17(n_max) + "]");
  const std::vector<double> b = bspline_basis(n, knots, degree);
  double acc = 0.0;
  for (std::size_t j = 0; j < coefficients.size(); ++j) acc += coefficients[j] * b[j];
  return acc;
}

SplineFit fit_bspline(std::span<const EntropyPoint> points, int interior_knots) {
  if (interior_knots < 0) throw ConfigError("interior knot count must be nonnegative");
  constexpr int kDegree = 3;
  const std::size_t n_coef = static_cast<std::size_t>(interior_knots) + kDegree + 1;
  if (points.size() < n_coef)
    throw ConfigError("B-spline fit needs >= " + std::to_string(n_coef) + " points, got " +
                      std::to_string(points.size()));

  std::vector<EntropyPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntropyPoint& a, const EntropyPoint& b) { return a.n_a < b.n_a; });
  const double lo = sorted.front().n_a;
  const double hi = sorted.back().n_a;
  if (!(hi > lo)) throw ConfigError("B-spline fit domain has zero width");

  SplineFit fit;
  fit.degree = kDegree;
  fit.n_min = lo;
  fit.n_max = hi;
  fit.knots.assign(kDegree + 1, lo);
  for (int j = 1; j <= interior_knots; ++j)
    fit.knots.push_back(lo + (hi - lo) * j / (interior_knots + 1));
  fit.knots.insert(fit.knots.end(), kDegree + 1, hi);

  const auto rows = static_cast<Eigen::Index>(sorted.size());
  const auto cols = static_cast<Eigen::Index>(n_coef);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::vector<double> b = bspline_basis(sorted[static_cast<std::size_t>(r)].n_a,
                                                fit.knots, kDegree);
    for (Eigen::Index c = 0; c < cols; ++c) design(r, c) = b[static_cast<std::size_t>(c)];
    target(r) = sorted[static_cast<std::size_t>(r)].s_a;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols)
    throw NumericError("insufficient support: data do not cover every spline segment");
  const Eigen::VectorXd coef = qr.solve(target);
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());

  const Eigen::VectorXd fitted = design * coef;
  double mean = target.mean();
  double ss_res = (target - fitted).squaredNorm();
  double ss_tot = (target.array() - mean).square().sum();
  if (ss_tot == 0.0) throw NumericError("R^2 undefined: zero variance in S_A");
  fit.r_squared = 1.0 - ss_res / ss_tot;
  fit.residual_rms = std::sqrt(ss_res / static_cast<double>(sorted.size()));
  fit.point_count = sorted.size();
  return fit;
}

double r_squared(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw ConfigError("r_squared: length mismatch");
  if (y.size() < 2) throw ConfigError("r_squared: need >= 2 values");
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) throw NumericError("r_squared undefined for constant y");
  return 1.0 - ss_res / ss_tot;
}

std::vector<HeatmapCell> r2_heatmap(const TrajectoryDataset& ds) {
  if (ds.groups().empty()) throw ConfigError("heatmap needs a dataset with >= 1 group");
  std::vector<HeatmapCell> cells;
  cells.reserve(ds.groups().size());
  for (const TrajectoryGroup& g : ds.groups()) {
    HeatmapCell cell;
    cell.U = g.U;
    cell.h = g.h;
    try {
      cell.fit = fit_binary_entropy(to_points(g.samples));
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace entflow
