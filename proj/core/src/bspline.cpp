#include "entflow/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace entflow {

namespace {

// Level-0 indicators with a right-closed final nonempty interval.
std::vector<double> level0(double x, std::span<const double> knots) {
  const std::size_t m = knots.size() - 1;
  std::vector<double> b(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (x >= knots[j] && x < knots[j + 1]) {
      b[j] = 1.0;
      return b;
    }
  }
  // x may sit exactly on the right end of the domain
  for (std::size_t j = m; j-- > 0;) {
    if (knots[j] < knots[j + 1]) {
      if (x >= knots[j] && x <= knots[j + 1]) b[j] = 1.0;
      break;
    }
  }
  return b;
}

void check_knots(std::span<const double> knots, int degree) {
  if (degree < 0) throw ConfigError("spline degree must be nonnegative");
  if (knots.size() < static_cast<std::size_t>(degree) + 2)
    throw ConfigError("knot vector too short for degree " + std::to_string(degree));
  for (std::size_t j = 0; j + 1 < knots.size(); ++j)
    if (knots[j] > knots[j + 1]) throw ConfigError("knot vector must be nondecreasing");
}

}  // namespace

std::vector<double> bspline_basis(double x, std::span<const double> knots, int degree) {
  check_knots(knots, degree);
  std::vector<double> b = level0(x, knots);
  for (int k = 1; k <= degree; ++k) {
    const std::size_t count = knots.size() - static_cast<std::size_t>(k) - 1;
    for (std::size_t j = 0; j < count; ++j) {
      const double d1 = knots[j + static_cast<std::size_t>(k)] - knots[j];
      const double d2 = knots[j + static_cast<std::size_t>(k) + 1] - knots[j + 1];
      double v = 0.0;
      if (d1 > 0.0) v += (x - knots[j]) / d1 * b[j];
      if (d2 > 0.0) v += (knots[j + static_cast<std::size_t>(k) + 1] - x) / d2 * b[j + 1];
      b[j] = v;
    }
    b.resize(count);
  }
  return b;
}

std::vector<double> bspline_basis_derivative(double x, std::span<const double> knots, int degree) {
  check_knots(knots, degree);
  const std::size_t n = knots.size() - static_cast<std::size_t>(degree) - 1;
  std::vector<double> deriv(n, 0.0);
  if (degree == 0) return deriv;
  const std::vector<double> lower = bspline_basis(x, knots, degree - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double d1 = knots[j + static_cast<std::size_t>(degree)] - knots[j];
    const double d2 = knots[j + static_cast<std::size_t>(degree) + 1] - knots[j + 1];
    double v = 0.0;
    if (d1 > 0.0) v += degree / d1 * lower[j];
    if (d2 > 0.0) v -= degree / d2 * lower[j + 1];
    deriv[j] = v;
  }
  return deriv;
}

UniformBsplineGrid::UniformBsplineGrid(double lo, double hi, int intervals, int degree)
    : lo_(lo), hi_(hi), intervals_(intervals), degree_(degree) {
  if (!(hi > lo)) throw ConfigError("spline grid needs hi > lo");
  if (intervals < 1) throw ConfigError("spline grid needs >= 1 interval");
  if (degree < 0 || degree > 15) throw ConfigError("spline degree outside [0, 15]");
  step_ = (hi - lo) / intervals;
  knots_.resize(static_cast<std::size_t>(intervals + 2 * degree + 1));
  for (int m = 0; m < static_cast<int>(knots_.size()); ++m)
    knots_[static_cast<std::size_t>(m)] = lo + (m - degree) * step_;
}

int UniformBsplineGrid::local_basis(double x, std::span<double> values) const {
  double scratch[16 + 1];
  return local_basis_and_derivative(x, values, std::span<double>(scratch, values.size()));
}

int UniformBsplineGrid::local_basis_and_derivative(double x, std::span<double> values,
                                                   std::span<double> derivatives) const {
  const int p = degree_;
  if (values.size() != static_cast<std::size_t>(p) + 1 ||
      derivatives.size() != static_cast<std::size_t>(p) + 1)
    throw ConfigError("local basis spans must have degree+1 slots");

  const double xc = std::clamp(x, lo_, hi_);
  int idx = static_cast<int>(std::floor((xc - lo_) / step_));
  idx = std::clamp(idx, 0, intervals_ - 1);
  const int i = idx + p;  // knot span index

  if (p == 0) {
    values[0] = 1.0;
    derivatives[0] = 0.0;
    return idx;
  }

  double left[17], right[17], n[17], lower[17];
  n[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    if (j == p)
      for (int q = 0; q < p; ++q) lower[q] = n[q];
    left[j] = xc - knots_[static_cast<std::size_t>(i + 1 - j)];
    right[j] = knots_[static_cast<std::size_t>(i + j)] - xc;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }
  for (int r = 0; r <= p; ++r) {
    values[r] = n[r];
    const double a = (r == 0) ? 0.0 : lower[r - 1];
    const double b = (r == p) ? 0.0 : lower[r];
    derivatives[r] = (a - b) / step_;
  }
  return idx;
}

std::vector<double> UniformBsplineGrid::basis(double x) const {
  std::vector<double> full(static_cast<std::size_t>(basis_count()), 0.0);
  std::vector<double> local(static_cast<std::size_t>(degree_) + 1);
  const int first = local_basis(x, local);
  for (int r = 0; r <= degree_; ++r) full[static_cast<std::size_t>(first + r)] = local[r];
  return full;
}

}  // namespace entflow
