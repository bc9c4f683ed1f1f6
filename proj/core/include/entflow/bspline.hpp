#pragma once

#include <span>
#include <vector>

#include "entflow/system_spec.hpp"

namespace entflow {

// Cox-de Boor values of all knots.size()-degree-1 basis functions at x.
// Repeated knots (clamped ends) are handled; the last interval is closed on
// the right so evaluation at the final knot returns the end basis function.
std::vector<double> bspline_basis(double x, std::span<const double> knots, int degree);

// First derivatives of the same basis functions.
std::vector<double> bspline_basis_derivative(double x, std::span<const double> knots, int degree);

// Uniform extended grid over [lo, hi]: `intervals` spans inside the domain
// plus `degree` phantom spans on each side, giving intervals + degree basis
// functions that form a partition of unity on [lo, hi].
class UniformBsplineGrid {
 public:
  UniformBsplineGrid() = default;
  UniformBsplineGrid(double lo, double hi, int intervals, int degree);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int intervals() const { return intervals_; }
  int degree() const { return degree_; }
  int basis_count() const { return intervals_ + degree_; }
  const std::vector<double>& knots() const { return knots_; }

  // Writes the degree+1 nonzero basis values into `values`, returns the index
  // of the first one. x is clamped into [lo, hi] for span location.
  int local_basis(double x, std::span<double> values) const;
  int local_basis_and_derivative(double x, std::span<double> values,
                                 std::span<double> derivatives) const;

  // Full-length basis vector (size basis_count()).
  std::vector<double> basis(double x) const;

 private:
  double lo_ = 0.0, hi_ = 1.0, step_ = 1.0;
  int intervals_ = 1, degree_ = 0;
  std::vector<double> knots_;
};

}  // namespace entflow
