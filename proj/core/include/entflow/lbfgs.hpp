#pragma once

#include <Eigen/Dense>
#include <functional>

namespace entflow {

struct LbfgsOptions {
  int max_iterations = 50;
  int history = 10;
  // Line-search trial scale; mirrors full-batch usage where the learning
  // rate seeds the first trial step of every iteration.
  double initial_step = 1.0;
  double c1 = 1e-4;  // sufficient decrease
  double c2 = 0.9;   // curvature
  int max_line_search = 20;
  double grad_tolerance = 1e-12;  // stop when ||g||_inf falls below
};

struct LbfgsReport {
  int iterations = 0;
  double final_value = 0.0;
  double final_grad_norm = 0.0;
  int line_search_fallbacks = 0;  // Wolfe search failed; gradient step taken
  int function_evaluations = 0;
  bool stalled = false;  // no further progress possible
};

// Objective: value at x, gradient written into the second argument.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Limited-memory BFGS with strong-Wolfe line search (bracket + cubic zoom).
// Deterministic: no randomness, sequential arithmetic.
LbfgsReport lbfgs_minimize(Eigen::VectorXd& x, const Objective& objective,
                           const LbfgsOptions& options = {});

}  // namespace entflow
