#include "entflow/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "entflow/system_spec.hpp"

namespace entflow {

namespace {

// Minimizer of the cubic through (x1, f1, g1) and (x2, f2, g2), clipped to
// [lo, hi]; bisection when the cubic is degenerate.
double cubic_interpolate(double x1, double f1, double g1, double x2, double f2, double g2,
                         double lo, double hi) {
  const double d1 = g1 + g2 - 3.0 * (f1 - f2) / (x1 - x2);
  const double square = d1 * d1 - g1 * g2;
  if (square >= 0.0) {
    const double d2 = std::sqrt(square) * (x2 >= x1 ? 1.0 : -1.0);
    const double min_pos = x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2.0 * d2));
    if (std::isfinite(min_pos)) return std::clamp(min_pos, lo, hi);
  }
  return 0.5 * (lo + hi);
}

struct LinePoint {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative along d
};

}  // namespace

LbfgsReport lbfgs_minimize(Eigen::VectorXd& x, const Objective& objective,
                           const LbfgsOptions& options) {
  if (options.history < 1) throw ConfigError("L-BFGS history must be >= 1");
  if (!(options.initial_step > 0.0)) throw ConfigError("L-BFGS initial step must be positive");
  if (options.max_line_search < 1) throw ConfigError("max_line_search must be >= 1");

  LbfgsReport report;
  const auto n = x.size();
  Eigen::VectorXd grad(n);
  double fx = objective(x, grad);
  ++report.function_evaluations;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  Eigen::VectorXd direction(n), x_trial(n), grad_trial(n);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double gnorm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (gnorm <= options.grad_tolerance) break;

    // Two-loop recursion.
    direction = -grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(direction);
      direction -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      direction *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(direction);
      direction += (alpha[k] - beta) * s_hist[k];
    }

    double slope0 = grad.dot(direction);
    if (!(slope0 < 0.0)) {
      // Not a descent direction; drop the memory and restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      slope0 = -grad.squaredNorm();
      if (!(slope0 < 0.0)) break;
    }

    const double f0 = fx;
    double trial = (iter == 0)
                       ? options.initial_step * std::min(1.0, 1.0 / grad.cwiseAbs().sum())
                       : options.initial_step;

    const auto eval_at = [&](double step) -> LinePoint {
      x_trial = x + step * direction;
      const double value = objective(x_trial, grad_trial);
      ++report.function_evaluations;
      return {step, value, grad_trial.dot(direction)};
    };

    // Bracketing phase (extrapolate until the minimum is straddled).
    LinePoint prev{0.0, f0, slope0};
    LinePoint cur = eval_at(trial);
    int ls_evals = 1;
    bool wolfe_done = false;
    bool have_bracket = false;
    LinePoint br_lo, br_hi;

    while (ls_evals < options.max_line_search) {
      if (cur.value > f0 + options.c1 * cur.step * slope0 ||
          (ls_evals > 1 && cur.value >= prev.value)) {
        br_lo = prev;
        br_hi = cur;
        have_bracket = true;
        break;
      }
      if (std::abs(cur.slope) <= -options.c2 * slope0) {
        wolfe_done = true;
        break;
      }
      if (cur.slope >= 0.0) {
        br_lo = cur;
        br_hi = prev;
        have_bracket = true;
        break;
      }
      const double lo_step = cur.step + 0.01 * (cur.step - prev.step);
      const double hi_step = cur.step * 10.0;
      const double next =
          cubic_interpolate(prev.step, prev.value, prev.slope, cur.step, cur.value, cur.slope,
                            lo_step, hi_step);
      prev = cur;
      cur = eval_at(next);
      ++ls_evals;
    }

    // Zoom phase.
    if (!wolfe_done && have_bracket) {
      while (ls_evals < options.max_line_search) {
        if (std::abs(br_hi.step - br_lo.step) * std::max(std::abs(br_lo.slope), 1.0) < 1e-16) break;
        const double lo_step = std::min(br_lo.step, br_hi.step);
        const double hi_step = std::max(br_lo.step, br_hi.step);
        double next = cubic_interpolate(br_lo.step, br_lo.value, br_lo.slope, br_hi.step,
                                        br_hi.value, br_hi.slope, lo_step, hi_step);
        // Guard against stagnation at the bracket edge.
        const double width = hi_step - lo_step;
        if (next <= lo_step + 0.1 * width || next >= hi_step - 0.1 * width)
          next = 0.5 * (lo_step + hi_step);
        LinePoint mid = eval_at(next);
        ++ls_evals;
        if (mid.value > f0 + options.c1 * mid.step * slope0 || mid.value >= br_lo.value) {
          br_hi = mid;
        } else {
          if (std::abs(mid.slope) <= -options.c2 * slope0) {
            cur = mid;
            wolfe_done = true;
            break;
          }
          if (mid.slope * (br_hi.step - br_lo.step) >= 0.0) br_hi = br_lo;
          br_lo = mid;
        }
      }
      if (!wolfe_done && br_lo.step > 0.0 && br_lo.value < f0) {
        // Accept the best sufficient-decrease point found inside the bracket.
        cur = eval_at(br_lo.step);
        wolfe_done = true;
      }
    }

    if (!wolfe_done) {
      // Fall back to a plain gradient step with Armijo backtracking.
      ++report.line_search_fallbacks;
      direction = -grad;
      slope0 = -grad.squaredNorm();
      double step = options.initial_step;
      bool accepted = false;
      for (int k = 0; k < 30; ++k) {
        cur = eval_at(step);
        if (cur.value <= f0 + options.c1 * step * slope0) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        report.stalled = true;
        break;
      }
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Accept the step recorded in x_trial/grad_trial by the last eval_at.
    const Eigen::VectorXd s = cur.step * direction;
    const Eigen::VectorXd y = grad_trial - grad;
    x = x_trial;
    grad = grad_trial;
    fx = cur.value;
    ++report.iterations;

    const double ys = y.dot(s);
    if (ys > 1e-10) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / ys);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
  }

  report.final_value = fx;
  report.final_grad_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
  return report;
}

}  // namespace entflow
