#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entflow/bspline.hpp"
#include "entflow/dataset.hpp"
#include "entflow/lbfgs.hpp"

namespace entflow {

// Network shape and training hyperparameters.
struct KanConfig {
  std::vector<int> widths{2, 3, 1};  // inputs (U, n_A) ... output S_A
  int spline_order = 3;
  int grid_size = 10;  // spline intervals per edge activation
  // Alternate reading of grid_size as the per-edge basis-function count.
  bool grid_is_basis_count = false;
  double learning_rate = 0.01;
  int epochs = 50;  // outer L-BFGS iterations, full batch
  std::uint64_t seed = 0;
  bool base_blend = true;  // silu base + spline edge activation; false: pure spline
  double init_scale = 0.1;
  int lbfgs_history = 10;
  int max_line_search = 20;

  int intervals() const { return grid_is_basis_count ? grid_size - spline_order : grid_size; }
  int basis_per_edge() const { return intervals() + spline_order; }
  void validate() const;
};

struct KanSample {
  double u = 0.0;
  double n_a = 0.0;
  double s_a = 0.0;
};

// All dataset rows in group order, inputs (U, n_A), target S_A.
std::vector<KanSample> kan_samples(const TrajectoryDataset& ds);

struct EvalStats {
  std::uint64_t clamped = 0;  // node inputs clamped to a grid boundary
};

// Two-input spline network: every edge carries an activation
// phi(x) = w_b silu(x) + w_s sum_k c_k B_k(x) on a fixed per-node grid;
// node values are sums of incoming edge activations. Inputs are affinely
// normalized to [-1, 1] from the training ranges; hidden grids are set from
// the initialized network's response to the training set and stay fixed.
class KanModel {
 public:
  // Builds grids and seeded initial parameters from the training inputs.
  static KanModel initialize(const KanConfig& config, std::span<const KanSample> train);

  const KanConfig& config() const { return config_; }
  const std::vector<double>& input_min() const { return in_min_; }
  const std::vector<double>& input_max() const { return in_max_; }
  const std::vector<std::vector<UniformBsplineGrid>>& grids() const { return grids_; }

  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }

  // Flat layout: layers outer, then input node, then output node; per edge
  // [c_0 ... c_{B-1}, w_base, w_spline].
  int params_per_edge() const { return config_.basis_per_edge() + 2; }
  std::size_t edge_offset(int layer, int in, int out) const;
  std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }

  double forward(double u, double n_a, EvalStats* stats = nullptr) const;
  void predict(std::span<const KanSample> samples, std::span<double> out,
               EvalStats* stats = nullptr) const;
  double mse(std::span<const KanSample> samples) const;
  // Mean-squared-error value; exact analytic gradient written into grad.
  double mse_gradient(std::span<const KanSample> samples, Eigen::VectorXd& grad) const;

  std::string to_json() const;  // self-describing checkpoint
  static KanModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static KanModel load(const std::filesystem::path& path);

 private:
  KanModel() = default;

  // Node input values of the given layer (0 = normalized inputs).
  void forward_to_layer(const KanSample& s, int layer, std::vector<double>& values,
                        EvalStats* stats = nullptr) const;

  KanConfig config_;
  std::vector<double> in_min_, in_max_;
  std::vector<std::vector<UniformBsplineGrid>> grids_;  // [layer][input node]
  Eigen::VectorXd params_;
};

struct TrainReport {
  int epochs_run = 0;
  double final_mse = 0.0;
  int line_search_fallbacks = 0;
  int function_evaluations = 0;
  bool stalled = false;
};

// Full-batch L-BFGS (strong Wolfe, history from config) for config.epochs
// outer iterations.
TrainReport train_lbfgs(KanModel& model, std::span<const KanSample> train,
                        const KanConfig& config);

struct FoldReport {
  int fold = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double test_r2 = 0.0;
  double final_train_mse = 0.0;
};

struct CvReport {
  std::vector<FoldReport> folds;
  double mean_r2 = 0.0;
  double std_r2 = 0.0;  // sample standard deviation over folds
  int worst_fold = 0;
};

// Deterministic stratified 5-fold split: every (U, h) group is shuffled with
// the seeded generator and dealt round-robin, so each fold sees every U.
CvReport cross_validate(const TrajectoryDataset& ds, const KanConfig& config,
                        std::vector<KanModel>* models = nullptr,
                        std::vector<std::vector<KanSample>>* test_sets = nullptr);

struct GroupR2 {
  double u = 0.0;
  double r2 = 0.0;
  std::size_t rows = 0;
};

// R^2 restricted to each U group of the given rows (typically a test fold).
std::vector<GroupR2> per_group_r2(const KanModel& model, std::span<const KanSample> rows);

}  // namespace entflow
