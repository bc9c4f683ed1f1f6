#include "entflow/kan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entflow/curvefit.hpp"
#include "entflow/numio.hpp"

namespace entflow {

namespace {

double silu(double x) { return x / (1.0 + std::exp(-x)); }

double silu_derivative(double x) {
  const double s = 1.0 / (1.0 + std::exp(-x));
  return s * (1.0 + x * (1.0 - s));
}

// Portable gaussian draws: mt19937_64 bits + Box-Muller.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double uniform01() {  // in (0, 1]
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal(double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_ * sigma;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta) * sigma;
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

double normalize_input(double x, double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return 0.0;  // degenerate training range collapses to the center
  return 2.0 * (x - lo) / span - 1.0;
}

}  // namespace

void KanConfig::validate() const {
  if (widths.size() < 2) throw ConfigError("KAN needs at least input and output layers");
  if (widths.front() != 2) throw ConfigError("KAN input width must be 2 (U, n_A)");
  if (widths.back() != 1) throw ConfigError("KAN output width must be 1 (S_A)");
  for (int w : widths)
    if (w < 1) throw ConfigError("KAN layer widths must be >= 1");
  if (spline_order < 1) throw ConfigError("spline order must be >= 1");
  if (grid_size < spline_order)
    throw ConfigError("grid size must be >= spline order");
  if (intervals() < 1) throw ConfigError("spline grid needs >= 1 interval");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (init_scale < 0.0) throw ConfigError("init scale must be nonnegative");
  if (lbfgs_history < 1) throw ConfigError("L-BFGS history must be >= 1");
  if (max_line_search < 1) throw ConfigError("max_line_search must be >= 1");
}

std::vector<KanSample> kan_samples(const TrajectoryDataset& ds) {
  std::vector<KanSample> rows;
  rows.reserve(ds.total_rows());
  for (const TrajectoryGroup& g : ds.groups())
    for (const TrajectorySample& s : g.samples) rows.push_back({g.U, s.n_a, s.s_a});
  return rows;
}

std::size_t KanModel::edge_offset(int layer, int in, int out) const {
  std::size_t offset = 0;
  for (int l = 0; l < layer; ++l)
    offset += static_cast<std::size_t>(config_.widths[l]) * config_.widths[l + 1] *
              params_per_edge();
  const int out_dim = config_.widths[layer + 1];
  return offset +
         (static_cast<std::size_t>(in) * out_dim + static_cast<std::size_t>(out)) *
             params_per_edge();
}

KanModel KanModel::initialize(const KanConfig& config, std::span<const KanSample> train) {
  config.validate();
  if (train.empty()) throw ConfigError("KAN initialization needs a nonempty training set");

  KanModel model;
  model.config_ = config;

  model.in_min_ = {train[0].u, train[0].n_a};
  model.in_max_ = {train[0].u, train[0].n_a};
  for (const KanSample& s : train) {
    model.in_min_[0] = std::min(model.in_min_[0], s.u);
    model.in_max_[0] = std::max(model.in_max_[0], s.u);
    model.in_min_[1] = std::min(model.in_min_[1], s.n_a);
    model.in_max_[1] = std::max(model.in_max_[1], s.n_a);
  }

  const int n_layers = static_cast<int>(config.widths.size()) - 1;
  std::size_t total = 0;
  for (int l = 0; l < n_layers; ++l)
    total += static_cast<std::size_t>(config.widths[l]) * config.widths[l + 1] *
             (static_cast<std::size_t>(config.basis_per_edge()) + 2);
  model.params_.resize(static_cast<Eigen::Index>(total));

  GaussianSource rng(config.seed);
  const int per_edge = model.params_per_edge();
  const int n_basis = config.basis_per_edge();
  for (int l = 0; l < n_layers; ++l) {
    for (int i = 0; i < config.widths[l]; ++i) {
      for (int o = 0; o < config.widths[l + 1]; ++o) {
        const auto base = static_cast<Eigen::Index>(model.edge_offset(l, i, o));
        for (int k = 0; k < n_basis; ++k)
          model.params_(base + k) = rng.normal(config.init_scale);
        model.params_(base + per_edge - 2) = 1.0;  // w_base
        model.params_(base + per_edge - 1) = 1.0;  // w_spline
      }
    }
  }

  // Layer-0 grids span the normalized input range; deeper grids are set from
  // the initialized network's response to the training inputs and then stay
  // fixed for the whole run.
  model.grids_.resize(static_cast<std::size_t>(n_layers));
  model.grids_[0].assign(static_cast<std::size_t>(config.widths[0]),
                         UniformBsplineGrid(-1.0, 1.0, config.intervals(), config.spline_order));
  for (int l = 1; l < n_layers; ++l) {
    const int width = config.widths[l];
    std::vector<double> lo(static_cast<std::size_t>(width),
                           std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(width),
                           -std::numeric_limits<double>::infinity());
    std::vector<double> node_values;
    for (const KanSample& s : train) {
      model.forward_to_layer(s, l, node_values);
      for (int i = 0; i < width; ++i) {
        lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)],
                                                   node_values[static_cast<std::size_t>(i)]);
        hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)],
                                                   node_values[static_cast<std::size_t>(i)]);
      }
    }
    model.grids_[static_cast<std::size_t>(l)].reserve(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) {
      double a = lo[static_cast<std::size_t>(i)];
      double b = hi[static_cast<std::size_t>(i)];
      if (!(b > a)) {
        a -= 1.0;
        b += 1.0;
      } else {
        const double margin = 0.1 * (b - a);
        a -= margin;
        b += margin;
      }
      model.grids_[static_cast<std::size_t>(l)].emplace_back(a, b, config.intervals(),
                                                             config.spline_order);
    }
  }
  return model;
}

void KanModel::forward_to_layer(const KanSample& s, int layer, std::vector<double>& values,
                                EvalStats* stats) const {
  const int degree = config_.spline_order;
  double local[17];
  const std::span<double> window(local, static_cast<std::size_t>(degree) + 1);

  values.assign({normalize_input(s.u, in_min_[0], in_max_[0]),
                 normalize_input(s.n_a, in_min_[1], in_max_[1])});
  std::vector<double> next;
  for (int l = 0; l < layer; ++l) {
    const int in_dim = config_.widths[static_cast<std::size_t>(l)];
    const int out_dim = config_.widths[static_cast<std::size_t>(l) + 1];
    next.assign(static_cast<std::size_t>(out_dim), 0.0);
    for (int i = 0; i < in_dim; ++i) {
      const UniformBsplineGrid& grid = grids_[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
      const double raw = values[static_cast<std::size_t>(i)];
      const double x = std::clamp(raw, grid.lo(), grid.hi());
      if (stats && x != raw) ++stats->clamped;
      const int first = grid.local_basis(x, window);
      const double base_val = config_.base_blend ? silu(x) : 0.0;
      for (int o = 0; o < out_dim; ++o) {
        const auto off = static_cast<Eigen::Index>(edge_offset(l, i, o));
        double spline_val = 0.0;
        for (int k = 0; k <= degree; ++k)
          spline_val += params_(off + first + k) * local[k];
        const double w_base = params_(off + params_per_edge() - 2);
        const double w_spline = params_(off + params_per_edge() - 1);
        next[static_cast<std::size_t>(o)] += w_base * base_val + w_spline * spline_val;
      }
    }
    values.swap(next);
  }
}

double KanModel::forward(double u, double n_a, EvalStats* stats) const {
  std::vector<double> values;
  forward_to_layer({u, n_a, 0.0}, static_cast<int>(config_.widths.size()) - 1, values, stats);
  return values[0];
}

void KanModel::predict(std::span<const KanSample> samples, std::span<double> out,
                       EvalStats* stats) const {
  if (samples.size() != out.size()) throw ConfigError("predict: output span size mismatch");
  std::vector<double> values;
  const int last = static_cast<int>(config_.widths.size()) - 1;
  for (std::size_t r = 0; r < samples.size(); ++r) {
    forward_to_layer(samples[r], last, values, stats);
    out[r] = values[0];
  }
}

double KanModel::mse(std::span<const KanSample> samples) const {
  if (samples.empty()) throw ConfigError("mse of an empty batch");
  std::vector<double> values;
  const int last = static_cast<int>(config_.widths.size()) - 1;
  double acc = 0.0;
  for (const KanSample& s : samples) {
    forward_to_layer(s, last, values);
    const double d = values[0] - s.s_a;
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

double KanModel::mse_gradient(std::span<const KanSample> samples, Eigen::VectorXd& grad) const {
  if (samples.empty()) throw ConfigError("gradient of an empty batch");
  grad.setZero(params_.size());

  const int n_layers = static_cast<int>(config_.widths.size()) - 1;
  const int degree = config_.spline_order;
  const int per_edge = params_per_edge();
  double local[17], dlocal[17];
  const std::span<double> window(local, static_cast<std::size_t>(degree) + 1);
  const std::span<double> dwindow(dlocal, static_cast<std::size_t>(degree) + 1);

  // Per-layer node inputs for one sample, reused across the batch.
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(n_layers) + 1);
  std::vector<double> delta, delta_prev;

  const double inv_n = 1.0 / static_cast<double>(samples.size());
  double loss = 0.0;

  for (const KanSample& s : samples) {
    nodes[0] = {normalize_input(s.u, in_min_[0], in_max_[0]),
                normalize_input(s.n_a, in_min_[1], in_max_[1])};
    for (int l = 0; l < n_layers; ++l) {
      const int in_dim = config_.widths[static_cast<std::size_t>(l)];
      const int out_dim = config_.widths[static_cast<std::size_t>(l) + 1];
      auto& next = nodes[static_cast<std::size_t>(l) + 1];
      next.assign(static_cast<std::size_t>(out_dim), 0.0);
      for (int i = 0; i < in_dim; ++i) {
        const UniformBsplineGrid& grid =
            grids_[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
        const double x = std::clamp(nodes[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)],
                                    grid.lo(), grid.hi());
        const int first = grid.local_basis(x, window);
        const double base_val = config_.base_blend ? silu(x) : 0.0;
        for (int o = 0; o < out_dim; ++o) {
          const auto off = static_cast<Eigen::Index>(edge_offset(l, i, o));
          double spline_val = 0.0;
          for (int k = 0; k <= degree; ++k) spline_val += params_(off + first + k) * local[k];
          next[static_cast<std::size_t>(o)] +=
              params_(off + per_edge - 2) * base_val + params_(off + per_edge - 1) * spline_val;
        }
      }
    }

    const double residual = nodes[static_cast<std::size_t>(n_layers)][0] - s.s_a;
    loss += residual * residual;

    delta.assign(1, 2.0 * residual * inv_n);
    for (int l = n_layers - 1; l >= 0; --l) {
      const int in_dim = config_.widths[static_cast<std::size_t>(l)];
      const int out_dim = config_.widths[static_cast<std::size_t>(l) + 1];
      delta_prev.assign(static_cast<std::size_t>(in_dim), 0.0);
      for (int i = 0; i < in_dim; ++i) {
        const UniformBsplineGrid& grid =
            grids_[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
        const double raw = nodes[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
        const bool inside = raw >= grid.lo() && raw <= grid.hi();
        const double x = std::clamp(raw, grid.lo(), grid.hi());
        const int first = grid.local_basis_and_derivative(x, window, dwindow);
        const double base_val = config_.base_blend ? silu(x) : 0.0;
        const double base_der = (config_.base_blend && inside) ? silu_derivative(x) : 0.0;
        for (int o = 0; o < out_dim; ++o) {
          const double d = delta[static_cast<std::size_t>(o)];
          if (d == 0.0) continue;
          const auto off = static_cast<Eigen::Index>(edge_offset(l, i, o));
          const double w_base = params_(off + per_edge - 2);
          const double w_spline = params_(off + per_edge - 1);
          double spline_val = 0.0, spline_der = 0.0;
          for (int k = 0; k <= degree; ++k) {
            const double c = params_(off + first + k);
            spline_val += c * local[k];
            spline_der += c * dlocal[k];
            grad(off + first + k) += d * w_spline * local[k];
          }
          grad(off + per_edge - 2) += d * base_val;
          grad(off + per_edge - 1) += d * spline_val;
          if (l > 0)
            delta_prev[static_cast<std::size_t>(i)] +=
                d * (w_base * base_der + (inside ? w_spline * spline_der : 0.0));
        }
      }
      delta.swap(delta_prev);
    }
  }
  return loss * inv_n;
}

// ---------------------------------------------------------------------------
// Checkpoint serialization
// ---------------------------------------------------------------------------

std::string KanModel::to_json() const {
  nlohmann::json j;
  j["format"] = "entflow-kan-v1";
  j["config"] = {{"widths", config_.widths},
                 {"spline_order", config_.spline_order},
                 {"grid_size", config_.grid_size},
                 {"grid_is_basis_count", config_.grid_is_basis_count},
                 {"learning_rate", config_.learning_rate},
                 {"epochs", config_.epochs},
                 {"seed", config_.seed},
                 {"base_blend", config_.base_blend},
                 {"init_scale", config_.init_scale},
                 {"lbfgs_history", config_.lbfgs_history},
                 {"max_line_search", config_.max_line_search}};
  j["normalization"] = {{"input_min", in_min_}, {"input_max", in_max_}};
  nlohmann::json grids = nlohmann::json::array();
  for (const auto& layer : grids_) {
    nlohmann::json layer_json = nlohmann::json::array();
    for (const UniformBsplineGrid& g : layer)
      layer_json.push_back({{"lo", g.lo()}, {"hi", g.hi()}});
    grids.push_back(std::move(layer_json));
  }
  j["grids"] = std::move(grids);
  j["parameters"] = std::vector<double>(params_.data(), params_.data() + params_.size());
  return j.dump(2);
}

KanModel KanModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint parse error: ") + e.what());
  }
  try {
    if (j.at("format") != "entflow-kan-v1")
      throw ConfigError("unknown checkpoint format");
    KanModel model;
    const auto& c = j.at("config");
    model.config_.widths = c.at("widths").get<std::vector<int>>();
    model.config_.spline_order = c.at("spline_order").get<int>();
    model.config_.grid_size = c.at("grid_size").get<int>();
    model.config_.grid_is_basis_count = c.at("grid_is_basis_count").get<bool>();
    model.config_.learning_rate = c.at("learning_rate").get<double>();
    model.config_.epochs = c.at("epochs").get<int>();
    model.config_.seed = c.at("seed").get<std::uint64_t>();
    model.config_.base_blend = c.at("base_blend").get<bool>();
    model.config_.init_scale = c.at("init_scale").get<double>();
    model.config_.lbfgs_history = c.at("lbfgs_history").get<int>();
    model.config_.max_line_search = c.at("max_line_search").get<int>();
    model.config_.validate();

    model.in_min_ = j.at("normalization").at("input_min").get<std::vector<double>>();
    model.in_max_ = j.at("normalization").at("input_max").get<std::vector<double>>();
    if (model.in_min_.size() != 2 || model.in_max_.size() != 2)
      throw ConfigError("checkpoint normalization must cover 2 inputs");

    const auto& grids = j.at("grids");
    const int n_layers = static_cast<int>(model.config_.widths.size()) - 1;
    if (static_cast<int>(grids.size()) != n_layers)
      throw ConfigError("checkpoint grid layer count mismatch");
    model.grids_.resize(static_cast<std::size_t>(n_layers));
    for (int l = 0; l < n_layers; ++l) {
      const auto& layer = grids.at(static_cast<std::size_t>(l));
      if (static_cast<int>(layer.size()) != model.config_.widths[static_cast<std::size_t>(l)])
        throw ConfigError("checkpoint grid node count mismatch in layer " + std::to_string(l));
      for (const auto& g : layer)
        model.grids_[static_cast<std::size_t>(l)].emplace_back(
            g.at("lo").get<double>(), g.at("hi").get<double>(), model.config_.intervals(),
            model.config_.spline_order);
    }

    const auto params = j.at("parameters").get<std::vector<double>>();
    std::size_t expected = 0;
    for (int l = 0; l < n_layers; ++l)
      expected += static_cast<std::size_t>(model.config_.widths[static_cast<std::size_t>(l)]) *
                  model.config_.widths[static_cast<std::size_t>(l) + 1] *
                  (static_cast<std::size_t>(model.config_.basis_per_edge()) + 2);
    if (params.size() != expected)
      throw ConfigError("checkpoint parameter count " + std::to_string(params.size()) +
                        " does not match architecture (" + std::to_string(expected) + ")");
    model.params_ = Eigen::Map<const Eigen::VectorXd>(params.data(),
                                                      static_cast<Eigen::Index>(params.size()));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint field error: ") + e.what());
  }
}

void KanModel::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  os << to_json() << '\n';
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

KanModel KanModel::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open checkpoint '" + path.string() + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Training and cross-validation
// ---------------------------------------------------------------------------

TrainReport train_lbfgs(KanModel& model, std::span<const KanSample> train,
                        const KanConfig& config) {
  if (train.empty()) throw ConfigError("training set is empty");

  LbfgsOptions options;
  options.max_iterations = config.epochs;
  options.history = config.lbfgs_history;
  options.initial_step = config.learning_rate;
  options.max_line_search = config.max_line_search;

  Eigen::VectorXd x = model.parameters();
  const Objective objective = [&model, train](const Eigen::VectorXd& p,
                                              Eigen::VectorXd& grad) -> double {
    model.parameters() = p;
    return model.mse_gradient(train, grad);
  };
  const LbfgsReport lbfgs = lbfgs_minimize(x, objective, options);
  model.parameters() = x;

  TrainReport report;
  report.epochs_run = lbfgs.iterations;
  report.final_mse = lbfgs.final_value;
  report.line_search_fallbacks = lbfgs.line_search_fallbacks;
  report.function_evaluations = lbfgs.function_evaluations;
  report.stalled = lbfgs.stalled;
  return report;
}

CvReport cross_validate(const TrajectoryDataset& ds, const KanConfig& config,
                        std::vector<KanModel>* models,
                        std::vector<std::vector<KanSample>>* test_sets) {
  config.validate();
  constexpr int kFolds = 5;
  if (ds.groups().empty()) throw ConfigError("cross-validation needs a nonempty dataset");

  // Global row list plus per-group index ranges, in dataset (sorted) order.
  std::vector<KanSample> rows = kan_samples(ds);
  std::vector<std::pair<std::size_t, std::size_t>> group_ranges;
  std::size_t cursor = 0;
  for (const TrajectoryGroup& g : ds.groups()) {
    if (g.samples.size() < static_cast<std::size_t>(kFolds))
      throw NumericError("group U=" + format_g17(g.U) + ", h=" + format_g17(g.h) + " has " +
                         std::to_string(g.samples.size()) + " rows; stratified " +
                         std::to_string(kFolds) + "-fold CV needs >= " + std::to_string(kFolds));
    group_ranges.emplace_back(cursor, cursor + g.samples.size());
    cursor += g.samples.size();
  }

  // Deterministic stratified assignment: shuffle each group, deal round-robin.
  std::vector<int> fold_of(rows.size(), 0);
  std::mt19937_64 rng(config.seed);
  for (const auto& [begin, end] : group_ranges) {
    std::vector<std::size_t> idx;
    idx.reserve(end - begin);
    for (std::size_t r = begin; r < end; ++r) idx.push_back(r);
    for (std::size_t i = idx.size(); i-- > 1;)
      std::swap(idx[i], idx[bounded_draw(rng, i + 1)]);
    for (std::size_t k = 0; k < idx.size(); ++k)
      fold_of[idx[k]] = static_cast<int>(k % kFolds);
  }

  CvReport report;
  if (models) models->clear();
  if (test_sets) test_sets->clear();
  for (int f = 0; f < kFolds; ++f) {
    std::vector<KanSample> train_rows, test_rows;
    for (std::size_t r = 0; r < rows.size(); ++r)
      (fold_of[r] == f ? test_rows : train_rows).push_back(rows[r]);

    KanConfig fold_config = config;
    fold_config.seed = config.seed + static_cast<std::uint64_t>(f) + 1;
    KanModel model = KanModel::initialize(fold_config, train_rows);
    const TrainReport train_report = train_lbfgs(model, train_rows, fold_config);

    std::vector<double> predicted(test_rows.size());
    model.predict(test_rows, predicted);
    std::vector<double> truth(test_rows.size());
    for (std::size_t r = 0; r < test_rows.size(); ++r) truth[r] = test_rows[r].s_a;

    FoldReport fold;
    fold.fold = f;
    fold.train_rows = train_rows.size();
    fold.test_rows = test_rows.size();
    fold.test_r2 = r_squared(truth, predicted);
    fold.final_train_mse = train_report.final_mse;
    report.folds.push_back(fold);

    if (models) models->push_back(std::move(model));
    if (test_sets) test_sets->push_back(std::move(test_rows));
  }

  double mean = 0.0;
  for (const FoldReport& f : report.folds) mean += f.test_r2;
  mean /= kFolds;
  double var = 0.0;
  for (const FoldReport& f : report.folds) var += (f.test_r2 - mean) * (f.test_r2 - mean);
  report.mean_r2 = mean;
  report.std_r2 = std::sqrt(var / (kFolds - 1));
  report.worst_fold = 0;
  for (int f = 1; f < kFolds; ++f)
    if (report.folds[static_cast<std::size_t>(f)].test_r2 <
        report.folds[static_cast<std::size_t>(report.worst_fold)].test_r2)
      report.worst_fold = f;
  return report;
}

std::vector<GroupR2> per_group_r2(const KanModel& model, std::span<const KanSample> rows) {
  if (rows.empty()) throw ConfigError("per-group R^2 needs rows");
  std::map<double, std::vector<std::size_t>> by_u;
  for (std::size_t r = 0; r < rows.size(); ++r) by_u[rows[r].u].push_back(r);

  std::vector<GroupR2> out;
  out.reserve(by_u.size());
  for (const auto& [u, idx] : by_u) {
    std::vector<KanSample> group_rows;
    group_rows.reserve(idx.size());
    for (std::size_t r : idx) group_rows.push_back(rows[r]);
    std::vector<double> predicted(group_rows.size());
    model.predict(group_rows, predicted);
    std::vector<double> truth(group_rows.size());
    for (std::size_t r = 0; r < group_rows.size(); ++r) truth[r] = group_rows[r].s_a;
    out.push_back({u, r_squared(truth, predicted), idx.size()});
  }
  return out;
}

}  // namespace entflow
