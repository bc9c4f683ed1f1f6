#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "entflow/curvefit.hpp"
#include "entflow/numio.hpp"
#include "svg.hpp"

namespace entflow::cli {

namespace {

namespace fs = std::filesystem;

fs::path prepare_out_dir(const RunConfig& config) {
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_resolved_config(const RunConfig& config, const fs::path& dir,
                           const std::string& command) {
  std::ofstream os(dir / (command + "_config.txt"));
  if (!os) throw ConfigError("cannot write resolved config");
  os << "# resolved " << command << " configuration (hash " << config.config_hash() << ")\n";
  os << config.canonical_text();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return os;
}

TrajectoryDataset single_group_dataset(const RunConfig& config,
                                       std::vector<TrajectorySample> samples) {
  TrajectoryDataset ds(config.spec);
  ds.set_uses_default_barrier(!config.explicit_barrier);
  ds.set_config_hash(config.config_hash());
  ds.add_group({config.spec.U, config.spec.barrier_height(), std::move(samples)});
  return ds;
}

void plot_group(const fs::path& path, const TrajectoryGroup& group, const SplineFit* spline,
                const BinaryFitResult* binary) {
  Series cloud;
  for (const TrajectorySample& s : group.samples) {
    cloud.x.push_back(s.n_a);
    cloud.y.push_back(s.s_a);
  }
  std::vector<Series> series{cloud};
  const auto add_curve = [&](auto&& f, const char* color) {
    Series curve;
    curve.as_line = true;
    curve.color = color;
    double lo = 1e300, hi = -1e300;
    for (const TrajectorySample& s : group.samples) {
      lo = std::min(lo, s.n_a);
      hi = std::max(hi, s.n_a);
    }
    for (int k = 0; k <= 200; ++k) {
      const double n = lo + (hi - lo) * k / 200.0;
      curve.x.push_back(n);
      curve.y.push_back(f(n));
    }
    series.push_back(std::move(curve));
  };
  if (spline) add_curve([&](double n) { return spline->evaluate(n); }, "#111111");
  if (binary)
    add_curve(
        [&](double n) {
          const double nc = std::clamp(n, 0.0, 1.0);
          return binary->c1 * xlogx(nc) + binary->c2 * xlogx(1.0 - nc);
        },
        "#d62728");
  write_svg_scatter(path,
                    "U=" + format_g17(group.U) + "J, h=" + format_g17(group.h) + "J",
                    "n_A", "S_A", series);
}

}  // namespace

int cmd_simulate(RunConfig config, const std::string& dump_hamiltonian) {
  config.finalize();
  config.spec.validate();
  const fs::path dir = prepare_out_dir(config);
  write_resolved_config(config, dir, "simulate");

  std::vector<TrajectorySample> samples = run_trajectory(config.spec);
  double max_n = 0.0, max_s = 0.0;
  for (const TrajectorySample& s : samples) {
    max_n = std::max(max_n, s.n_a);
    max_s = std::max(max_s, s.s_a);
  }

  const TrajectoryDataset ds = single_group_dataset(config, std::move(samples));
  save_dataset(ds, dir / "trajectory.csv");

  if (!dump_hamiltonian.empty()) {
    const FockBasis basis = build_basis(config.spec);
    const SparseHamiltonian h = build_hamiltonian(basis, config.spec);
    auto os = open_output(dump_hamiltonian);
    h.write_coordinate(os);
  }
  if (config.plot)
    plot_group(dir / "trajectory.svg", ds.groups().front(), nullptr, nullptr);

  std::cout << "trajectory: L=" << config.spec.L << " U=" << format_g17(config.spec.U)
            << " h=" << format_g17(config.spec.barrier_height()) << " rows="
            << ds.total_rows() << "\n";
  std::cout << "max n_A = " << format_g17(max_n) << "\n";
  std::cout << "max S_A = " << format_g17(max_s) << "\n";
  std::cout << "wrote " << (dir / "trajectory.csv").string() << "\n";
  return 0;
}

int cmd_sweep(RunConfig config) {
  config.finalize();
  if (config.u_grid.empty() || config.h_grid.empty())
    throw ConfigError("sweep needs nonempty u_grid and h_grid");
  const fs::path dir = prepare_out_dir(config);
  write_resolved_config(config, dir, "sweep");

  SweepOptions options;
  options.workers = config.workers;
  TrajectoryDataset ds = sweep(config.spec, config.u_grid, config.h_grid, options);
  ds.set_config_hash(config.config_hash());
  save_dataset(ds, dir / "dataset.csv");

  std::cout << "sweep: " << ds.groups().size() << " groups, " << ds.skipped().size()
            << " skipped, " << ds.total_rows() << " rows\n";
  std::cout << "wrote " << (dir / "dataset.csv").string() << "\n";
  return 0;
}

int cmd_fit(RunConfig config, const std::string& dataset_path) {
  config.finalize();
  const fs::path dir = prepare_out_dir(config);
  write_resolved_config(config, dir, "fit");
  const TrajectoryDataset ds = load_dataset(fs::path(dataset_path));

  const std::vector<HeatmapCell> cells = r2_heatmap(ds);
  std::size_t ok = 0;

  {
    auto os = open_output(dir / "fit_groups.csv");
    os << "# config_hash = " << config.config_hash() << '\n';
    os << "U,h,c1,c2,R2,residual_rms,points,rejected\n";
    for (const HeatmapCell& c : cells) {
      if (!c.fit) continue;
      os << format_g17(c.U) << ',' << format_g17(c.h) << ',' << format_g17(c.fit->c1) << ','
         << format_g17(c.fit->c2) << ',' << format_g17(c.fit->r_squared) << ','
         << format_g17(c.fit->residual_rms) << ',' << c.fit->point_count << ','
         << c.fit->rejected_count << '\n';
    }
  }
  {
    auto os = open_output(dir / "fit_heatmap.csv");
    os << "# config_hash = " << config.config_hash() << '\n';
    os << "U,h,R2\n";
    for (const HeatmapCell& c : cells) {
      if (!c.fit) {
        os << "# failed U=" << format_g17(c.U) << " h=" << format_g17(c.h) << ": " << c.error
           << '\n';
        continue;
      }
      os << format_g17(c.U) << ',' << format_g17(c.h) << ',' << format_g17(c.fit->r_squared)
         << '\n';
    }
  }

  double min_r2 = 1.0;
  const HeatmapCell* worst = nullptr;
  for (const HeatmapCell& c : cells) {
    if (!c.fit) {
      std::cerr << "fit failed for U=" << format_g17(c.U) << " h=" << format_g17(c.h) << ": "
                << c.error << "\n";
      continue;
    }
    ++ok;
    if (c.fit->r_squared <= min_r2) {
      min_r2 = c.fit->r_squared;
      worst = &c;
    }
  }

  if (config.spline_fit) {
    auto os = open_output(dir / "spline_fits.csv");
    os << "# config_hash = " << config.config_hash() << '\n';
    os << "U,h,R2,residual_rms,points\n";
    for (const TrajectoryGroup& g : ds.groups()) {
      try {
        const SplineFit fit = fit_bspline(to_points(g.samples), config.spline_knots);
        os << format_g17(g.U) << ',' << format_g17(g.h) << ',' << format_g17(fit.r_squared)
           << ',' << format_g17(fit.residual_rms) << ',' << fit.point_count << '\n';
        if (config.plot)
          plot_group(dir / ("spline_U" + format_g17(g.U) + "_h" + format_g17(g.h) + ".svg"), g,
                     &fit, nullptr);
      } catch (const std::exception& e) {
        os << "# failed U=" << format_g17(g.U) << " h=" << format_g17(g.h) << ": " << e.what()
           << '\n';
        std::cerr << "spline fit failed for U=" << format_g17(g.U) << " h=" << format_g17(g.h)
                  << ": " << e.what() << "\n";
      }
    }
  }

  if (config.plot) {
    std::vector<HeatCell> heat;
    for (const HeatmapCell& c : cells)
      heat.push_back({c.U, c.h, c.fit ? c.fit->r_squared : 0.0, !c.fit});
    write_svg_heatmap(dir / "fit_heatmap.svg", "binary-entropy fit R^2", "U/J", "h/J", heat);
    if (worst && worst->fit) {
      const TrajectoryGroup* g = ds.find(worst->U, worst->h);
      if (g) plot_group(dir / "fit_worst_group.svg", *g, nullptr, &*worst->fit);
    }
  }

  std::cout << "fit: " << ok << "/" << cells.size() << " groups";
  if (worst && worst->fit)
    std::cout << ", min R^2 = " << format_g17(min_r2) << " at U=" << format_g17(worst->U)
              << " h=" << format_g17(worst->h);
  std::cout << "\n";
  if (ok == 0) throw NumericError("every group fit failed");
  return 0;
}

int cmd_kan(RunConfig config, const std::string& action, const std::string& dataset_path,
            const std::string& checkpoint_path) {
  config.finalize();
  const fs::path dir = prepare_out_dir(config);
  write_resolved_config(config, dir, "kan_" + action);
  const fs::path checkpoint =
      checkpoint_path.empty() ? dir / "kan_checkpoint.json" : fs::path(checkpoint_path);

  if (action == "train") {
    const TrajectoryDataset ds = load_dataset(fs::path(dataset_path));
    const std::vector<KanSample> rows = kan_samples(ds);
    KanModel model = KanModel::initialize(config.kan, rows);
    const TrainReport report = train_lbfgs(model, rows, config.kan);
    if (!std::isfinite(report.final_mse))
      throw NumericError("training diverged: non-finite loss");
    model.save(checkpoint);
    auto os = open_output(dir / "kan_train.txt");
    os << "config_hash = " << config.config_hash() << '\n';
    os << "rows = " << rows.size() << '\n';
    os << "epochs_run = " << report.epochs_run << '\n';
    os << "final_mse = " << format_g17(report.final_mse) << '\n';
    os << "line_search_fallbacks = " << report.line_search_fallbacks << '\n';
    os << "function_evaluations = " << report.function_evaluations << '\n';
    std::cout << "train: rows=" << rows.size() << " epochs=" << report.epochs_run
              << " final MSE=" << format_g17(report.final_mse) << "\n";
    std::cout << "wrote " << checkpoint.string() << "\n";
    return 0;
  }

  if (action == "cv") {
    const TrajectoryDataset ds = load_dataset(fs::path(dataset_path));
    std::vector<KanModel> models;
    std::vector<std::vector<KanSample>> test_sets;
    const CvReport report = cross_validate(ds, config.kan, &models, &test_sets);

    {
      auto os = open_output(dir / "kan_cv.csv");
      os << "# config_hash = " << config.config_hash() << '\n';
      os << "fold,train_rows,test_rows,test_R2,final_train_mse\n";
      for (const FoldReport& f : report.folds)
        os << f.fold + 1 << ',' << f.train_rows << ',' << f.test_rows << ','
           << format_g17(f.test_r2) << ',' << format_g17(f.final_train_mse) << '\n';
      os << "# mean = " << format_g17(report.mean_r2) << '\n';
      os << "# std = " << format_g17(report.std_r2) << '\n';
    }
    {
      auto os = open_output(dir / "kan_cv.txt");
      os << "5-fold cross-validation, L=" << ds.base_spec().L << "\n\n";
      os << "Fold   R^2\n";
      char buf[64];
      for (const FoldReport& f : report.folds) {
        std::snprintf(buf, sizeof(buf), "%-6d %.5f\n", f.fold + 1, f.test_r2);
        os << buf;
      }
      std::snprintf(buf, sizeof(buf), "Mean   %.5f +/- %.5f\n", report.mean_r2, report.std_r2);
      os << buf;
    }

    const std::vector<GroupR2> per_u =
        per_group_r2(models[static_cast<std::size_t>(report.worst_fold)],
                     test_sets[static_cast<std::size_t>(report.worst_fold)]);
    {
      auto os = open_output(dir / "kan_per_group_r2.csv");
      os << "# config_hash = " << config.config_hash() << '\n';
      os << "# worst fold = " << report.worst_fold + 1 << '\n';
      os << "U,R2,rows\n";
      for (const GroupR2& g : per_u)
        os << format_g17(g.u) << ',' << format_g17(g.r2) << ',' << g.rows << '\n';
    }
    if (config.plot) {
      const KanModel& model = models[static_cast<std::size_t>(report.worst_fold)];
      const auto& rows = test_sets[static_cast<std::size_t>(report.worst_fold)];
      double worst_u = per_u.front().u, worst_r2 = per_u.front().r2;
      for (const GroupR2& g : per_u)
        if (g.r2 < worst_r2) {
          worst_r2 = g.r2;
          worst_u = g.u;
        }
      Series truth, predicted;
      predicted.color = "#ff7f0e";
      for (const KanSample& s : rows) {
        if (s.u != worst_u) continue;
        truth.x.push_back(s.n_a);
        truth.y.push_back(s.s_a);
        predicted.x.push_back(s.n_a);
        predicted.y.push_back(model.forward(s.u, s.n_a));
      }
      write_svg_scatter(dir / "kan_worst_group.svg",
                        "worst test group U=" + format_g17(worst_u) + "J", "n_A", "S_A",
                        {truth, predicted});
    }

    std::cout << "cv: mean R^2 = " << format_g17(report.mean_r2) << " +/- "
              << format_g17(report.std_r2) << " (worst fold " << report.worst_fold + 1 << ")\n";
    for (const FoldReport& f : report.folds)
      std::cout << "  fold " << f.fold + 1 << ": R^2 = " << format_g17(f.test_r2) << "\n";
    return 0;
  }

  if (action == "eval") {
    const TrajectoryDataset ds = load_dataset(fs::path(dataset_path));
    const KanModel model = KanModel::load(checkpoint);
    const std::vector<KanSample> rows = kan_samples(ds);
    if (rows.empty()) throw ConfigError("dataset has no rows to evaluate");

    EvalStats stats;
    std::vector<double> predicted(rows.size());
    model.predict(rows, predicted, &stats);
    std::vector<double> truth(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) truth[r] = rows[r].s_a;
    const double global_r2 = r_squared(truth, predicted);
    const std::vector<GroupR2> per_u = per_group_r2(model, rows);

    auto os = open_output(dir / "kan_eval.csv");
    os << "# config_hash = " << config.config_hash() << '\n';
    os << "# global_R2 = " << format_g17(global_r2) << '\n';
    os << "# clamped_inputs = " << stats.clamped << '\n';
    os << "U,R2,rows\n";
    for (const GroupR2& g : per_u)
      os << format_g17(g.u) << ',' << format_g17(g.r2) << ',' << g.rows << '\n';

    std::cout << "eval: rows=" << rows.size() << " global R^2 = " << format_g17(global_r2)
              << " clamped inputs = " << stats.clamped << "\n";
    return 0;
  }

  throw ConfigError("unknown kan action '" + action + "' (expected train, cv or eval)");
}

int cmd_presets() {
  for (const auto& [name, description] : preset_catalog())
    std::printf("%-14s %s\n", name.c_str(), description.c_str());
  return 0;
}

}  // namespace entflow::cli
