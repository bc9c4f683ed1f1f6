#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "entflow/observables.hpp"

namespace entflow {

struct TrajectorySample {
  double t = 0.0;    // 1/J
  double n_a = 0.0;  // particles past the barrier
  double s_a = 0.0;  // nats
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct TrajectoryGroup {
  double U = 0.0;
  double h = 0.0;
  std::vector<TrajectorySample> samples;
  friend bool operator==(const TrajectoryGroup&, const TrajectoryGroup&) = default;
};

struct SkippedPoint {
  double U = 0.0;
  double h = 0.0;
  friend bool operator==(const SkippedPoint&, const SkippedPoint&) = default;
};

// Rows of (U, h, t, n_A, S_A) grouped by (U, h), plus the shared SystemSpec
// metadata needed to reproduce them. Groups are kept sorted by (U, h).
class TrajectoryDataset {
 public:
  TrajectoryDataset() = default;
  explicit TrajectoryDataset(SystemSpec base) : base_(std::move(base)) {}

  const SystemSpec& base_spec() const { return base_; }
  SystemSpec& base_spec() { return base_; }

  // Keeps groups sorted; rejects duplicate (U, h) keys and non-ascending t.
  void add_group(TrajectoryGroup group);
  const std::vector<TrajectoryGroup>& groups() const { return groups_; }
  const TrajectoryGroup* find(double U, double h) const;

  std::vector<SkippedPoint>& skipped() { return skipped_; }
  const std::vector<SkippedPoint>& skipped() const { return skipped_; }

  // True when every group's barrier is (h/2, h); explicit profiles come from
  // single simulate runs.
  bool uses_default_barrier() const { return default_barrier_; }
  void set_uses_default_barrier(bool v) { default_barrier_ = v; }

  // Fingerprint of the run configuration that produced the file (optional).
  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(std::string hash) { config_hash_ = std::move(hash); }

  std::size_t total_rows() const;
  bool empty() const { return groups_.empty(); }

  // The base spec with (U, h) applied, for re-running a group.
  SystemSpec group_spec(const TrajectoryGroup& group) const;

  friend bool operator==(const TrajectoryDataset&, const TrajectoryDataset&) = default;

 private:
  SystemSpec base_;
  std::vector<TrajectoryGroup> groups_;
  std::vector<SkippedPoint> skipped_;
  bool default_barrier_ = true;
  std::string config_hash_;
};

// Version string written into dataset metadata.
const char* dataset_format_version();

// Evolve the spec's initial state over its time grid and record (t, n_A, S_A).
std::vector<TrajectorySample> run_trajectory(const SystemSpec& spec);

struct SweepOptions {
  int workers = 1;
};

// One group per (U, h) pair with the default (h/2, h) barrier profile.
// When base.tunneling_only is set, pairs with U >= h are skipped and logged.
TrajectoryDataset sweep(const SystemSpec& base, std::span<const double> u_grid,
                        std::span<const double> h_grid, const SweepOptions& options = {});

// CSV with '#'-prefixed metadata, header U,h,L,t,n_A,S_A, 17-digit values.
// load(save(ds)) == ds bit-exactly on all numeric fields.
void save_dataset(const TrajectoryDataset& ds, std::ostream& os);
void save_dataset(const TrajectoryDataset& ds, const std::filesystem::path& path);
TrajectoryDataset load_dataset(std::istream& is);
TrajectoryDataset load_dataset(const std::filesystem::path& path);

// Deterministic helper used by sweeps and cross-validation: runs fn(0..n-1)
// on `workers` threads; exceptions are rethrown on the caller (first job
// order). Results must be written to per-index slots by the callee.
void parallel_for_index(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace entflow
