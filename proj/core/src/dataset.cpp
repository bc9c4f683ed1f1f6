#include "entflow/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "entflow/numio.hpp"

namespace entflow {

namespace {

constexpr const char* kFormatLine = "# entflow dataset v1";
constexpr const char* kHeaderLine = "U,h,L,t,n_A,S_A";
constexpr const char* kVersion = "0.1.0";

bool key_less(double u1, double h1, double u2, double h2) {
  if (u1 != u2) return u1 < u2;
  return h1 < h2;
}

std::string placement_text(const std::vector<Placement>& placement) {
  std::string out;
  for (const Placement& p : placement) {
    if (!out.empty()) out += ',';
    out += std::to_string(p.site);
    out += (p.spin == Spin::Up) ? 'u' : 'd';
  }
  return out;
}

std::vector<Placement> parse_placement(const std::string& text) {
  std::vector<Placement> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 2) throw ConfigError("malformed placement entry '" + item + "'");
    const char spin_char = item.back();
    Placement p;
    if (spin_char == 'u')
      p.spin = Spin::Up;
    else if (spin_char == 'd')
      p.spin = Spin::Down;
    else
      throw ConfigError("placement entry '" + item + "' must end in u or d");
    long long site = 0;
    if (!parse_int(std::string_view(item).substr(0, item.size() - 1), site))
      throw ConfigError("malformed placement site in '" + item + "'");
    p.site = static_cast<int>(site);
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError("empty initial placement");
  return out;
}

}  // namespace

void TrajectoryDataset::add_group(TrajectoryGroup group) {
  if (find(group.U, group.h) != nullptr)
    throw ConfigError("duplicate sweep group (U=" + format_g17(group.U) +
                      ", h=" + format_g17(group.h) + ")");
  double prev_t = -1.0;
  for (const TrajectorySample& s : group.samples) {
    if (!(s.t > prev_t))
      throw ConfigError("group t values must be strictly increasing");
    prev_t = s.t;
  }
  const auto pos = std::find_if(groups_.begin(), groups_.end(), [&](const TrajectoryGroup& g) {
    return key_less(group.U, group.h, g.U, g.h);
  });
  groups_.insert(pos, std::move(group));
}

const TrajectoryGroup* TrajectoryDataset::find(double U, double h) const {
  for (const TrajectoryGroup& g : groups_)
    if (g.U == U && g.h == h) return &g;
  return nullptr;
}

std::size_t TrajectoryDataset::total_rows() const {
  std::size_t n = 0;
  for (const TrajectoryGroup& g : groups_) n += g.samples.size();
  return n;
}

SystemSpec TrajectoryDataset::group_spec(const TrajectoryGroup& group) const {
  SystemSpec spec = base_;
  spec.U = group.U;
  if (default_barrier_)
    spec.set_barrier(group.h);
  return spec;
}

std::vector<TrajectorySample> run_trajectory(const SystemSpec& spec) {
  spec.validate();
  const FockBasis basis = build_basis(spec);
  const SparseHamiltonian h = build_hamiltonian(basis, spec);
  const EigenSystem eig = eigendecompose(h);
  const Bipartition part = Bipartition::post_barrier(spec.L);
  const QuantumState psi0 = initial_state(basis, spec);
  const std::vector<double> times = spec.time_grid();
  const std::vector<QuantumState> states = evolve(psi0, eig, times);

  std::vector<TrajectorySample> samples(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    samples[k].t = times[k];
    samples[k].n_a = region_density(states[k], part.a_sites);
    samples[k].s_a = entanglement_entropy(states[k], part);
  }
  return samples;
}

void parallel_for_index(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int pool = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

TrajectoryDataset sweep(const SystemSpec& base, std::span<const double> u_grid,
                        std::span<const double> h_grid, const SweepOptions& options) {
  if (u_grid.empty()) throw ConfigError("sweep: empty U grid");
  if (h_grid.empty()) throw ConfigError("sweep: empty h grid");
  for (double u : u_grid)
    if (!std::isfinite(u)) throw ConfigError("sweep: non-finite U grid value");
  for (double h : h_grid)
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("sweep: h grid values must be positive");

  TrajectoryDataset ds(base);
  std::vector<SystemSpec> jobs;
  for (double u : u_grid) {
    for (double h : h_grid) {
      if (base.tunneling_only && !(u < h)) {
        ds.skipped().push_back({u, h});
        continue;
      }
      SystemSpec spec = base;
      spec.U = u;
      spec.set_barrier(h);
      spec.validate();
      jobs.push_back(std::move(spec));
    }
  }

  std::vector<TrajectoryGroup> results(jobs.size());
  parallel_for_index(jobs.size(), options.workers, [&](std::size_t i) {
    results[i] = {jobs[i].U, jobs[i].barrier_height(), run_trajectory(jobs[i])};
  });

  std::sort(results.begin(), results.end(), [](const TrajectoryGroup& a, const TrajectoryGroup& b) {
    return key_less(a.U, a.h, b.U, b.h);
  });
  for (TrajectoryGroup& g : results) ds.add_group(std::move(g));
  return ds;
}

const char* dataset_format_version() { return kVersion; }

void save_dataset(const TrajectoryDataset& ds, std::ostream& os) {
  const SystemSpec& spec = ds.base_spec();
  os << kFormatLine << '\n';
  os << "# version = " << kVersion << '\n';
  os << "# L = " << spec.L << '\n';
  os << "# n_up = " << spec.n_up << '\n';
  os << "# n_down = " << spec.n_down << '\n';
  os << "# J = " << format_g17(spec.J) << '\n';
  os << "# t_max = " << format_g17(spec.t_max) << '\n';
  os << "# n_samples = " << spec.n_samples << '\n';
  os << "# initial_placement = " << placement_text(spec.initial_placement) << '\n';
  if (ds.uses_default_barrier())
    os << "# barrier = half_max\n";
  else
    os << "# barrier = explicit " << format_g17(spec.v_left) << ' ' << format_g17(spec.v_right)
       << '\n';
  os << "# tunneling_only = " << (spec.tunneling_only ? 1 : 0) << '\n';
  if (!ds.config_hash().empty()) os << "# config_hash = " << ds.config_hash() << '\n';
  if (!ds.skipped().empty()) {
    os << "# skipped =";
    for (const SkippedPoint& p : ds.skipped())
      os << ' ' << format_g17(p.U) << ':' << format_g17(p.h);
    os << '\n';
  }
  os << kHeaderLine << '\n';
  for (const TrajectoryGroup& g : ds.groups())
    for (const TrajectorySample& s : g.samples)
      os << format_g17(g.U) << ',' << format_g17(g.h) << ',' << spec.L << ','
         << format_g17(s.t) << ',' << format_g17(s.n_a) << ',' << format_g17(s.s_a) << '\n';
}

void save_dataset(const TrajectoryDataset& ds, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  save_dataset(ds, os);
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

namespace {

struct MetadataParser {
  SystemSpec spec;
  std::vector<SkippedPoint> skipped;
  bool default_barrier = true;
  std::string config_hash;

  void apply(const std::string& key, const std::string& value, int line_no) {
    const auto bad = [&](const std::string& what) {
      return ConfigError("line " + std::to_string(line_no) + ": " + what);
    };
    long long iv = 0;
    if (key == "version") {
      // informational; format compatibility is carried by the first line
    } else if (key == "config_hash") {
      config_hash = value;
    } else if (key == "L") {
      if (!parse_int(value, iv)) throw bad("malformed L");
      spec.L = static_cast<int>(iv);
    } else if (key == "n_up") {
      if (!parse_int(value, iv)) throw bad("malformed n_up");
      spec.n_up = static_cast<int>(iv);
    } else if (key == "n_down") {
      if (!parse_int(value, iv)) throw bad("malformed n_down");
      spec.n_down = static_cast<int>(iv);
    } else if (key == "J") {
      if (!parse_double(value, spec.J)) throw bad("malformed J");
    } else if (key == "t_max") {
      if (!parse_double(value, spec.t_max)) throw bad("malformed t_max");
    } else if (key == "n_samples") {
      if (!parse_int(value, iv)) throw bad("malformed n_samples");
      spec.n_samples = static_cast<int>(iv);
    } else if (key == "initial_placement") {
      spec.initial_placement = parse_placement(value);
    } else if (key == "barrier") {
      if (value == "half_max") {
        default_barrier = true;
      } else if (value.rfind("explicit ", 0) == 0) {
        default_barrier = false;
        std::stringstream ss(value.substr(9));
        std::string a, b;
        if (!(ss >> a >> b) || !parse_double(a, spec.v_left) || !parse_double(b, spec.v_right))
          throw bad("malformed explicit barrier");
      } else {
        throw bad("unknown barrier profile '" + value + "'");
      }
    } else if (key == "tunneling_only") {
      if (!parse_int(value, iv) || (iv != 0 && iv != 1)) throw bad("malformed tunneling_only");
      spec.tunneling_only = iv == 1;
    } else if (key == "skipped") {
      std::stringstream ss(value);
      std::string pair;
      while (ss >> pair) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw bad("malformed skipped pair '" + pair + "'");
        SkippedPoint p;
        if (!parse_double(pair.substr(0, colon), p.U) ||
            !parse_double(pair.substr(colon + 1), p.h))
          throw bad("malformed skipped pair '" + pair + "'");
        skipped.push_back(p);
      }
    } else {
      throw bad("unknown metadata key '" + key + "'");
    }
  }
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

TrajectoryDataset load_dataset(std::istream& is) {
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line) || line != kFormatLine)
    throw ConfigError("line 1: missing dataset format line '" + std::string(kFormatLine) + "'");
  line_no = 1;

  MetadataParser meta;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": malformed metadata line");
      std::string key = line.substr(1, eq - 1);
      std::string value = line.substr(eq + 1);
      const auto trim = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
      };
      trim(key);
      trim(value);
      meta.apply(key, value, line_no);
      continue;
    }
    if (line == kHeaderLine) {
      header_seen = true;
      break;
    }
    throw ConfigError("line " + std::to_string(line_no) + ": expected metadata or header, got '" +
                      line + "'");
  }
  if (!header_seen) throw ConfigError("dataset header '" + std::string(kHeaderLine) + "' missing");

  TrajectoryDataset ds(meta.spec);
  ds.set_uses_default_barrier(meta.default_barrier);
  ds.skipped() = meta.skipped;
  ds.set_config_hash(meta.config_hash);

  TrajectoryGroup current;
  bool have_group = false;
  const auto flush = [&] {
    if (have_group) ds.add_group(std::move(current));
    current = TrajectoryGroup{};
    have_group = false;
  };

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 6)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                        std::to_string(fields.size()));
    double u = 0, h = 0;
    long long l_sites = 0;
    TrajectorySample s;
    if (!parse_double(fields[0], u) || !parse_double(fields[1], h) ||
        !parse_int(fields[2], l_sites) || !parse_double(fields[3], s.t) ||
        !parse_double(fields[4], s.n_a) || !parse_double(fields[5], s.s_a))
      throw ConfigError("line " + std::to_string(line_no) + ": malformed numeric field");
    if (!std::isfinite(u) || !std::isfinite(h) || !std::isfinite(s.t) || !std::isfinite(s.n_a) ||
        !std::isfinite(s.s_a))
      throw ConfigError("line " + std::to_string(line_no) + ": non-finite value");
    if (l_sites != meta.spec.L)
      throw ConfigError("line " + std::to_string(line_no) + ": L mismatch with metadata");

    if (!have_group || current.U != u || current.h != h) {
      flush();
      current.U = u;
      current.h = h;
      have_group = true;
    } else if (!current.samples.empty() && !(s.t > current.samples.back().t)) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": t not strictly increasing within group");
    }
    current.samples.push_back(s);
  }
  flush();
  return ds;
}

TrajectoryDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open dataset '" + path.string() + "'");
  return load_dataset(is);
}

}  // namespace entflow
