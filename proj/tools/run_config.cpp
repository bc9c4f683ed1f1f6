#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "entflow/numio.hpp"

namespace entflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value, bool& out) {
  if (value == "true" || value == "1" || value == "on") {
    out = true;
    return true;
  }
  if (value == "false" || value == "0" || value == "off") {
    out = false;
    return true;
  }
  return false;
}

std::vector<Placement> parse_placement_list(const std::string& text, const std::string& where) {
  std::vector<Placement> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.size() < 2) throw ConfigError(where + ": malformed placement '" + item + "'");
    Placement p;
    const char spin = item.back();
    if (spin == 'u')
      p.spin = Spin::Up;
    else if (spin == 'd')
      p.spin = Spin::Down;
    else
      throw ConfigError(where + ": placement '" + item + "' must end in u or d");
    long long site = 0;
    if (!parse_int(std::string_view(item).substr(0, item.size() - 1), site))
      throw ConfigError(where + ": malformed placement site in '" + item + "'");
    p.site = static_cast<int>(site);
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError(where + ": empty placement list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& where) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    if (!parse_int(trim(item), v)) throw ConfigError(where + ": malformed integer '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

std::string grid_text(const std::vector<double>& grid) {
  std::string out;
  for (double v : grid) {
    if (!out.empty()) out += ',';
    out += format_g17(v);
  }
  return out;
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

std::string widths_text(const std::vector<int>& widths) {
  std::string out;
  for (int w : widths) {
    if (!out.empty()) out += ',';
    out += std::to_string(w);
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo_s, hi_s, step_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
        !std::getline(ss, step_s))
      throw ConfigError(key + ": range syntax is lo:hi:step");
    double lo = 0, hi = 0, step = 0;
    if (!parse_double(trim(lo_s), lo) || !parse_double(trim(hi_s), hi) ||
        !parse_double(trim(step_s), step))
      throw ConfigError(key + ": malformed range bound");
    if (!(step > 0.0)) throw ConfigError(key + ": range step must be positive");
    for (int i = 0; lo + i * step <= hi + 1e-12 * step; ++i) out.push_back(lo + i * step);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0;
      if (!parse_double(trim(item), v)) throw ConfigError(key + ": malformed value '" + item + "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty grid");
  return out;
}

void RunConfig::apply_entry(const std::string& key, const std::string& value,
                            const std::string& where) {
  const auto bad = [&](const std::string& what) { return ConfigError(where + ": " + what); };
  long long iv = 0;
  double dv = 0;
  bool bv = false;

  if (key == "L") {
    if (!parse_int(value, iv)) throw bad("malformed L");
    spec.L = static_cast<int>(iv);
  } else if (key == "n_up") {
    if (!parse_int(value, iv)) throw bad("malformed n_up");
    spec.n_up = static_cast<int>(iv);
  } else if (key == "n_down") {
    if (!parse_int(value, iv)) throw bad("malformed n_down");
    spec.n_down = static_cast<int>(iv);
  } else if (key == "U") {
    if (!parse_double(value, dv)) throw bad("malformed U");
    spec.U = dv;
  } else if (key == "h") {
    if (!parse_double(value, dv)) throw bad("malformed h");
    spec.set_barrier(dv);
    explicit_barrier = false;
  } else if (key == "v_left") {
    if (!parse_double(value, dv)) throw bad("malformed v_left");
    spec.v_left = dv;
    explicit_barrier = true;
  } else if (key == "v_right") {
    if (!parse_double(value, dv)) throw bad("malformed v_right");
    spec.v_right = dv;
    explicit_barrier = true;
  } else if (key == "t_max") {
    if (!parse_double(value, dv)) throw bad("malformed t_max");
    spec.t_max = dv;
  } else if (key == "n_samples") {
    if (!parse_int(value, iv)) throw bad("malformed n_samples");
    spec.n_samples = static_cast<int>(iv);
  } else if (key == "initial_placement") {
    spec.initial_placement = parse_placement_list(value, where);
  } else if (key == "tunneling_only") {
    if (!parse_bool(value, bv)) throw bad("malformed tunneling_only");
    spec.tunneling_only = bv;
  } else if (key == "u_grid") {
    u_grid = parse_grid(value, key);
  } else if (key == "h_grid") {
    h_grid = parse_grid(value, key);
  } else if (key == "spline_knots") {
    if (!parse_int(value, iv)) throw bad("malformed spline_knots");
    spline_knots = static_cast<int>(iv);
  } else if (key == "spline_fit") {
    if (!parse_bool(value, bv)) throw bad("malformed spline_fit");
    spline_fit = bv;
  } else if (key == "kan_widths") {
    kan.widths = parse_int_list(value, where);
  } else if (key == "kan_order") {
    if (!parse_int(value, iv)) throw bad("malformed kan_order");
    kan.spline_order = static_cast<int>(iv);
  } else if (key == "kan_grid") {
    if (!parse_int(value, iv)) throw bad("malformed kan_grid");
    kan.grid_size = static_cast<int>(iv);
  } else if (key == "kan_grid_is_basis_count") {
    if (!parse_bool(value, bv)) throw bad("malformed kan_grid_is_basis_count");
    kan.grid_is_basis_count = bv;
  } else if (key == "kan_lr") {
    if (!parse_double(value, dv)) throw bad("malformed kan_lr");
    kan.learning_rate = dv;
  } else if (key == "kan_epochs") {
    if (!parse_int(value, iv)) throw bad("malformed kan_epochs");
    kan.epochs = static_cast<int>(iv);
  } else if (key == "kan_base_blend") {
    if (!parse_bool(value, bv)) throw bad("malformed kan_base_blend");
    kan.base_blend = bv;
  } else if (key == "kan_init_scale") {
    if (!parse_double(value, dv)) throw bad("malformed kan_init_scale");
    kan.init_scale = dv;
  } else if (key == "seed") {
    if (!parse_int(value, iv) || iv < 0) throw bad("malformed seed");
    seed = static_cast<std::uint64_t>(iv);
  } else if (key == "workers") {
    if (!parse_int(value, iv) || iv < 1) throw bad("workers must be >= 1");
    workers = static_cast<int>(iv);
  } else if (key == "out_dir") {
    if (value.empty()) throw bad("out_dir must not be empty");
    out_dir = value;
  } else if (key == "plot") {
    if (!parse_bool(value, bv)) throw bad("malformed plot");
    plot = bv;
  } else {
    throw bad("unknown config key '" + key + "'");
  }
}

void RunConfig::apply_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_entry(key, value, path.string() + ":" + std::to_string(line_no));
  }
}

void RunConfig::finalize() {
  kan.seed = seed;
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "L = " << spec.L << '\n';
  os << "n_up = " << spec.n_up << '\n';
  os << "n_down = " << spec.n_down << '\n';
  os << "U = " << format_g17(spec.U) << '\n';
  os << "v_left = " << format_g17(spec.v_left) << '\n';
  os << "v_right = " << format_g17(spec.v_right) << '\n';
  os << "t_max = " << format_g17(spec.t_max) << '\n';
  os << "n_samples = " << spec.n_samples << '\n';
  os << "initial_placement = " << placement_text(spec.initial_placement) << '\n';
  os << "tunneling_only = " << (spec.tunneling_only ? "true" : "false") << '\n';
  if (!u_grid.empty()) os << "u_grid = " << grid_text(u_grid) << '\n';
  if (!h_grid.empty()) os << "h_grid = " << grid_text(h_grid) << '\n';
  os << "spline_knots = " << spline_knots << '\n';
  os << "spline_fit = " << (spline_fit ? "true" : "false") << '\n';
  os << "kan_widths = " << widths_text(kan.widths) << '\n';
  os << "kan_order = " << kan.spline_order << '\n';
  os << "kan_grid = " << kan.grid_size << '\n';
  os << "kan_grid_is_basis_count = " << (kan.grid_is_basis_count ? "true" : "false") << '\n';
  os << "kan_lr = " << format_g17(kan.learning_rate) << '\n';
  os << "kan_epochs = " << kan.epochs << '\n';
  os << "kan_base_blend = " << (kan.base_blend ? "true" : "false") << '\n';
  os << "kan_init_scale = " << format_g17(kan.init_scale) << '\n';
  os << "seed = " << seed << '\n';
  return os.str();
}

std::string RunConfig::config_hash() const { return to_hex(fnv1a64(canonical_text())); }

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "fig2a") {
    c.spec.L = 4;
    c.spec.U = 2.0;
    c.spec.set_barrier(5.0);
    c.spline_fit = true;
  } else if (name == "fig2b") {
    c.spec.L = 4;
    c.spec.U = 4.0;
    c.spec.set_barrier(6.0);
    c.spline_fit = true;
  } else if (name == "fig3-worst-l4") {
    c.spec.L = 4;
    c.spec.U = 2.0;
    c.spec.set_barrier(6.0);
  } else if (name == "fig3-worst-l8") {
    c.spec.L = 8;
    c.spec.U = 3.0;
    c.spec.set_barrier(6.0);
  } else if (name == "fig4-l4" || name == "fig4-l8") {
    c.spec.L = (name == "fig4-l4") ? 4 : 8;
    c.u_grid = parse_grid("2:9:1", "u_grid");
    c.h_grid = parse_grid("5:10:1", "h_grid");
    c.spec.tunneling_only = false;
  } else if (name == "kan-l4" || name == "kan-l8") {
    c.spec.L = (name == "kan-l4") ? 4 : 8;
    c.u_grid = parse_grid("2:5.5:0.5", "u_grid");
    c.h_grid = {6.0};
    c.spec.tunneling_only = true;
  } else if (name == "kan-l4-h8" || name == "kan-l8-h8") {
    c.spec.L = (name == "kan-l4-h8") ? 4 : 8;
    c.u_grid = parse_grid("2:5.5:0.5", "u_grid");
    c.h_grid = {8.0};
    c.spec.tunneling_only = true;
  } else if (name == "smoke-l20") {
    c.spec.L = 20;
    c.spec.U = 4.0;
    c.spec.set_barrier(6.0);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"fig2a", "single trajectory, L=4, U=2J, h=5J, with cubic spline fit"},
      {"fig2b", "single trajectory, L=4, U=4J, h=6J, with cubic spline fit"},
      {"fig3-worst-l4", "worst KAN group, L=4, U=2J, h=6J"},
      {"fig3-worst-l8", "worst KAN group, L=8, U=3J, h=6J"},
      {"fig4-l4", "binary-entropy heatmap sweep, L=4, U in [2,9]J x h in [5,10]J"},
      {"fig4-l8", "binary-entropy heatmap sweep, L=8, U in [2,9]J x h in [5,10]J"},
      {"kan-l4", "KAN training sweep, L=4, U in {2,...,5.5}J, h=6J"},
      {"kan-l8", "KAN training sweep, L=8, U in {2,...,5.5}J, h=6J"},
      {"kan-l4-h8", "KAN training sweep variant, L=4, h=8J"},
      {"kan-l8-h8", "KAN training sweep variant, L=8, h=8J"},
      {"smoke-l20", "L=20 scalability run, U=4J, h=6J"},
  };
}

}  // namespace entflow::cli
