#include "blz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blz {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections parse_ini(const std::string& text, const std::string& origin) {
  Sections out;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    out[section][key] = val;
  }
  return out;
}

struct SectionReader {
  const std::string origin;
  const std::string name;
  std::map<std::string, std::string> kv;
  std::map<std::string, bool> seen;

  std::string path(const std::string& key) const {
    return origin + ": [" + name + "] " + key;
  }
  bool has(const std::string& key) {
    const bool h = kv.count(key) > 0;
    if (h) seen[key] = true;
    return h;
  }
  double get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(kv.at(key), &pos);
      if (pos != kv.at(key).size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(path(key) + ": not a number: '" + kv.at(key) + "'");
    }
  }
  int get_int(const std::string& key, int fallback) {
    const double v = get_double(key, fallback);
    if (v != std::floor(v))
      throw ConfigError(path(key) + ": expected an integer");
    return static_cast<int>(v);
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    try {
      return std::stoull(kv.at(key));
    } catch (const std::exception&) {
      throw ConfigError(path(key) + ": not an unsigned integer");
    }
  }
  bool get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string& v = kv.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(path(key) + ": expected true/false");
  }
  std::string get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return kv.at(key);
  }
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream in(kv.at(key));
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError(path(key) + ": bad list entry '" + item + "'");
      }
    }
    if (out.empty()) throw ConfigError(path(key) + ": empty list");
    return out;
  }
  void finish() const {
    for (const auto& [key, _] : kv)
      if (!seen.count(key))
        throw ConfigError(path(key) + ": unknown key");
  }
};

}  // namespace

std::string regime_tag(double gamma, double s) {
  if (gamma > 0.0) return "hard";
  if (gamma > std::max(-2.0 * s, -1.0)) return "moderately-soft";
  if (gamma <= -1.0 && gamma > -2.0 * s) return "very-soft";
  return "outside-regimes";
}

void RunConfig::validate() {
  if (schema_version != 1)
    throw ConfigError("schema_version: only version 1 is understood");
  if (grid.n_points < 4 || grid.n_points % 2 != 0)
    throw ConfigError("grid.n_points = " + std::to_string(grid.n_points) +
                      ": grids must have even size >= 4");
  if (!(grid.half_width > 0.0) || !std::isfinite(grid.half_width))
    throw ConfigError("grid.half_width must be positive and finite");
  try {
    cross_section.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cross_section: ") + e.what());
  }
  if (!(time.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(time.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (time.checkpoints < 1) throw ConfigError("time.checkpoints must be >= 1");
  if (time.scheme != "euler" && time.scheme != "rk2" && time.scheme != "rk4")
    throw ConfigError("time.scheme must be euler, rk2, or rk4");
  static const char* kinds[] = {"maxwellian",       "bkw",
                                "ball_indicator",   "gaussian_mixture",
                                "bump_sum",         "indicator_smoothed",
                                "random_band_limited"};
  if (std::find(std::begin(kinds), std::end(kinds), initial.type) ==
      std::end(kinds))
    throw ConfigError("initial.type: unknown kind '" + initial.type + "'");
  if (initial.type == "bkw" &&
      (initial.k_shape < 0.6 || initial.k_shape > 1.0))
    throw ConfigError(
        "initial.k_shape = " + std::to_string(initial.k_shape) +
        ": the self-similar profile is nonnegative only for k in [3/5, 1]");
  for (double d : schedule.delta_set)
    if (d < 0.0 || d > 1.0)
      throw ConfigError("schedule.delta_set entries must lie in [0, 1]");
  if (schedule.n0 == 0.0)
    schedule.n0 = schedule.a + 0.5 * (5.0 + cross_section.gamma);
  if (collision.azimuth_nodes < 1)
    throw ConfigError("collision.azimuth_nodes must be >= 1");
  if (verify.family_count < 2)
    throw ConfigError("verify.family_count must be >= 2");
  regime = regime_tag(cross_section.gamma, cross_section.s);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  Sections ini = parse_ini(text, origin);
  RunConfig cfg;
  auto take = [&](const std::string& name) {
    SectionReader r{origin, name, {}, {}};
    auto it = ini.find(name);
    if (it != ini.end()) {
      r.kv = it->second;
      ini.erase(it);
    }
    return r;
  };
  {
    auto r = take("meta");
    cfg.schema_version = r.get_int("schema_version", 1);
    r.finish();
  }
  {
    auto r = take("grid");
    cfg.grid.n_points = r.get_int("n_points", cfg.grid.n_points);
    cfg.grid.half_width = r.get_double("half_width", cfg.grid.half_width);
    r.finish();
  }
  {
    auto r = take("cross_section");
    auto& xs = cfg.cross_section;
    xs.gamma = r.get_double("gamma", xs.gamma);
    xs.s = r.get_double("s", xs.s);
    xs.K = r.get_double("K", xs.K);
    xs.r_in = r.get_double("r_in", xs.r_in);
    xs.r_out = r.get_double("r_out", xs.r_out);
    xs.theta_min = r.get_double("theta_min", xs.theta_min);
    xs.theta_panels = r.get_int("theta_panels", xs.theta_panels);
    xs.nodes_per_panel = r.get_int("nodes_per_panel", xs.nodes_per_panel);
    r.finish();
  }
  {
    auto r = take("collision");
    auto& c = cfg.collision;
    c.azimuth_nodes = r.get_int("azimuth_nodes", c.azimuth_nodes);
    c.xi_max = r.get_double("xi_max", c.xi_max);
    c.budget_cap = r.get_double("budget_cap", c.budget_cap);
    c.tail_taper = r.get_double("tail_taper", c.tail_taper);
    c.tail_cut = r.get_double("tail_cut", c.tail_cut);
    c.table_entries = r.get_int("table_entries", c.table_entries);
    r.finish();
  }
  {
    auto r = take("time");
    cfg.time.dt = r.get_double("dt", cfg.time.dt);
    cfg.time.t_end = r.get_double("t_end", cfg.time.t_end);
    cfg.time.scheme = r.get_string("scheme", cfg.time.scheme);
    cfg.time.checkpoints = r.get_int("checkpoints", cfg.time.checkpoints);
    r.finish();
  }
  {
    auto r = take("initial");
    auto& i = cfg.initial;
    i.type = r.get_string("type", i.type);
    i.rho = r.get_double("rho", i.rho);
    i.temperature = r.get_double("temperature", i.temperature);
    i.velocity[0] = r.get_double("u1", 0.0);
    i.velocity[1] = r.get_double("u2", 0.0);
    i.velocity[2] = r.get_double("u3", 0.0);
    i.k_shape = r.get_double("k_shape", i.k_shape);
    i.radius = r.get_double("radius", i.radius);
    i.perturbation = r.get_double("perturbation", i.perturbation);
    r.finish();
  }
  {
    auto r = take("schedule");
    auto& s = cfg.schedule;
    s.N = r.get_double("N", s.N);
    s.a = r.get_double("a", s.a);
    s.n0 = r.get_double("n0", s.n0);
    s.delta = r.get_double("delta", s.delta);
    s.delta_set = r.get_list("delta_set", s.delta_set);
    r.finish();
  }
  {
    auto r = take("verify");
    auto& v = cfg.verify;
    v.inequality = r.get_string("inequality", v.inequality);
    v.family_count = r.get_int("family_count", v.family_count);
    v.samples = r.get_int("samples", v.samples);
    v.s_prime = r.get_double("s_prime", v.s_prime);
    v.r = r.get_double("r", v.r);
    v.ell = r.get_double("ell", v.ell);
    v.lambda = r.get_double("lambda", v.lambda);
    v.p = r.get_double("p", v.p);
    v.k = r.get_double("k", v.k);
    v.delta_interp = r.get_double("delta_interp", v.delta_interp);
    v.d0 = r.get_double("d0", v.d0);
    v.e0 = r.get_double("e0", v.e0);
    v.xi_range = r.get_double("xi_range", v.xi_range);
    v.max_cases = r.get_int("max_cases", v.max_cases);
    r.finish();
  }
  {
    auto r = take("run");
    cfg.run.deterministic = r.get_bool("deterministic", cfg.run.deterministic);
    cfg.run.seed = r.get_u64("seed", cfg.run.seed);
    cfg.run.output_dir = r.get_string("output_dir", cfg.run.output_dir);
    r.finish();
  }
  if (!ini.empty())
    throw ConfigError(origin + ": unknown section [" + ini.begin()->first + "]");
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[meta]\nschema_version = " << cfg.schema_version << "\n";
  os << "[grid]\nn_points = " << cfg.grid.n_points
     << "\nhalf_width = " << cfg.grid.half_width << "\n";
  const auto& xs = cfg.cross_section;
  os << "[cross_section]\ngamma = " << xs.gamma << "\ns = " << xs.s
     << "\nK = " << xs.K << "\nr_in = " << xs.r_in << "\nr_out = " << xs.r_out
     << "\ntheta_min = " << xs.theta_min
     << "\ntheta_panels = " << xs.theta_panels
     << "\nnodes_per_panel = " << xs.nodes_per_panel << "\n";
  const auto& c = cfg.collision;
  os << "[collision]\nazimuth_nodes = " << c.azimuth_nodes
     << "\nxi_max = " << c.xi_max << "\nbudget_cap = " << c.budget_cap
     << "\ntail_taper = " << c.tail_taper << "\ntail_cut = " << c.tail_cut
     << "\ntable_entries = " << c.table_entries << "\n";
  os << "[time]\ndt = " << cfg.time.dt << "\nt_end = " << cfg.time.t_end
     << "\nscheme = " << cfg.time.scheme
     << "\ncheckpoints = " << cfg.time.checkpoints << "\n";
  const auto& i = cfg.initial;
  os << "[initial]\ntype = " << i.type << "\nrho = " << i.rho
     << "\ntemperature = " << i.temperature << "\nu1 = " << i.velocity[0]
     << "\nu2 = " << i.velocity[1] << "\nu3 = " << i.velocity[2]
     << "\nk_shape = " << i.k_shape << "\nradius = " << i.radius
     << "\nperturbation = " << i.perturbation << "\n";
  const auto& s = cfg.schedule;
  os << "[schedule]\nN = " << s.N << "\na = " << s.a << "\nn0 = " << s.n0
     << "\ndelta = " << s.delta << "\ndelta_set = ";
  for (std::size_t j = 0; j < s.delta_set.size(); ++j)
    os << (j ? ", " : "") << s.delta_set[j];
  os << "\n";
  const auto& v = cfg.verify;
  os << "[verify]\ninequality = " << v.inequality
     << "\nfamily_count = " << v.family_count << "\nsamples = " << v.samples
     << "\ns_prime = " << v.s_prime << "\nr = " << v.r << "\nell = " << v.ell
     << "\nlambda = " << v.lambda << "\np = " << v.p << "\nk = " << v.k
     << "\ndelta_interp = " << v.delta_interp << "\nd0 = " << v.d0
     << "\ne0 = " << v.e0 << "\nxi_range = " << v.xi_range
     << "\nmax_cases = " << v.max_cases << "\n";
  os << "[run]\ndeterministic = " << (cfg.run.deterministic ? "true" : "false")
     << "\nseed = " << cfg.run.seed
     << "\noutput_dir = " << cfg.run.output_dir << "\n";
  return os.str();
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  // The output directory is where artifacts land, not what they are; keep it
  // out of the hash so moving a run does not change its identity.
  RunConfig c = cfg;
  c.run.output_dir = "";
  const std::string text = serialize_config(c);
  const std::uint64_t h = fnv1a(text.data(), text.size());
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace blz
