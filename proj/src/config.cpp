#include "damplab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace damplab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& value,
                                  const std::string& what) {
  std::istringstream in(value);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof())
    throw ConfigError(what + ": cannot parse '" + value + "'");
  if (out.empty()) throw ConfigError(what + ": no numbers in '" + value + "'");
  return out;
}

}  // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text,
                                      const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
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
                        ": expected 'key = value'");
    Entry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
            lineno};
    if (e.key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    kv.entries_.push_back(std::move(e));
  }
  return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

std::optional<std::string> KeyValueFile::get(const std::string& section,
                                             const std::string& key) const {
  std::optional<std::string> out;
  for (const Entry& e : entries_)
    if (e.section == section && e.key == key) out = e.value;
  return out;
}

std::vector<std::string> KeyValueFile::get_all(const std::string& section,
                                               const std::string& key) const {
  std::vector<std::string> out;
  for (const Entry& e : entries_)
    if (e.section == section && e.key == key) out.push_back(e.value);
  return out;
}

std::string KeyValueFile::get_or(const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) const {
  auto v = get(section, key);
  return v ? *v : fallback;
}

double KeyValueFile::number(const std::string& section, const std::string& key,
                            double fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double x = std::stod(*v, &pos);
    if (trim(v->substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("[" + section + "] " + key + ": expected a number, got '" +
                    *v + "'");
}

std::size_t KeyValueFile::integer(const std::string& section,
                                  const std::string& key,
                                  std::size_t fallback) const {
  const double x = number(section, key, double(fallback));
  if (x < 0.0 || x != std::floor(x))
    throw ConfigError("[" + section + "] " + key +
                      ": expected a nonnegative integer");
  return std::size_t(x);
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueFile& kv) {
  ExperimentConfig c;
  c.scenario = kv.get_or("experiment", "scenario", c.scenario);
  if (c.scenario != "maxwell2d" && c.scenario != "counterexample" &&
      c.scenario != "abstract")
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  c.seed = std::uint64_t(kv.integer("experiment", "seed", 1));
  c.output_dir = kv.get_or("experiment", "output_dir", c.output_dir);

  c.grid.nx = kv.integer("grid", "nx", 16);
  c.grid.ny = kv.integer("grid", "ny", 16);
  c.grid.lx = kv.number("grid", "lx", 1.0);
  c.grid.ly = kv.number("grid", "ly", 1.0);
  if (c.scenario == "maxwell2d") c.grid.validate();

  for (const std::string& r : kv.get_all("region", "rect")) {
    auto nums = parse_numbers(r, "[region] rect");
    if (nums.size() != 4)
      throw ConfigError("[region] rect: expected 'x0 y0 x1 y1', got '" + r +
                        "'");
    if (!(nums[0] < nums[2]) || !(nums[1] < nums[3]))
      throw ConfigError("[region] rect: degenerate rectangle '" + r + "'");
    c.region_rects.push_back(Rect{nums[0], nums[1], nums[2], nums[3]});
  }

  auto material_block = [&](const std::string& key, double& xx, double& yy,
                            cplx& xy, cplx* yx) {
    auto v = kv.get("materials", key);
    if (!v) return;
    auto nums = parse_numbers(*v, "[materials] " + key);
    if (nums.size() == 1) {
      xx = yy = nums[0];
    } else if (nums.size() == 2) {
      xx = nums[0];
      yy = nums[1];
    } else if (nums.size() == 4 && !yx) {
      xx = nums[0];
      yy = nums[1];
      xy = cplx(nums[2], nums[3]);
    } else if (nums.size() == 6 && yx) {
      xx = nums[0];
      yy = nums[1];
      xy = cplx(nums[2], nums[3]);
      *yx = cplx(nums[4], nums[5]);
    } else {
      throw ConfigError("[materials] " + key + ": unexpected arity");
    }
  };
  material_block("eps", c.materials.eps_xx, c.materials.eps_yy,
                 c.materials.eps_xy, nullptr);
  c.materials.mu = kv.number("materials", "mu", 1.0);
  material_block("sigma", c.materials.sigma_xx, c.materials.sigma_yy,
                 c.materials.sigma_xy, &c.materials.sigma_yx);
  c.materials.sigma_background =
      kv.number("materials", "sigma_background", 0.0);

  const std::string lam = kv.get_or("scan", "lambdas", "default");
  if (lam != "default")
    c.lambda_grid = parse_numbers(lam, "[scan] lambdas");
  const std::string refs = kv.get_or("scan", "refinements", "");
  if (!refs.empty()) {
    for (double x : parse_numbers(refs, "[scan] refinements")) {
      if (x < 2.0 || x != std::floor(x))
        throw ConfigError("[scan] refinements: expected integers >= 2");
      c.refinements.push_back(std::size_t(x));
    }
  }

  c.time_horizon = kv.number("time", "horizon", 20.0);
  if (!(c.time_horizon > 0.0))
    throw ConfigError("[time] horizon must be positive");
  const std::string dts = kv.get_or("time", "dt", "auto");
  if (dts != "auto") {
    c.dt = kv.number("time", "dt", 0.0);
    if (!(c.dt > 0.0)) throw ConfigError("[time] dt must be positive");
  }

  c.abstract_n = kv.integer("abstract", "n", 16);
  c.abstract_coupling = kv.number("abstract", "coupling", 0.0);

  c.classify_thresholds.bounded_ratio =
      kv.number("classify", "bounded_ratio", 0.5);
  c.classify_thresholds.decay_exponent =
      kv.number("classify", "decay_exponent", -0.5);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_kv(KeyValueFile::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  return from_kv(KeyValueFile::parse_text(text));
}

}  // namespace damplab
