#ifndef DAMPLAB_CONFIG_HPP
#define DAMPLAB_CONFIG_HPP

// Flat sectioned key-value experiment configuration. Lines look like
//
//   [grid]
//   nx = 16            # comment
//   rect = 0 0 0.5 1   (repeatable keys collect)
//
// Parse errors carry the line number so the runner can exit with a precise
// diagnostic.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "damplab/grid.hpp"
#include "damplab/stability.hpp"

namespace damplab {

class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_text(const std::string& text,
                                 const std::string& origin = "<config>");

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section,
                                   const std::string& key) const;

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double number(const std::string& section, const std::string& key,
                double fallback) const;
  std::size_t integer(const std::string& section, const std::string& key,
                      std::size_t fallback) const;

 private:
  struct Entry {
    std::string section, key, value;
    std::size_t line;
  };
  std::vector<Entry> entries_;
  std::string origin_;
};

struct ExperimentConfig {
  std::string scenario = "maxwell2d";  // maxwell2d | counterexample | abstract
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  GridSpec grid;
  std::vector<Rect> region_rects;  // empty means the full domain
  MaterialSpec materials;

  std::vector<double> lambda_grid;       // empty means the default grid
  std::vector<std::size_t> refinements;  // per-scenario meaning

  double time_horizon = 20.0;
  double dt = 0.0;  // 0 means automatic: 0.5 * min(hx, hy)

  // abstract scenario
  std::size_t abstract_n = 16;
  double abstract_coupling = 0.0;

  ClassifyThresholds classify_thresholds;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_kv(const KeyValueFile& kv);

  std::vector<double> lambdas() const {
    return lambda_grid.empty() ? default_lambda_grid() : lambda_grid;
  }
  double effective_dt(const GridSpec& g) const {
    return dt > 0.0 ? dt : 0.5 * std::min(g.hx(), g.hy());
  }
};

}  // namespace damplab

#endif
