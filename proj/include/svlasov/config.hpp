#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "svlasov/schemes.hpp"

namespace svlasov {

/// Invalid configuration text or values. line is 0 when the error is not
/// tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat experiment description read from `key = value` lines.
///
/// Keys: scheme, noise, nx, nv, vmax, tau, T, samples, seed, threads,
/// snapshot_times, extra_p, tau_ref, tau_set, out. List values are comma
/// separated. `#` starts a comment.
struct ExperimentConfig {
  Scheme scheme = Scheme::deterministic;
  std::string noise;
  int nx = 100;
  int nv = 201;
  double vmax = 6.283185307179586;
  double tau = 0.1;
  double T = 1.0;
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
  int threads = 0;
  std::vector<double> snapshot_times;
  std::vector<double> extra_p;
  double tau_ref = 0.0;
  std::vector<double> tau_set;
  std::string out = ".";

  std::int64_t n_steps() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Re-checks the cross-field invariants (after command-line overrides).
void validate_config(const ExperimentConfig& config);

}  // namespace svlasov
