#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmsm/bounds.hpp"
#include "gmsm/contrasts.hpp"
#include "gmsm/estimators.hpp"
#include "gmsm/random.hpp"

namespace gmsm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Horizon rule: a fixed T, or 2 ln(mu) / ln(mu^2) clamped below by 1.
struct HorizonRule {
  enum class Kind { Fixed, TwoLogMu, LogMuSquared };
  Kind kind = Kind::TwoLogMu;
  double value = 0.0;

  double resolve(double mu) const;
  std::string describe() const;
  static HorizonRule parse(const std::string& text);
};

struct ExperimentSpec {
  double theta0 = 0.5;
  std::vector<double> mu_list;
  std::vector<std::size_t> n_list;
  HorizonRule T_rule;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::vector<ContrastKind> estimators;
  double eta = 0.01;
  std::string output_path = "results";

  // numerical knobs, not model parameters
  unsigned workers = 0;  // 0 = hardware concurrency
  int coarse_grid = 512;
  double refine_tol = 1e-9;
  double dsm_t = 0.1;
  int time_nodes = 32;
  int space_nodes = 64;
  bool record_timing = false;

  void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Keys mirror ExperimentSpec;
// lists are comma separated.
ExperimentSpec parse_config_text(const std::string& text, ExperimentSpec base = {});
ExperimentSpec load_config(const std::string& path, ExperimentSpec base = {});
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

struct ExperimentRow {
  double mu;
  std::size_t n;
  double T;
  std::size_t replication_index;
  std::string estimator;
  double theta_hat;
  double abs_error;
  double loss_at_opt;
  double wall_time_ms;
};

const std::vector<std::string>& sweep_header();
std::vector<std::string> to_fields(const ExperimentRow& r);

struct CellKey {
  double mu;
  std::size_t n;
  std::size_t replication;
};

struct SweepOptions {
  std::string csv_path;  // empty: no file
  // Replaces the sampler; receives the replication stream of the cell.
  std::function<std::vector<double>(const MixtureParams&, std::size_t, RngStream&, const CellKey&)>
      sampler;
  // Sees the data handed to each estimator (called from worker threads).
  std::function<void(const CellKey&, ContrastKind, std::span<const double>)> observe;
};

// Rows come back ordered by (mu, n, replication_index, estimator); the CSV is
// written in the same order while the sweep runs.
std::vector<ExperimentRow> run_sweep(const ExperimentSpec& spec, const SweepOptions& opts = {});

struct LandscapeSpec {
  double theta0 = 0.5;
  double mu = 5.0;
  std::size_t n = 10000;
  double T = 0.0;  // <= 0: default horizon
  int grid = 99;
  std::uint64_t seed = 0;
  double eta = 0.01;
  std::string output;  // landscape CSV; densities go next to it
};

struct LandscapeSummary {
  std::vector<double> theta;
  std::vector<double> loss_sm, loss_ddsm, loss_ml;  // centered
  double range_sm, range_ddsm, range_ml;
  std::size_t argmin_sm, argmin_ddsm, argmin_ml;
  std::string landscape_path, densities_path;
};

LandscapeSummary run_landscape(const LandscapeSpec& spec);
std::string densities_path_for(const std::string& landscape_path);

struct IsoperimetricRow {
  double mu, theta, c_ip, c_ip_family, two_phi_mu;
};

std::vector<IsoperimetricRow> run_isoperimetric(std::span<const double> mu_list,
                                                std::span<const double> theta_grid,
                                                const std::string& output);

std::vector<BoundReport> run_verify_bounds(std::span<const double> mu_list, double eta,
                                           const std::string& output);

std::vector<double> parse_real_list(const std::string& text);

}  // namespace gmsm
