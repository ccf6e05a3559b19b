// gmsm: estimation sweeps, loss landscapes, isoperimetric constants and
// bound checks for the two-component Gaussian mixture.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "gmsm/csv.hpp"
#include "gmsm/divergences.hpp"
#include "gmsm/harness.hpp"

namespace {

enum Exit { kOk = 0, kBoundViolation = 2, kConfigError = 3, kIoError = 4 };

using nlohmann::json;

json real(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void emit(const json& j) { std::cout << j.dump() << std::endl; }

int fail(int code, const std::string& kind, const std::string& msg) {
  emit(json{{"status", "error"}, {"error", kind}, {"message", msg}});
  std::cerr << "gmsm: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter estimation for a two-component Gaussian mixture by ML, score matching "
               "and diffusion-based denoising score matching"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate theta from a single-column CSV (header x)");
  std::string est_kind, est_data;
  double est_mu = 0.0, est_T = 0.0, est_eta = 0.01, est_t = 0.1;
  int est_grid = 512;
  est->add_option("--estimator", est_kind, "ml | sm | ddsm | dsm-fixed-t")->required();
  est->add_option("--data", est_data, "CSV with header x")->required();
  est->add_option("--mu", est_mu, "Known location mu")->required();
  est->add_option("--T", est_T, "DDSM horizon (default max(1, 2 ln mu))");
  est->add_option("--eta", est_eta, "Parameter space margin");
  est->add_option("--dsm-t", est_t, "Noise time for dsm-fixed-t");
  est->add_option("--grid", est_grid, "Coarse grid size");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep over mu, n and replications");
  std::string sw_config, sw_out;
  std::optional<std::uint64_t> sw_seed;
  std::optional<unsigned> sw_workers;
  bool sw_timing = false;
  sw->add_option("--config", sw_config, "key = value config file")->required();
  sw->add_option("--seed", sw_seed, "Override the seed");
  sw->add_option("--out", sw_out, "Output directory (overrides output_path)");
  sw->add_option("--workers", sw_workers, "Worker threads");
  sw->add_flag("--timing", sw_timing, "Record wall_time_ms (makes the CSV run dependent)");

  // landscape
  auto* ls = app.add_subcommand("landscape", "SM, DDSM and ML empirical risks over a theta grid");
  gmsm::LandscapeSpec lspec;
  ls->add_option("--mu", lspec.mu)->required();
  ls->add_option("--theta0", lspec.theta0)->required();
  ls->add_option("--n", lspec.n)->required();
  ls->add_option("--T", lspec.T, "DDSM horizon (default max(1, 2 ln mu))");
  ls->add_option("--out", lspec.output)->required();
  ls->add_option("--grid", lspec.grid, "Number of theta grid points");
  ls->add_option("--seed", lspec.seed);
  ls->add_option("--eta", lspec.eta);

  // isoperimetric
  auto* iso = app.add_subcommand("isoperimetric", "Isoperimetric constants of mixture members");
  std::string iso_mu, iso_theta;
  std::string iso_out;
  iso->add_option("--mu-list", iso_mu)->required();
  iso->add_option("--theta-grid", iso_theta, "Comma list (default 21 points on [0.01, 0.99])");
  iso->add_option("--out", iso_out)->required();

  // verify-bounds
  auto* vb = app.add_subcommand("verify-bounds", "Evaluate every bound on the standard grid");
  std::string vb_mu = "0.5,1,2,3,4", vb_out;
  double vb_eta = 0.01;
  vb->add_option("--mu-list", vb_mu);
  vb->add_option("--eta", vb_eta);
  vb->add_option("--out", vb_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*est) {
      const auto kind = gmsm::parse_contrast_kind(est_kind);
      const auto data = gmsm::read_real_column(est_data, "x");
      if (data.empty()) throw gmsm::ConfigError(est_data + " has no observations");
      const double T = est_T > 0.0 ? est_T : gmsm::default_horizon(est_mu);
      const auto ev = gmsm::ContrastEvaluator::make(kind, est_mu, T, est_t);
      gmsm::OptimizerSpec opt;
      opt.coarse_grid = est_grid;
      const auto r = gmsm::minimize(ev, gmsm::Sample(data), opt, gmsm::ParamSpace(est_eta));
      json j{{"status", "ok"},          {"command", "estimate"},    {"estimator", gmsm::to_string(kind)},
             {"n", data.size()},        {"mu", est_mu},             {"theta_hat", real(r.theta_hat)},
             {"loss_at_opt", real(r.loss_at_opt)}, {"evaluations", r.evaluations},
             {"boundary_hit", r.boundary_hit}};
      if (kind == gmsm::ContrastKind::DDSM) j["T"] = T;
      emit(j);
      return kOk;
    }
    if (*sw) {
      auto spec = gmsm::load_config(sw_config);
      if (sw_seed) spec.seed = *sw_seed;
      if (!sw_out.empty()) spec.output_path = sw_out;
      if (sw_workers) spec.workers = *sw_workers;
      if (sw_timing) spec.record_timing = true;
      spec.validate();
      gmsm::SweepOptions opts;
      opts.csv_path = (std::filesystem::path(spec.output_path) / "sweep.csv").string();
      const auto rows = gmsm::run_sweep(spec, opts);
      emit(json{{"status", "ok"}, {"command", "sweep"}, {"rows", rows.size()}, {"seed", spec.seed},
                {"output", opts.csv_path}});
      return kOk;
    }
    if (*ls) {
      const auto s = gmsm::run_landscape(lspec);
      emit(json{{"status", "ok"},
                {"command", "landscape"},
                {"output", s.landscape_path},
                {"densities", s.densities_path},
                {"range_sm", real(s.range_sm)},
                {"range_ddsm", real(s.range_ddsm)},
                {"range_ml", real(s.range_ml)},
                {"argmin_sm", real(s.theta[s.argmin_sm])},
                {"argmin_ddsm", real(s.theta[s.argmin_ddsm])},
                {"argmin_ml", real(s.theta[s.argmin_ml])}});
      return kOk;
    }
    if (*iso) {
      const auto mus = gmsm::parse_real_list(iso_mu);
      const auto thetas = iso_theta.empty() ? gmsm::theta_grid(0.01, 21) : gmsm::parse_real_list(iso_theta);
      const auto rows = gmsm::run_isoperimetric(mus, thetas, iso_out);
      json fam = json::object();
      for (const auto& r : rows) fam[gmsm::format_real(r.mu)] = r.c_ip_family;
      emit(json{{"status", "ok"}, {"command", "isoperimetric"}, {"rows", rows.size()},
                {"family", fam}, {"output", iso_out}});
      return kOk;
    }
    if (*vb) {
      const auto mus = gmsm::parse_real_list(vb_mu);
      const auto reports = gmsm::run_verify_bounds(mus, vb_eta, vb_out);
      json violated = json::array();
      for (const auto& r : reports)
        if (!r.satisfied) violated.push_back(r.name + "@mu=" + gmsm::format_real(r.mu));
      emit(json{{"status", violated.empty() ? "ok" : "violation"}, {"command", "verify-bounds"},
                {"rows", reports.size()}, {"violations", violated}, {"output", vb_out}});
      return violated.empty() ? kOk : kBoundViolation;
    }
  } catch (const gmsm::IoError& e) {
    return fail(kIoError, "io", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kConfigError, "config", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kIoError, "io", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return kOk;
}
