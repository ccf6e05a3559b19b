#include "gmsm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "gmsm/csv.hpp"
#include "gmsm/divergences.hpp"
#include "gmsm/gaussian.hpp"

namespace gmsm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  // accept 1e4 style as well as plain integers
  const double d = to_real(key, v);
  if (d < 0 || d != std::floor(d) || d > 1.8e19) throw ConfigError(key + ": expected a count, got '" + v + "'");
  if (v.find_first_of(".eE") == std::string::npos) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a count, got '" + v + "'");
    }
  }
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_real("list", item));
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

double HorizonRule::resolve(double mu) const {
  switch (kind) {
    case Kind::Fixed: return value;
    case Kind::TwoLogMu:
    case Kind::LogMuSquared: return std::max(1.0, 2.0 * std::log(mu));
  }
  return value;
}

std::string HorizonRule::describe() const {
  switch (kind) {
    case Kind::Fixed: return format_real(value);
    case Kind::TwoLogMu: return "2ln(mu)";
    case Kind::LogMuSquared: return "ln(mu^2)";
  }
  return "";
}

HorizonRule HorizonRule::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "2ln(mu)" || t == "2*ln(mu)" || t == "2log(mu)") return {Kind::TwoLogMu, 0.0};
  if (t == "ln(mu^2)" || t == "log(mu^2)") return {Kind::LogMuSquared, 0.0};
  const double v = to_real("T_rule", t);
  if (!(v > 0.0)) throw ConfigError("T_rule: fixed horizon must be positive");
  return {Kind::Fixed, v};
}

void ExperimentSpec::validate() const {
  if (!(eta > 0.0 && eta < 0.5)) throw ConfigError("eta must lie in (0, 1/2)");
  if (!(theta0 >= eta && theta0 <= 1.0 - eta)) throw ConfigError("theta0 must lie in [eta, 1-eta]");
  if (mu_list.empty()) throw ConfigError("mu_list is empty");
  for (double m : mu_list)
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("mu_list entries must be positive");
  if (n_list.empty()) throw ConfigError("n_list is empty");
  for (auto n : n_list)
    if (n < 1) throw ConfigError("n_list entries must be >= 1");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (estimators.empty()) throw ConfigError("estimators is empty");
  if (coarse_grid < 64) throw ConfigError("coarse_grid must be >= 64");
  if (!(refine_tol > 0.0)) throw ConfigError("refine_tol must be positive");
  if (!(dsm_t > 0.0)) throw ConfigError("dsm_t must be positive");
  if (time_nodes < 16) throw ConfigError("time_nodes must be >= 16");
  if (space_nodes < 32) throw ConfigError("space_nodes must be >= 32");
}

void apply_setting(ExperimentSpec& s, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "theta0") s.theta0 = to_real(key, v);
  else if (key == "mu_list") s.mu_list = parse_real_list(v);
  else if (key == "n_list") {
    s.n_list.clear();
    for (const auto& item : split_list(v)) s.n_list.push_back(to_count(key, item));
  } else if (key == "T_rule") s.T_rule = HorizonRule::parse(v);
  else if (key == "replications") s.replications = to_count(key, v);
  else if (key == "seed") s.seed = to_count(key, v);
  else if (key == "estimators") {
    s.estimators.clear();
    for (const auto& item : split_list(v)) {
      try {
        s.estimators.push_back(parse_contrast_kind(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("estimators: ") + e.what());
      }
    }
  } else if (key == "eta") s.eta = to_real(key, v);
  else if (key == "output_path") s.output_path = v;
  else if (key == "workers") s.workers = static_cast<unsigned>(to_count(key, v));
  else if (key == "coarse_grid") s.coarse_grid = static_cast<int>(to_count(key, v));
  else if (key == "refine_tol") s.refine_tol = to_real(key, v);
  else if (key == "dsm_t") s.dsm_t = to_real(key, v);
  else if (key == "time_nodes") s.time_nodes = static_cast<int>(to_count(key, v));
  else if (key == "space_nodes") s.space_nodes = static_cast<int>(to_count(key, v));
  else if (key == "record_timing") s.record_timing = to_bool(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentSpec parse_config_text(const std::string& text, ExperimentSpec base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentSpec load_config(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h = {"mu", "n", "T", "replication_index", "estimator",
                                             "theta_hat", "abs_error", "loss_at_opt", "wall_time_ms"};
  return h;
}

std::vector<std::string> to_fields(const ExperimentRow& r) {
  return {format_real(r.mu),        std::to_string(r.n),        format_real(r.T),
          std::to_string(r.replication_index), r.estimator, format_real(r.theta_hat),
          format_real(r.abs_error), format_real(r.loss_at_opt), format_real(r.wall_time_ms)};
}

std::vector<ExperimentRow> run_sweep(const ExperimentSpec& spec_in, const SweepOptions& opts) {
  ExperimentSpec spec = spec_in;
  spec.validate();
  std::sort(spec.mu_list.begin(), spec.mu_list.end());
  spec.mu_list.erase(std::unique(spec.mu_list.begin(), spec.mu_list.end()), spec.mu_list.end());
  std::sort(spec.n_list.begin(), spec.n_list.end());
  spec.n_list.erase(std::unique(spec.n_list.begin(), spec.n_list.end()), spec.n_list.end());
  std::vector<ContrastKind> kinds = spec.estimators;
  std::sort(kinds.begin(), kinds.end(),
            [](ContrastKind a, ContrastKind b) { return to_string(a) < to_string(b); });
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  const ParamSpace space(spec.eta);
  OptimizerSpec opt;
  opt.coarse_grid = spec.coarse_grid;
  opt.refine_tol = spec.refine_tol;

  // Evaluators are immutable and shared by all workers.
  std::vector<double> horizons;
  std::vector<std::vector<ContrastEvaluator>> evaluators;
  for (double mu : spec.mu_list) {
    const double T = spec.T_rule.resolve(mu);
    horizons.push_back(T);
    std::vector<ContrastEvaluator> row;
    for (ContrastKind k : kinds) {
      if (k == ContrastKind::DDSM)
        row.push_back(ContrastEvaluator::ddsm(mu, NoiseSchedule::make(T, spec.time_nodes, spec.space_nodes)));
      else if (k == ContrastKind::DSMFixedT)
        row.push_back(ContrastEvaluator::dsm_fixed_t(mu, spec.dsm_t, spec.space_nodes));
      else
        row.push_back(ContrastEvaluator::make(k, mu, T, spec.dsm_t));
    }
    evaluators.push_back(std::move(row));
  }

  struct Cell {
    std::size_t mu_index;
    std::size_t n;
    std::size_t rep;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < spec.mu_list.size(); ++m)
    for (auto n : spec.n_list)
      for (std::size_t r = 0; r < spec.replications; ++r) cells.push_back({m, n, r});

  std::optional<CsvWriter> csv;
  if (!opts.csv_path.empty()) csv.emplace(opts.csv_path, sweep_header());

  std::vector<std::optional<std::vector<ExperimentRow>>> done(cells.size());
  std::vector<ExperimentRow> rows;
  rows.reserve(cells.size() * kinds.size());
  std::size_t next_emit = 0;
  std::mutex collector;
  std::atomic<std::size_t> next_cell{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto run_cell = [&](const Cell& c) {
    const double mu = spec.mu_list[c.mu_index];
    const MixtureParams truth(spec.theta0, mu);
    RngStream rng = RngStream::for_replication(spec.seed, c.rep);
    const CellKey key{mu, c.n, c.rep};
    std::vector<double> data = opts.sampler ? opts.sampler(truth, c.n, rng, key) : sample(truth, c.n, rng);
    const Sample sorted(data);
    std::vector<ExperimentRow> out;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      if (opts.observe) opts.observe(key, kinds[k], data);
      const auto t0 = std::chrono::steady_clock::now();
      const EstimationResult res = minimize(evaluators[c.mu_index][k], sorted, opt, space);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms = spec.record_timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
      out.push_back(ExperimentRow{mu, c.n, horizons[c.mu_index], c.rep, std::string(to_string(kinds[k])),
                                  res.theta_hat, std::fabs(res.theta_hat - spec.theta0), res.loss_at_opt, ms});
    }
    return out;
  };

  auto worker = [&]() {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next_cell.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        auto out = run_cell(cells[i]);
        std::lock_guard<std::mutex> lock(collector);
        done[i] = std::move(out);
        while (next_emit < cells.size() && done[next_emit]) {
          for (auto& r : *done[next_emit]) {
            if (csv) csv->row(to_fields(r));
            rows.push_back(std::move(r));
          }
          done[next_emit].reset();
          ++next_emit;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(collector);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  if (csv) csv->close();
  return rows;
}

std::string densities_path_for(const std::string& landscape_path) {
  std::filesystem::path p(landscape_path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "_densities.csv");
  return out.string();
}

LandscapeSummary run_landscape(const LandscapeSpec& spec) {
  if (spec.grid < 2) throw ConfigError("landscape grid needs >= 2 points");
  if (spec.n < 1) throw ConfigError("landscape needs n >= 1");
  if (!(spec.mu > 0.0)) throw ConfigError("mu must be positive");
  const ParamSpace space(spec.eta);
  if (!space.contains(spec.theta0)) throw ConfigError("theta0 must lie in [eta, 1-eta]");
  const double T = spec.T > 0.0 ? spec.T : default_horizon(spec.mu);

  RngStream rng = RngStream::for_replication(spec.seed, 0);
  const Sample data(sample(MixtureParams(spec.theta0, spec.mu), spec.n, rng));

  const auto ev_sm = ContrastEvaluator::sm(spec.mu);
  const auto ev_ml = ContrastEvaluator::ml(spec.mu);
  const auto ev_dd = ContrastEvaluator::ddsm(spec.mu, NoiseSchedule::make(T));

  LandscapeSummary s;
  std::vector<double> scratch;
  const double c_sm = risk_theta_free_part(ev_sm, data);
  const double c_ml = risk_theta_free_part(ev_ml, data);
  const double c_dd = risk_theta_free_part(ev_dd, data);
  const double h = (space.hi() - space.lo()) / (spec.grid - 1);
  for (int i = 0; i < spec.grid; ++i) {
    const double th = i == spec.grid - 1 ? space.hi() : space.lo() + i * h;
    s.theta.push_back(th);
    s.loss_sm.push_back(c_sm + risk_theta_part(ev_sm, th, data, scratch));
    s.loss_ddsm.push_back(c_dd + risk_theta_part(ev_dd, th, data, scratch));
    s.loss_ml.push_back(c_ml + risk_theta_part(ev_ml, th, data, scratch));
  }
  auto center = [](std::vector<double>& v, std::size_t& argmin) {
    argmin = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    const double m = v[argmin];
    for (double& x : v) x -= m;
    return *std::max_element(v.begin(), v.end());
  };
  s.range_sm = center(s.loss_sm, s.argmin_sm);
  s.range_ddsm = center(s.loss_ddsm, s.argmin_ddsm);
  s.range_ml = center(s.loss_ml, s.argmin_ml);

  if (!spec.output.empty()) {
    s.landscape_path = spec.output;
    CsvWriter w(spec.output, {"theta", "loss_sm", "loss_ddsm", "loss_ml"});
    for (std::size_t i = 0; i < s.theta.size(); ++i)
      w.row({format_real(s.theta[i]), format_real(s.loss_sm[i]), format_real(s.loss_ddsm[i]),
             format_real(s.loss_ml[i])});
    w.close();

    s.densities_path = densities_path_for(spec.output);
    CsvWriter d(s.densities_path, {"theta", "x", "density", "score"});
    constexpr int kPoints = 801;
    const double a = -spec.mu - 4.0, b = spec.mu + 4.0;
    for (double th : {0.01, 0.1, 0.5, 0.9, 0.99}) {
      const MixtureParams p(th, spec.mu);
      for (int i = 0; i < kPoints; ++i) {
        const double x = i == kPoints - 1 ? b : a + i * (b - a) / (kPoints - 1);
        d.row({format_real(th), format_real(x), format_real(density(p, x)), format_real(score(p, x))});
      }
    }
    d.close();
  }
  return s;
}

std::vector<IsoperimetricRow> run_isoperimetric(std::span<const double> mu_list,
                                                std::span<const double> thetas,
                                                const std::string& output) {
  if (mu_list.empty() || thetas.empty()) throw ConfigError("isoperimetric needs nonempty lists");
  for (double m : mu_list)
    if (!(m > 0.0)) throw ConfigError("mu_list entries must be positive");
  for (double t : thetas)
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("theta grid entries must lie in (0,1)");
  std::vector<IsoperimetricRow> rows;
  for (double mu : mu_list) {
    std::vector<double> per;
    for (double th : thetas) per.push_back(isoperimetric_constant(MixtureParams(th, mu)));
    const double fam = *std::min_element(per.begin(), per.end());
    for (std::size_t i = 0; i < thetas.size(); ++i)
      rows.push_back({mu, thetas[i], per[i], fam, 2.0 * normal_pdf(mu)});
  }
  if (!output.empty()) {
    CsvWriter w(output, {"mu", "theta", "c_ip", "c_ip_family", "two_phi_mu"});
    for (const auto& r : rows)
      w.row({format_real(r.mu), format_real(r.theta), format_real(r.c_ip), format_real(r.c_ip_family),
             format_real(r.two_phi_mu)});
    w.close();
  }
  return rows;
}

std::vector<BoundReport> run_verify_bounds(std::span<const double> mu_list, double eta,
                                           const std::string& output) {
  if (mu_list.empty()) throw ConfigError("verify-bounds needs a nonempty mu list");
  if (!(eta > 0.0 && eta < 0.5)) throw ConfigError("eta must lie in (0, 1/2)");
  for (double m : mu_list)
    if (!(m > 0.0)) throw ConfigError("mu_list entries must be positive");
  auto reports = standard_bound_reports(mu_list, eta);
  if (!output.empty()) {
    CsvWriter w(output, {"name", "mu", "param", "lhs", "rhs", "satisfied", "margin"});
    for (const auto& r : reports)
      w.row({r.name, format_real(r.mu), format_real(r.param), format_real(r.lhs), format_real(r.rhs),
             r.satisfied ? "true" : "false", format_real(r.margin)});
    w.close();
  }
  return reports;
}

}  // namespace gmsm
