#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <sys/wait.h>

#include "gmsm/csv.hpp"
#include "gmsm/divergences.hpp"
#include "gmsm/gaussian.hpp"
#include "gmsm/harness.hpp"

using namespace gmsm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gmsm_test_" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b < text.size()) {
    const auto e = text.find("\r\n", b);
    out.push_back(text.substr(b, e - b));
    b = e + 2;
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string f;
  while (std::getline(ss, f, sep)) out.push_back(f);
  return out;
}

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(GMSM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = ::popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), f)) out += buf.data();
  const int st = ::pclose(f);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.theta0 = 0.4;
  s.mu_list = {2.0, 1.0};
  s.n_list = {200, 50};
  s.replications = 3;
  s.seed = 42;
  s.estimators = {ContrastKind::SM, ContrastKind::ML, ContrastKind::DDSM, ContrastKind::DSMFixedT};
  s.coarse_grid = 64;
  s.workers = 1;
  return s;
}

}  // namespace

TEST(HorizonRule, ParseAndResolve) {
  EXPECT_EQ(HorizonRule::parse("2ln(mu)").kind, HorizonRule::Kind::TwoLogMu);
  EXPECT_EQ(HorizonRule::parse("ln(mu^2)").kind, HorizonRule::Kind::LogMuSquared);
  const auto f = HorizonRule::parse("1.5");
  EXPECT_EQ(f.kind, HorizonRule::Kind::Fixed);
  EXPECT_EQ(f.resolve(9.0), 1.5);
  EXPECT_EQ(HorizonRule::parse("2ln(mu)").resolve(1.2), 1.0);
  EXPECT_NEAR(HorizonRule::parse("2ln(mu)").resolve(4.0), 2 * std::log(4.0), 1e-15);
  EXPECT_THROW(HorizonRule::parse("-1"), ConfigError);
  EXPECT_THROW(HorizonRule::parse("sqrt(mu)"), ConfigError);
}

TEST(Config, ParsesKeysCommentsAndCounts) {
  const auto s = parse_config_text(
      "# sweep\n"
      "theta0 = 0.5\n"
      "mu_list = 1, 2,3.5\n"
      "n_list = 1e3, 10000  # trailing comment\n"
      "T_rule = 2ln(mu)\n"
      "replications = 200\n"
      "seed = 12345678901\n"
      "estimators = SM, DDSM, ml, DSM-fixed-t\n"
      "eta = 0.02\n"
      "output_path = out/dir\n"
      "workers = 3\n"
      "coarse_grid = 128\n"
      "record_timing = true\n");
  EXPECT_EQ(s.mu_list, (std::vector<double>{1, 2, 3.5}));
  EXPECT_EQ(s.n_list, (std::vector<std::size_t>{1000, 10000}));
  EXPECT_EQ(s.replications, 200u);
  EXPECT_EQ(s.seed, 12345678901ull);
  EXPECT_EQ(s.estimators.size(), 4u);
  EXPECT_EQ(s.estimators[2], ContrastKind::ML);
  EXPECT_EQ(s.eta, 0.02);
  EXPECT_EQ(s.output_path, "out/dir");
  EXPECT_EQ(s.workers, 3u);
  EXPECT_EQ(s.coarse_grid, 128);
  EXPECT_TRUE(s.record_timing);
  EXPECT_NO_THROW(s.validate());
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config_text("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mu_list 1,2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("replications = many\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n_list = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("estimators = EM\n"), std::invalid_argument);
  auto s = small_spec();
  s.replications = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.theta0 = 0.995;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.mu_list = {1.0, -2.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.coarse_grid = 10;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/sweep.conf"), ConfigError);
}

TEST(Csv, FormattingAndQuoting) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(2.0), "2");
  EXPECT_EQ(format_real(NAN), "nan");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-300, 0.49999999999999994})
    EXPECT_EQ(std::strtod(format_real(v).c_str(), nullptr), v);
}

TEST(Csv, PartialMarkerAndRename) {
  const auto p = scratch("w.csv");
  {
    CsvWriter w(p.string(), {"a", "b"});
    w.row({"1", "x,y"});
    EXPECT_TRUE(fs::exists(p.string() + ".partial"));
    EXPECT_FALSE(fs::exists(p));
    w.close();
  }
  EXPECT_FALSE(fs::exists(p.string() + ".partial"));
  EXPECT_EQ(slurp(p), "a,b\r\n1,\"x,y\"\r\n");
  const auto q = scratch("abandoned.csv");
  { CsvWriter w(q.string(), {"a"}); }
  EXPECT_TRUE(fs::exists(q.string() + ".partial"));
  EXPECT_FALSE(fs::exists(q));
  EXPECT_THROW(CsvWriter("/proc/gmsm/forbidden.csv", {"a"}), IoError);
}

TEST(Csv, ReadColumn) {
  const auto p = scratch("data.csv");
  std::ofstream(p) << "x\r\n1.5\r\n-2\r\n\"3\"\r\n";
  EXPECT_EQ(read_real_column(p.string()), (std::vector<double>{1.5, -2, 3}));
  std::ofstream(p) << "y\n1\n";
  EXPECT_THROW(read_real_column(p.string()), std::invalid_argument);
  EXPECT_THROW(read_real_column("/nonexistent.csv"), IoError);
}

TEST(Sweep, OneRowPerCellForSingleReplication) {
  ExperimentSpec s;
  s.mu_list = {1.0, 3.0};
  s.n_list = {100, 1000};
  s.estimators = {ContrastKind::ML};
  s.seed = 1;
  const auto rows = run_sweep(s);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.abs_error, std::fabs(r.theta_hat - s.theta0));
    EXPECT_EQ(r.estimator, "ML");
    EXPECT_EQ(r.wall_time_ms, 0.0);
  }
  EXPECT_EQ(rows[0].mu, 1.0);
  EXPECT_EQ(rows[0].n, 100u);
  EXPECT_EQ(rows[3].mu, 3.0);
  EXPECT_EQ(rows[3].n, 1000u);
}

TEST(Sweep, CsvSchemaAndRoundTrip) {
  const auto p = scratch("sweep_schema.csv");
  SweepOptions o;
  o.csv_path = p.string();
  const auto spec = small_spec();
  const auto rows = run_sweep(spec, o);
  const auto ls = lines(slurp(p));
  ASSERT_EQ(ls.size(), rows.size() + 1);
  EXPECT_EQ(ls[0], "mu,n,T,replication_index,estimator,theta_hat,abs_error,loss_at_opt,wall_time_ms");
  EXPECT_EQ(rows.size(), 2u * 2u * 3u * 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto f = split(ls[i + 1]);
    ASSERT_EQ(f.size(), 9u);
    EXPECT_EQ(std::strtod(f[5].c_str(), nullptr), rows[i].theta_hat);
    EXPECT_EQ(std::strtod(f[7].c_str(), nullptr), rows[i].loss_at_opt);
    EXPECT_EQ(f[4], rows[i].estimator);
    EXPECT_EQ(std::strtod(f[6].c_str(), nullptr), std::fabs(rows[i].theta_hat - spec.theta0));
  }
  // ordered by (mu, n, replication_index, estimator)
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    EXPECT_LE(std::tie(a.mu, a.n, a.replication_index, a.estimator), std::tie(b.mu, b.n, b.replication_index, b.estimator));
  }
  // T column follows the rule
  for (const auto& r : rows) EXPECT_EQ(r.T, std::max(1.0, 2 * std::log(r.mu)));
}

TEST(Sweep, IdenticalAcrossWorkerCountsAndReruns) {
  auto spec = small_spec();
  const auto a = scratch("w1.csv"), b = scratch("w8.csv"), c = scratch("w1_again.csv");
  SweepOptions o;
  o.csv_path = a.string();
  run_sweep(spec, o);
  spec.workers = 8;
  o.csv_path = b.string();
  run_sweep(spec, o);
  spec.workers = 1;
  o.csv_path = c.string();
  run_sweep(spec, o);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), slurp(c));
  spec.seed = 43;
  o.csv_path = scratch("other_seed.csv").string();
  run_sweep(spec, o);
  EXPECT_NE(slurp(a), slurp(o.csv_path));
}

TEST(Sweep, PairedDesign) {
  auto spec = small_spec();
  spec.workers = 4;
  std::mutex m;
  std::map<std::tuple<double, std::size_t, std::size_t>, std::vector<std::vector<double>>> seen;
  std::size_t sampler_calls = 0;
  SweepOptions o;
  o.sampler = [&](const MixtureParams& p, std::size_t n, RngStream& rng, const CellKey&) {
    {
      std::lock_guard<std::mutex> g(m);
      ++sampler_calls;
    }
    return sample(p, n, rng);
  };
  o.observe = [&](const CellKey& k, ContrastKind, std::span<const double> x) {
    std::lock_guard<std::mutex> g(m);
    seen[{k.mu, k.n, k.replication}].emplace_back(x.begin(), x.end());
  };
  run_sweep(spec, o);
  EXPECT_EQ(sampler_calls, 2u * 2u * 3u);
  ASSERT_EQ(seen.size(), 12u);
  for (const auto& [key, sets] : seen) {
    ASSERT_EQ(sets.size(), 4u);
    for (const auto& s : sets) EXPECT_EQ(s, sets[0]);
  }
}

TEST(Sweep, ReplicationStreamsSharedAcrossMu) {
  // common random numbers: the same (seed, replication) drives every mu
  auto spec = small_spec();
  spec.estimators = {ContrastKind::ML};
  std::mutex m;
  std::map<std::pair<double, std::size_t>, double> first;
  SweepOptions o;
  o.sampler = [&](const MixtureParams& p, std::size_t n, RngStream& rng, const CellKey& k) {
    auto copy = rng;
    const double u = copy.uniform();
    std::lock_guard<std::mutex> g(m);
    first[{k.mu, k.replication * 1000 + n}] = u;
    return sample(p, n, rng);
  };
  run_sweep(spec, o);
  for (std::size_t r = 0; r < 3; ++r)
    EXPECT_EQ((first[{1.0, r * 1000 + 50}]), (first[{2.0, r * 1000 + 50}]));
}

TEST(Sweep, TimingOptIn) {
  auto spec = small_spec();
  spec.estimators = {ContrastKind::ML};
  spec.record_timing = true;
  const auto rows = run_sweep(spec);
  double total = 0;
  for (const auto& r : rows) total += r.wall_time_ms;
  EXPECT_GT(total, 0.0);
}

TEST(Sweep, IoFailureLeavesNoFinalFile) {
  auto spec = small_spec();
  SweepOptions o;
  o.csv_path = "/proc/gmsm/sweep.csv";
  EXPECT_THROW(run_sweep(spec, o), IoError);
}

TEST(Landscape, CenteredCurvesAndDensities) {
  LandscapeSpec s;
  s.mu = 2.0;
  s.n = 2000;
  s.grid = 21;
  s.seed = 9;
  s.output = scratch("landscape.csv").string();
  const auto r = run_landscape(s);
  ASSERT_EQ(r.theta.size(), 21u);
  for (const auto* v : {&r.loss_sm, &r.loss_ddsm, &r.loss_ml}) {
    EXPECT_EQ(*std::min_element(v->begin(), v->end()), 0.0);
    for (double x : *v) EXPECT_GE(x, 0.0);
  }
  const auto ls = lines(slurp(r.landscape_path));
  EXPECT_EQ(ls[0], "theta,loss_sm,loss_ddsm,loss_ml");
  EXPECT_EQ(ls.size(), 22u);
  EXPECT_EQ(r.densities_path, densities_path_for(r.landscape_path));
  const auto ds = lines(slurp(r.densities_path));
  EXPECT_EQ(ds[0], "theta,x,density,score");
  EXPECT_EQ(ds.size(), 1u + 5u * 801u);
  const auto f = split(ds[1]);
  EXPECT_EQ(std::strtod(f[0].c_str(), nullptr), 0.01);
  EXPECT_EQ(std::strtod(f[1].c_str(), nullptr), -6.0);
  EXPECT_THROW(
      [] {
        LandscapeSpec bad;
        bad.grid = 1;
        bad.output = scratch("bad.csv").string();
        run_landscape(bad);
      }(),
      std::invalid_argument);
}

TEST(Isoperimetric, RowsAndFamily) {
  const std::vector<double> mus{0.5, 2.0, 1.0};
  const auto grid = theta_grid(0.01, 21);
  const auto p = scratch("iso.csv");
  const auto rows = run_isoperimetric(mus, grid, p.string());
  EXPECT_EQ(rows.size(), 3u * 21u);
  EXPECT_EQ(lines(slurp(p))[0], "mu,theta,c_ip,c_ip_family,two_phi_mu");
  std::map<double, double> fam;
  for (const auto& r : rows) {
    fam[r.mu] = r.c_ip_family;
    EXPECT_NEAR(r.two_phi_mu, 2 * normal_pdf(r.mu), 1e-16);
    if (r.theta == 0.5) {
      EXPECT_NEAR(r.c_ip, r.two_phi_mu, 1e-6);
      EXPECT_NEAR(r.c_ip_family, r.two_phi_mu, 1e-6);
    }
    EXPECT_GE(r.c_ip, r.c_ip_family);
  }
  EXPECT_GT(fam[0.5], fam[1.0]);
  EXPECT_GT(fam[1.0], fam[2.0]);
}

TEST(VerifyBounds, RowsWritten) {
  const std::vector<double> mus{2.0};
  const auto p = scratch("bounds.csv");
  const auto reps = run_verify_bounds(mus, 0.01, p.string());
  const auto ls = lines(slurp(p));
  EXPECT_EQ(ls[0], "name,mu,param,lhs,rhs,satisfied,margin");
  EXPECT_EQ(ls.size(), reps.size() + 1);
  bool chernoff_eq = false, branch = false, mu2 = false;
  for (const auto& r : reps) {
    EXPECT_TRUE(r.satisfied) << r.name;
    chernoff_eq |= r.name == "chernoff" && r.lhs == 0.5 && r.rhs == 0.5;
    branch |= r.name == "xi_branch_agreement";
    mu2 |= r.mu == 2.0;
  }
  EXPECT_TRUE(chernoff_eq);
  EXPECT_TRUE(branch);
  EXPECT_TRUE(mu2);
}

TEST(Cli, ExitCodesAndJson) {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  auto r = cli("isoperimetric --mu-list 1,2 --out " + (dir / "iso.csv").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"status\":\"ok\""), std::string::npos);
  EXPECT_EQ(r.out.find('\n'), r.out.size() - 1);  // one line
  EXPECT_EQ(cli("").code, 3);
  EXPECT_EQ(cli("frobnicate").code, 3);
  EXPECT_EQ(cli("landscape --mu 2").code, 3);
  EXPECT_EQ(cli("sweep --config /nonexistent.conf").code, 3);
  EXPECT_EQ(cli("estimate --estimator sm --mu 1 --data /nonexistent.csv").code, 4);
  EXPECT_EQ(cli("isoperimetric --mu-list 1 --out /proc/gmsm/iso.csv").code, 4);
  EXPECT_EQ(cli("isoperimetric --mu-list -1 --out " + (dir / "neg.csv").string()).code, 3);
  EXPECT_EQ(cli("estimate --estimator em --mu 1 --data " + (dir / "iso.csv").string()).code, 3);
}

TEST(Cli, EstimateSweepAndBounds) {
  const auto dir = scratch("cli2");
  fs::create_directories(dir);
  {
    std::ofstream d(dir / "x.csv");
    d << "x\n";
    RngStream rng(3);
    for (double v : sample(MixtureParams(0.5, 2.0), 2000, rng)) d << format_real(v) << "\n";
  }
  const auto e = cli("estimate --estimator ddsm --mu 2 --data " + (dir / "x.csv").string());
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("\"estimator\":\"DDSM\""), std::string::npos);
  EXPECT_NE(e.out.find("\"theta_hat\":0."), std::string::npos);

  std::ofstream(dir / "sweep.conf") << "mu_list = 1,2\nn_list = 100\nreplications = 2\nestimators = ML,SM\n"
                                       "seed = 5\ncoarse_grid = 64\n";
  const auto s1 = cli("sweep --config " + (dir / "sweep.conf").string() + " --out " + (dir / "a").string());
  EXPECT_EQ(s1.code, 0);
  const auto s2 = cli("sweep --config " + (dir / "sweep.conf").string() + " --workers 3 --out " + (dir / "b").string());
  EXPECT_EQ(s2.code, 0);
  EXPECT_EQ(slurp(dir / "a" / "sweep.csv"), slurp(dir / "b" / "sweep.csv"));
  EXPECT_EQ(lines(slurp(dir / "a" / "sweep.csv")).size(), 1u + 2 * 2 * 2);
  const auto s3 = cli("sweep --config " + (dir / "sweep.conf").string() + " --seed 6 --out " + (dir / "c").string());
  EXPECT_EQ(s3.code, 0);
  EXPECT_NE(slurp(dir / "a" / "sweep.csv"), slurp(dir / "c" / "sweep.csv"));

  const auto v = cli("verify-bounds --mu-list 2 --out " + (dir / "vb.csv").string());
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("\"violations\":[]"), std::string::npos);

  // The Lipschitz direction calibrated at mu = 1 does not carry over at eta = 0.2.
  const auto bad = cli("verify-bounds --mu-list 1,2 --eta 0.2 --out " + (dir / "vb_bad.csv").string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("lipschitz_sm_lower@mu=2"), std::string::npos);
  const auto rows = lines(slurp(dir / "vb_bad.csv"));
  EXPECT_GT(rows.size(), 10u);
  EXPECT_NE(slurp(dir / "vb_bad.csv").find(",false,"), std::string::npos);
}
