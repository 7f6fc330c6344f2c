// Command-line front end: fitting, testing and rate studies over the
// library's estimators. See README.md for examples.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "supdens/approx.hpp"
#include "supdens/densities.hpp"
#include "supdens/dpm.hpp"
#include "supdens/fourier.hpp"
#include "supdens/gof.hpp"
#include "supdens/histogram.hpp"
#include "supdens/quantile.hpp"
#include "supdens/ratestudy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace supdens;

namespace {

Eigen::VectorXd read_values(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open data file: " + path.string());
  std::vector<double> vals;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    // take the first comma-separated field
    const auto comma = line.find(',');
    vals.push_back(std::stod(comma == std::string::npos ? line : line.substr(0, comma)));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return out;
}

GridFunction read_grid_function(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open draw file: " + path.string());
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("expected x,value rows");
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw std::runtime_error("draw file too short: " + path.string());
  const auto m = static_cast<Eigen::Index>(vs.size());
  Eigen::VectorXd values(m);
  for (Eigen::Index i = 0; i < m; ++i) values[i] = vs[static_cast<std::size_t>(i)];
  return GridFunction(Grid(xs.front(), xs.back(), m), std::move(values));
}

void write_grid_function_csv(const GridFunction& f, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << "x,value\n";
  char buf[80];
  for (Eigen::Index i = 0; i < f.grid.m; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", f.grid.point(i), f.values[i]);
    out << buf;
  }
}

ApproxOperator operator_from_flags(const std::string& kernel, int level) {
  if (kernel == "haar") return ApproxOperator::haar(level);
  return ApproxOperator::convolution(kernel_from_name(kernel), level);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sup-norm density estimation toolkit"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::string format = "csv,json";

  // --- sample ---------------------------------------------------------
  auto* cmd_sample = app.add_subcommand("sample", "draw from a catalog density");
  std::string density = "lipschitz-sine", sample_out = "sample.csv";
  Eigen::Index sample_n = 1000;
  cmd_sample->add_option("--density", density, "catalog density name");
  cmd_sample->add_option("--n", sample_n, "number of draws");
  cmd_sample->add_option("--seed", seed, "rng seed");
  cmd_sample->add_option("--out", sample_out, "output csv (one value per line)");

  // --- fit-histogram --------------------------------------------------
  auto* cmd_hist = app.add_subcommand("fit-histogram", "conjugate dyadic-histogram posterior");
  std::string hist_data;
  int hist_J = -1;
  double hist_alpha = 1.0;
  Eigen::Index hist_grid_points = 1025;
  cmd_hist->add_option("--data", hist_data, "csv of observations in [0,1]")->required();
  cmd_hist->add_option("--J", hist_J, "dyadic resolution (overrides --alpha)");
  cmd_hist->add_option("--alpha", hist_alpha, "smoothness driving the resolution schedule");
  cmd_hist->add_option("--grid-points", hist_grid_points, "resolution of the emitted mean");
  cmd_hist->add_option("--out-dir", out_dir, "output directory");

  // --- fit-dpm --------------------------------------------------------
  auto* cmd_dpm = app.add_subcommand("fit-dpm", "Dirichlet-process mixture posterior");
  std::string dpm_data, dpm_kernel = "laplace";
  double dpm_alpha_mass = 1.0, dpm_a = 1.0;
  int dpm_iters = 4000, dpm_burnin = 1000, dpm_thin = 3, dpm_T = 0;
  cmd_dpm->add_option("--data", dpm_data, "csv of observations")->required();
  cmd_dpm->add_option("--kernel", dpm_kernel, "laplace|gaussian")
      ->check(CLI::IsMember({"laplace", "gaussian"}));
  cmd_dpm->add_option("--alpha-mass", dpm_alpha_mass, "total mass of the base measure");
  cmd_dpm->add_option("--a", dpm_a, "half-width of the mixing support");
  cmd_dpm->add_option("--iters", dpm_iters, "gibbs sweeps");
  cmd_dpm->add_option("--burnin", dpm_burnin, "discarded sweeps");
  cmd_dpm->add_option("--thin", dpm_thin, "thinning stride");
  cmd_dpm->add_option("--truncation", dpm_T, "stick-breaking truncation (0 = automatic)");
  cmd_dpm->add_option("--seed", seed, "rng seed");
  cmd_dpm->add_option("--out-dir", out_dir, "output directory");

  // --- test-gof -------------------------------------------------------
  auto* cmd_gof = app.add_subcommand("test-gof", "goodness-of-fit test against a catalog null");
  std::string gof_data, gof_null = "uniform", gof_r = "sup", gof_kernel = "haar";
  int gof_J = 3;
  double gof_M0 = 2.0, gof_eps = 0.0, gof_alpha = 1.0;
  cmd_gof->add_option("--data", gof_data, "csv of observations")->required();
  cmd_gof->add_option("--null", gof_null, "catalog name of the null density");
  cmd_gof->add_option("--r", gof_r, "sup|l1")->check(CLI::IsMember({"sup", "l1"}));
  cmd_gof->add_option("--J", gof_J, "operator resolution");
  cmd_gof->add_option("--M0", gof_M0, "threshold multiplier");
  cmd_gof->add_option("--eps", gof_eps, "rate point (0 = derive from --alpha)");
  cmd_gof->add_option("--alpha", gof_alpha, "smoothness for the derived rate point");
  cmd_gof->add_option("--kernel", gof_kernel, "haar|gaussian|laplace|bandlimited:<beta>");
  cmd_gof->add_option("--out-dir", out_dir, "output directory");

  // --- quantile -------------------------------------------------------
  auto* cmd_q = app.add_subcommand("quantile", "per-draw quantiles of tabulated densities");
  std::string q_dir;
  double q_tau = 0.5;
  cmd_q->add_option("--draws", q_dir, "directory of x,value csv files")->required();
  cmd_q->add_option("--tau", q_tau, "quantile level in (0,1)");
  cmd_q->add_option("--out-dir", out_dir, "output directory");

  // --- lemma1-check ---------------------------------------------------
  auto* cmd_l1 = app.add_subcommand("lemma1-check",
                                    "L2 smoothing-rate limit of a density/kernel pair");
  std::string l1_p = "laplace", l1_h = "gaussian", l1_deltas = "1e-1,1e-2,1e-3", l1_out;
  double l1_beta = 2.0;
  cmd_l1->set_help_flag("--help", "print help");  // frees -h for the kernel flag
  cmd_l1->add_option("--p", l1_p, "catalog density");
  cmd_l1->add_option("--h", l1_h, "smoothing kernel");
  cmd_l1->add_option("--beta", l1_beta, "algebraic decay degree of the density transform");
  cmd_l1->add_option("--deltas", l1_deltas, "comma-separated bandwidths");
  cmd_l1->add_option("--out", l1_out, "output csv (default: stdout)");

  // --- rate-study -----------------------------------------------------
  auto* cmd_rs = app.add_subcommand("rate-study", "seeded Monte Carlo error-rate study");
  std::string rs_config;
  std::uint64_t rs_seed = 0;
  bool rs_seed_set = false;
  cmd_rs->add_option("--config", rs_config, "json study configuration")->required();
  cmd_rs->add_option("--seed", rs_seed, "override the configured master seed")
      ->each([&](const std::string&) { rs_seed_set = true; });
  cmd_rs->add_option("--out-dir", out_dir, "output directory");
  cmd_rs->add_option("--format", format, "comma list of csv,json,svg,gnuplot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_sample) {
      const DensitySpec spec = DensitySpec::from_name(density);
      const SampleSet s = sample(spec, sample_n, seed);
      std::ofstream out(sample_out);
      if (!out) throw std::runtime_error("cannot write: " + sample_out);
      char buf[40];
      for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", s.values[i]);
        out << buf;
      }
      std::cout << "wrote " << sample_n << " draws from " << density << " to " << sample_out
                << "\n";
      return 0;
    }

    if (*cmd_hist) {
      const Eigen::VectorXd values = read_values(hist_data);
      const SampleSet s{values, seed, hist_data};
      const int J = hist_J >= 0 ? hist_J
                                : choose_resolution(values.size(), hist_alpha);
      const HistogramPosterior post = fit_histogram(s, J);
      fs::create_directories(out_dir);
      write_grid_function_csv(bayes_mean(post, Grid::unit(hist_grid_points)),
                              fs::path(out_dir) / "bayes_mean.csv");
      json summary;
      summary["J"] = J;
      summary["n"] = post.n;
      summary["counts"] = std::vector<int>(post.counts.data(),
                                           post.counts.data() + post.counts.size());
      std::ofstream(fs::path(out_dir) / "summary.json") << summary.dump(2) << "\n";
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*cmd_dpm) {
      const Eigen::VectorXd values = read_values(dpm_data);
      const SampleSet s{values, seed, dpm_data};
      DPMixtureSpec spec;
      spec.kernel = dpm_kernel == "laplace" ? MixtureKernel::laplace : MixtureKernel::gaussian;
      spec.alpha_mass = dpm_alpha_mass;
      spec.a = dpm_a;
      spec.truncation = dpm_T > 0 ? dpm_T
                                  : DPMixtureSpec::default_truncation(dpm_alpha_mass,
                                                                      values.size());
      GibbsOptions opts;
      opts.iters = dpm_iters;
      opts.burnin = dpm_burnin;
      opts.thin = dpm_thin;
      GibbsDiagnostics diag;
      const auto draws = fit_gibbs(s, spec, opts, seed, &diag);
      const Grid grid = Grid::mixture(dpm_a, 4097);
      fs::create_directories(out_dir);
      write_grid_function_csv(bayes_estimator(draws, spec.kernel, grid),
                              fs::path(out_dir) / "bayes_estimator.csv");
      json d;
      d["draws"] = draws.size();
      d["truncation"] = spec.truncation;
      d["atom_acceptance"] = diag.atom_acceptance;
      d["sigma_acceptance"] = diag.sigma_acceptance;
      d["cluster_count_trace"] = diag.cluster_count_trace;
      std::ofstream(fs::path(out_dir) / "diagnostics.json") << d.dump(2) << "\n";
      std::cout << d.dump(2) << "\n";
      return 0;
    }

    if (*cmd_gof) {
      const Eigen::VectorXd values = read_values(gof_data);
      const SampleSet s{values, seed, gof_data};
      const DensitySpec null_spec = DensitySpec::from_name(gof_null);
      const GridFunction p0 = null_spec.tabulate();
      const ApproxOperator op = operator_from_flags(gof_kernel, gof_J);
      const double eps =
          gof_eps > 0.0 ? gof_eps : rate_point(values.size(), gof_alpha);
      const TestConfig cfg{gof_r == "sup" ? Norm::Sup : Norm::L1, op, gof_M0, eps,
                           dominating(op).l1_norm};
      const TestReport rep = run_test(s, p0, cfg);
      json j;
      j["statistic"] = rep.statistic;
      j["threshold"] = rep.threshold;
      j["reject"] = rep.reject;
      j["h_value"] = rep.h_value;
      j["mcdiarmid_bound_at_threshold"] = rep.mcdiarmid_bound_at_threshold;
      std::cout << j.dump(2) << "\n";
      if (out_dir != ".") {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "test_report.json") << j.dump(2) << "\n";
      }
      return 0;
    }

    if (*cmd_q) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(q_dir))
        if (e.path().extension() == ".csv") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw std::runtime_error("no csv draws in " + q_dir);
      std::vector<GridFunction> draws;
      draws.reserve(files.size());
      for (const auto& p : files) draws.push_back(read_grid_function(p));
      const Eigen::VectorXd qs = posterior_quantiles(draws, q_tau);
      fs::create_directories(out_dir);
      {
        std::ofstream out(fs::path(out_dir) / "quantiles.csv");
        out << "draw,file,quantile\n";
        char buf[40];
        for (Eigen::Index i = 0; i < qs.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "%.17g", qs[i]);
          out << i << ',' << files[static_cast<std::size_t>(i)].filename().string() << ','
              << buf << '\n';
        }
      }
      Eigen::VectorXd sorted = qs;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      const double median = sorted.size() % 2 == 1
                                ? sorted[sorted.size() / 2]
                                : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
      json summary;
      summary["tau"] = q_tau;
      summary["draws"] = qs.size();
      summary["mean"] = qs.mean();
      summary["median"] = median;
      summary["sd"] =
          std::sqrt((qs.array() - qs.mean()).square().sum() / std::max<Eigen::Index>(1, qs.size() - 1));
      std::ofstream(fs::path(out_dir) / "quantile_summary.json") << summary.dump(2) << "\n";
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*cmd_l1) {
      std::vector<double> ds;
      std::stringstream ss(l1_deltas);
      std::string tok;
      while (std::getline(ss, tok, ',')) ds.push_back(std::stod(tok));
      Eigen::VectorXd deltas(static_cast<Eigen::Index>(ds.size()));
      for (std::size_t i = 0; i < ds.size(); ++i) deltas[static_cast<Eigen::Index>(i)] = ds[i];
      const auto rows = smoothing_rate_check(DensitySpec::from_name(l1_p),
                                             kernel_from_name(l1_h), l1_beta, deltas);
      std::ostringstream out;
      out << "delta,l2sq,ratio\n";
      char buf[120];
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r.delta, r.l2sq, r.ratio);
        out << buf;
      }
      if (l1_out.empty()) {
        std::cout << out.str();
      } else {
        std::ofstream f(l1_out);
        if (!f) throw std::runtime_error("cannot write: " + l1_out);
        f << out.str();
      }
      return 0;
    }

    if (*cmd_rs) {
      RateStudyConfig cfg = config_from_json_file(rs_config);
      if (rs_seed_set) cfg.master_seed = rs_seed;
      const StudyResult res =
          cfg.tau && cfg.model == StudyModel::histogram ? run_quantile_rate_study(cfg)
                                                        : run_rate_study(cfg);
      std::stringstream fmts(format);
      std::string f;
      while (std::getline(fmts, f, ',')) {
        EmitFormat ef;
        if (f == "csv")
          ef = EmitFormat::csv;
        else if (f == "json")
          ef = EmitFormat::json;
        else if (f == "svg")
          ef = EmitFormat::svg;
        else if (f == "gnuplot")
          ef = EmitFormat::gnuplot;
        else
          throw std::runtime_error("unknown format: " + f);
        for (const auto& p : emit(res, cfg, ef, out_dir))
          std::cout << "wrote " << p.string() << "\n";
      }
      std::cout << "slope " << res.fit.slope << " (target " << res.fit.target_exponent
                << ", stderr " << res.fit.stderr_ << ")\n";
      if (cfg.slope_range) {
        const bool ok =
            res.fit.slope >= cfg.slope_range->first && res.fit.slope <= cfg.slope_range->second;
        std::cout << "slope assertion [" << cfg.slope_range->first << ", "
                  << cfg.slope_range->second << "]: " << (ok ? "pass" : "FAIL") << "\n";
        return ok ? 0 : 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
