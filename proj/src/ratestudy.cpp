#include "supdens/ratestudy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "supdens/densities.hpp"
#include "supdens/dpm.hpp"
#include "supdens/histogram.hpp"
#include "supdens/quantile.hpp"
#include "supdens/rng.hpp"

namespace supdens {

double rate_point(Eigen::Index n, double alpha, double log_factor_power) {
  const double nn = static_cast<double>(n);
  const double base = std::pow(nn / std::log(nn), -alpha / (2.0 * alpha + 1.0));
  return base * std::pow(std::log(nn), log_factor_power);
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

void validate(const RateStudyConfig& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("rate study: n_list is empty");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
      std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end())
    throw std::invalid_argument("rate study: n_list must be strictly increasing");
  if (cfg.reps < 1) throw std::invalid_argument("rate study: reps must be >= 1");
}

//! runs tasks 0..count-1 on a small pool; each task writes its own slot
void parallel_for(Eigen::Index count, const std::function<void(Eigen::Index)>& task) {
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(count));
  if (workers <= 1) {
    for (Eigen::Index i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (Eigen::Index i = w; i < count; i += workers) task(i);
    });
  for (auto& t : pool) t.join();
}

int study_resolution(const RateStudyConfig& cfg, Eigen::Index n) {
  return cfg.frozen_resolution ? *cfg.frozen_resolution : choose_resolution(n, cfg.alpha);
}

struct HistogramSetup {
  DensitySpec truth;
  GridFunction p0;
  std::map<int, BinExtrema> extrema;

  explicit HistogramSetup(const RateStudyConfig& cfg)
      : truth(DensitySpec::from_name(cfg.truth)), p0(truth.tabulate(Grid::unit())) {
    if (truth.domain().lo != 0.0 || truth.domain().hi != 1.0)
      throw std::invalid_argument("histogram study: truth must live on [0,1]");
    for (const Eigen::Index n : cfg.n_list) {
      const int J = study_resolution(cfg, n);
      if (!extrema.count(J)) extrema.emplace(J, bin_extrema(p0, J));
    }
  }
};

}  // namespace

StudyResult run_rate_study(const RateStudyConfig& cfg) {
  validate(cfg);
  const auto count = static_cast<Eigen::Index>(cfg.n_list.size()) * cfg.reps;
  std::vector<RateRecord> records(count);

  if (cfg.model == StudyModel::histogram) {
    const HistogramSetup setup(cfg);
    parallel_for(count, [&](Eigen::Index idx) {
      const auto ni = idx / cfg.reps;
      const int rep = static_cast<int>(idx % cfg.reps);
      const Eigen::Index n = cfg.n_list[ni];
      const auto t0 = Clock::now();
      const std::uint64_t seed =
          derive_seed(cfg.master_seed, static_cast<std::uint64_t>(ni) << 32 |
                                           static_cast<std::uint64_t>(rep));
      const int J = study_resolution(cfg, n);
      const SampleSet s = sample(setup.truth, n, seed);
      const HistogramPosterior post = fit_histogram(s, J);
      const Eigen::VectorXd vals = bayes_mean_values(post);
      RateRecord& r = records[idx];
      r.n = n;
      r.replication = rep;
      r.sup_error = sup_distance(vals, setup.extrema.at(J));
      r.l1_error = l1_distance(vals, setup.p0, J);
      r.seed = seed;
      r.wall_time_ms = elapsed_ms(t0);
    });
    SlopeFit fit = fit_slope(records, false, -cfg.alpha / (2.0 * cfg.alpha + 1.0));
    return StudyResult{std::move(records), fit};
  }

  // dpm-laplace
  const DensitySpec truth = DensitySpec::from_name(cfg.truth);
  const Grid grid(truth.domain().lo, truth.domain().hi, (1 << 11) + 1);
  const GridFunction p0 = truth.tabulate(grid);
  parallel_for(count, [&](Eigen::Index idx) {
    const auto ni = idx / cfg.reps;
    const int rep = static_cast<int>(idx % cfg.reps);
    const Eigen::Index n = cfg.n_list[ni];
    const auto t0 = Clock::now();
    const std::uint64_t seed = derive_seed(
        cfg.master_seed, static_cast<std::uint64_t>(ni) << 32 | static_cast<std::uint64_t>(rep));
    const SampleSet s = sample(truth, n, seed);
    DPMixtureSpec spec;
    spec.kernel = MixtureKernel::laplace;
    spec.alpha_mass = cfg.alpha_mass;
    spec.a = cfg.a;
    spec.truncation = DPMixtureSpec::default_truncation(cfg.alpha_mass, n);
    GibbsOptions opts;
    opts.iters = cfg.gibbs_iters;
    opts.burnin = cfg.gibbs_burnin;
    opts.thin = cfg.gibbs_thin;
    const auto draws = fit_gibbs(s, spec, opts, derive_seed(seed, 0x9b));
    const GridFunction est = bayes_estimator(draws, MixtureKernel::laplace, grid);
    RateRecord& r = records[idx];
    r.n = n;
    r.replication = rep;
    r.sup_error = norm(est - p0, Norm::Sup);
    r.l1_error = norm(est - p0, Norm::L1);
    r.seed = seed;
    r.wall_time_ms = elapsed_ms(t0);
  });
  SlopeFit fit = fit_slope(records, false, -3.0 / 8.0);
  return StudyResult{std::move(records), fit};
}

StudyResult run_quantile_rate_study(const RateStudyConfig& cfg) {
  validate(cfg);
  if (!cfg.tau) throw std::invalid_argument("quantile rate study: tau is not set");
  if (cfg.model != StudyModel::histogram)
    throw std::invalid_argument("quantile rate study: only the histogram model is supported");
  const double tau = *cfg.tau;

  const HistogramSetup setup(cfg);
  const double q0 = quantile(cdf(setup.p0), tau);

  // refuse when the truth is too small near its quantile
  double inf_p = setup.truth.pdf(q0);
  for (int k = -100; k <= 100; ++k) {
    const double x = q0 + cfg.zeta * static_cast<double>(k) / 100.0;
    if (x >= 0.0 && x <= 1.0) inf_p = std::min(inf_p, setup.truth.pdf(x));
  }
  if (inf_p < cfg.positivity_r) {
    std::ostringstream msg;
    msg << "quantile rate study refused: inf of the truth on [" << q0 - cfg.zeta << ", "
        << q0 + cfg.zeta << "] is " << inf_p << " < required " << cfg.positivity_r;
    throw std::runtime_error(msg.str());
  }

  const auto count = static_cast<Eigen::Index>(cfg.n_list.size()) * cfg.reps;
  std::vector<RateRecord> records(count);
  parallel_for(count, [&](Eigen::Index idx) {
    const auto ni = idx / cfg.reps;
    const int rep = static_cast<int>(idx % cfg.reps);
    const Eigen::Index n = cfg.n_list[ni];
    const auto t0 = Clock::now();
    const std::uint64_t seed = derive_seed(
        cfg.master_seed, static_cast<std::uint64_t>(ni) << 32 | static_cast<std::uint64_t>(rep));
    const int J = study_resolution(cfg, n);
    const SampleSet s = sample(setup.truth, n, seed);
    const HistogramPosterior post = fit_histogram(s, J);
    const Eigen::VectorXd vals = bayes_mean_values(post);

    const Eigen::MatrixXd draws =
        sample_posterior_values(post, cfg.posterior_draws, derive_seed(seed, 0x71));
    Eigen::VectorXd qs = posterior_quantiles_hist(draws, tau);
    std::sort(qs.data(), qs.data() + qs.size());
    const double median = qs.size() % 2 == 1
                              ? qs[qs.size() / 2]
                              : 0.5 * (qs[qs.size() / 2 - 1] + qs[qs.size() / 2]);

    RateRecord& r = records[idx];
    r.n = n;
    r.replication = rep;
    r.sup_error = sup_distance(vals, setup.extrema.at(J));
    r.l1_error = l1_distance(vals, setup.p0, J);
    r.quantile_error = std::abs(median - q0);
    r.seed = seed;
    r.wall_time_ms = elapsed_ms(t0);
  });
  SlopeFit fit = fit_slope(records, true, -(cfg.alpha + 1.0) / (2.0 * cfg.alpha + 1.0));
  return StudyResult{std::move(records), fit};
}

SlopeFit fit_slope(const std::vector<RateRecord>& records, bool use_quantile_error,
                   double target_exponent) {
  std::map<Eigen::Index, std::pair<double, Eigen::Index>> acc;  // n -> (sum, count)
  for (const auto& r : records) {
    const double e = use_quantile_error ? r.quantile_error.value() : r.sup_error;
    auto& slot = acc[r.n];
    slot.first += e;
    slot.second++;
  }
  const auto k = static_cast<Eigen::Index>(acc.size());
  if (k < 2) throw std::invalid_argument("fit_slope: need at least two sample sizes");
  Eigen::VectorXd x(k), y(k);
  Eigen::Index i = 0;
  for (const auto& [n, slot] : acc) {
    const double nn = static_cast<double>(n);
    x[i] = std::log(nn / std::log(nn));
    y[i] = std::log(std::max(slot.first / static_cast<double>(slot.second), 1e-300));
    ++i;
  }
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double slope = ((x.array() - mx) * (y.array() - my)).sum() / sxx;
  const double intercept = my - slope * mx;
  double se = 0.0;
  if (k > 2) {
    const double rss = (y.array() - intercept - slope * x.array()).square().sum();
    se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  }
  return SlopeFit{slope, intercept, se, target_exponent};
}

// ---------------------------------------------------------------------------
// emission

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string records_csv(const std::vector<RateRecord>& records, const RateStudyConfig& cfg) {
  std::ostringstream out;
  out << "study_id,n,replication,sup_error,l1_error,quantile_error,seed,wall_time_ms\n";
  for (const auto& r : records) {
    out << cfg.study_id << ',' << r.n << ',' << r.replication << ',' << fmt_double(r.sup_error)
        << ',' << fmt_double(r.l1_error) << ',';
    if (r.quantile_error) out << fmt_double(*r.quantile_error);
    out << ',' << r.seed << ',' << (cfg.deterministic_output ? 0 : r.wall_time_ms) << '\n';
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string model_name(StudyModel m) {
  return m == StudyModel::histogram ? "histogram" : "dpm-laplace";
}

StudyModel model_from_name(const std::string& s) {
  if (s == "histogram") return StudyModel::histogram;
  if (s == "dpm-laplace") return StudyModel::dpm_laplace;
  throw std::invalid_argument("unknown study model: " + s);
}

std::string svg_document(const StudyResult& result, bool use_quantile) {
  // log-log scatter with the fitted line
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : result.records) {
    const double e = use_quantile && r.quantile_error ? *r.quantile_error : r.sup_error;
    const double nn = static_cast<double>(r.n);
    pts.emplace_back(std::log(nn / std::log(nn)), std::log(std::max(e, 1e-300)));
  }
  double xmin = pts[0].first, xmax = xmin, ymin = pts[0].second, ymax = ymin;
  for (const auto& [px, py] : pts) {
    xmin = std::min(xmin, px), xmax = std::max(xmax, px);
    ymin = std::min(ymin, py), ymax = std::max(ymax, py);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double W = 640.0, H = 440.0, ml = 60.0, mb = 40.0, mt = 20.0, mr = 20.0;
  auto X = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mb - mt); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<path d=\"M " << ml << ' ' << mt << " L " << ml << ' ' << H - mb << " L " << W - mr
    << ' ' << H - mb << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (const auto& [px, py] : pts)
    s << "<circle cx=\"" << fmt_double(X(px)) << "\" cy=\"" << fmt_double(Y(py))
      << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  const double y0 = result.fit.intercept + result.fit.slope * xmin;
  const double y1 = result.fit.intercept + result.fit.slope * xmax;
  s << "<line x1=\"" << fmt_double(X(xmin)) << "\" y1=\"" << fmt_double(Y(y0)) << "\" x2=\""
    << fmt_double(X(xmax)) << "\" y2=\"" << fmt_double(Y(y1))
    << "\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n";
  s << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14 << "\" font-size=\"12\">slope "
    << fmt_double(result.fit.slope) << " (target " << fmt_double(result.fit.target_exponent)
    << ")</text>\n";
  s << "<text x=\"" << (W - mr - 160) << "\" y=\"" << H - 8
    << "\" font-size=\"12\">log(n / log n)</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace

std::string to_json(const RateStudyConfig& cfg) {
  nlohmann::json j;
  j["model"] = model_name(cfg.model);
  j["truth"] = cfg.truth;
  j["n_list"] = cfg.n_list;
  j["reps"] = cfg.reps;
  j["alpha"] = cfg.alpha;
  if (cfg.tau) j["tau"] = *cfg.tau;
  j["master_seed"] = cfg.master_seed;
  j["log_factor_power"] = cfg.log_factor_power;
  j["posterior_draws"] = cfg.posterior_draws;
  j["positivity_r"] = cfg.positivity_r;
  j["zeta"] = cfg.zeta;
  if (cfg.frozen_resolution) j["frozen_resolution"] = *cfg.frozen_resolution;
  j["alpha_mass"] = cfg.alpha_mass;
  j["a"] = cfg.a;
  j["gibbs_iters"] = cfg.gibbs_iters;
  j["gibbs_burnin"] = cfg.gibbs_burnin;
  j["gibbs_thin"] = cfg.gibbs_thin;
  j["deterministic_output"] = cfg.deterministic_output;
  j["study_id"] = cfg.study_id;
  if (cfg.slope_range)
    j["slope_range"] = {cfg.slope_range->first, cfg.slope_range->second};
  return j.dump(2);
}

RateStudyConfig config_from_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path.string());
  nlohmann::json j;
  f >> j;
  RateStudyConfig cfg;
  cfg.model = model_from_name(j.value("model", "histogram"));
  cfg.truth = j.value("truth", cfg.truth);
  cfg.n_list = j.at("n_list").get<std::vector<Eigen::Index>>();
  cfg.reps = j.value("reps", cfg.reps);
  cfg.alpha = j.value("alpha", cfg.alpha);
  if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.log_factor_power = j.value("log_factor_power", cfg.log_factor_power);
  cfg.posterior_draws = j.value("posterior_draws", cfg.posterior_draws);
  cfg.positivity_r = j.value("positivity_r", cfg.positivity_r);
  cfg.zeta = j.value("zeta", cfg.zeta);
  if (j.contains("frozen_resolution")) cfg.frozen_resolution = j["frozen_resolution"].get<int>();
  cfg.alpha_mass = j.value("alpha_mass", cfg.alpha_mass);
  cfg.a = j.value("a", cfg.a);
  cfg.gibbs_iters = j.value("gibbs_iters", cfg.gibbs_iters);
  cfg.gibbs_burnin = j.value("gibbs_burnin", cfg.gibbs_burnin);
  cfg.gibbs_thin = j.value("gibbs_thin", cfg.gibbs_thin);
  cfg.deterministic_output = j.value("deterministic_output", cfg.deterministic_output);
  cfg.study_id = j.value("study_id", cfg.study_id);
  if (j.contains("slope_range")) {
    const auto r = j["slope_range"].get<std::vector<double>>();
    if (r.size() != 2) throw std::invalid_argument("slope_range must have two entries");
    cfg.slope_range = std::make_pair(r[0], r[1]);
  }
  return cfg;
}

std::vector<std::filesystem::path> emit(const StudyResult& result, const RateStudyConfig& cfg,
                                        EmitFormat format,
                                        const std::filesystem::path& out_dir) {
  if (result.records.empty()) throw std::invalid_argument("emit: no records");
  std::filesystem::create_directories(out_dir);
  const bool use_quantile = result.records.front().quantile_error.has_value();
  std::vector<std::filesystem::path> written;

  switch (format) {
    case EmitFormat::csv: {
      const auto p = out_dir / (cfg.study_id + ".csv");
      write_file(p, records_csv(result.records, cfg));
      written.push_back(p);
      break;
    }
    case EmitFormat::json: {
      nlohmann::json j;
      j["config"] = nlohmann::json::parse(to_json(cfg));
      j["fit"] = {{"slope", result.fit.slope},
                  {"intercept", result.fit.intercept},
                  {"stderr", result.fit.stderr_},
                  {"target_exponent", result.fit.target_exponent}};
      j["record_count"] = result.records.size();
      j["csv_sha1"] = sha1_hex(records_csv(result.records, cfg));
      if (!cfg.deterministic_output) {
        std::int64_t total = 0;
        for (const auto& r : result.records) total += r.wall_time_ms;
        j["total_wall_time_ms"] = total;
      }
      const auto p = out_dir / (cfg.study_id + ".json");
      write_file(p, j.dump(2) + "\n");
      written.push_back(p);
      break;
    }
    case EmitFormat::svg: {
      const auto p = out_dir / (cfg.study_id + ".svg");
      write_file(p, svg_document(result, use_quantile));
      written.push_back(p);
      break;
    }
    case EmitFormat::gnuplot: {
      std::ostringstream dat;
      for (const auto& r : result.records) {
        const double e = use_quantile && r.quantile_error ? *r.quantile_error : r.sup_error;
        const double nn = static_cast<double>(r.n);
        dat << fmt_double(std::log(nn / std::log(nn))) << ' '
            << fmt_double(std::log(std::max(e, 1e-300))) << '\n';
      }
      const auto pd = out_dir / (cfg.study_id + ".dat");
      write_file(pd, dat.str());
      std::ostringstream gp;
      gp << "set xlabel 'log(n / log n)'\nset ylabel 'log error'\n";
      gp << "f(x) = " << fmt_double(result.fit.intercept) << " + "
         << fmt_double(result.fit.slope) << " * x\n";
      gp << "plot '" << pd.filename().string() << "' with points title '"
         << cfg.study_id << "', f(x) with lines title 'fit'\n";
      const auto pg = out_dir / (cfg.study_id + ".gp");
      write_file(pg, gp.str());
      written.push_back(pd);
      written.push_back(pg);
      break;
    }
  }
  return written;
}

std::vector<RateRecord> parse_records_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open csv: " + path.string());
  std::string line;
  if (!std::getline(f, line) ||
      line != "study_id,n,replication,sup_error,l1_error,quantile_error,seed,wall_time_ms")
    throw std::runtime_error("unexpected csv header in " + path.string());
  std::vector<RateRecord> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(',', start);
      cells.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (cells.size() != 8) throw std::runtime_error("malformed csv row: " + line);
    RateRecord r;
    r.n = std::stoll(cells[1]);
    r.replication = std::stoi(cells[2]);
    r.sup_error = std::strtod(cells[3].c_str(), nullptr);
    r.l1_error = std::strtod(cells[4].c_str(), nullptr);
    if (!cells[5].empty()) r.quantile_error = std::strtod(cells[5].c_str(), nullptr);
    r.seed = std::stoull(cells[6]);
    r.wall_time_ms = std::stoll(cells[7]);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// sha1 (for reproducibility hashes only)

namespace {

struct Sha1 {
  std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
  std::uint64_t total = 0;
  unsigned char block[64];
  std::size_t fill = 0;

  static std::uint32_t rol(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

  void process(const unsigned char* p) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = t;
    }
    h[0] += a, h[1] += b, h[2] += c, h[3] += d, h[4] += e;
  }

  void update(const unsigned char* p, std::size_t len) {
    total += len;
    while (len > 0) {
      const std::size_t take = std::min(len, 64 - fill);
      std::memcpy(block + fill, p, take);
      fill += take;
      p += take;
      len -= take;
      if (fill == 64) {
        process(block);
        fill = 0;
      }
    }
  }

  std::string hex() {
    const std::uint64_t bits = total * 8;
    const unsigned char pad = 0x80;
    update(&pad, 1);
    const unsigned char zero = 0x00;
    while (fill != 56) update(&zero, 1);
    unsigned char len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len, 8);
    char buf[41];
    for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", h[i]);
    return std::string(buf, 40);
  }
};

}  // namespace

std::string sha1_hex(std::string_view bytes) {
  Sha1 s;
  const std::string header = "blob " + std::to_string(bytes.size());
  s.update(reinterpret_cast<const unsigned char*>(header.data()), header.size() + 1);
  s.update(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  return s.hex();
}

}  // namespace supdens
