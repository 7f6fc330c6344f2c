#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace supdens {

enum class StudyModel { histogram, dpm_laplace };

//! Seeded Monte Carlo study of estimation error against sample size.
//! When tau is set (histogram model) the study also records the posterior-
//! median quantile error and the slope is fitted on it.
struct RateStudyConfig {
  StudyModel model = StudyModel::histogram;
  std::string truth = "lipschitz-sine";
  std::vector<Eigen::Index> n_list;
  int reps = 10;
  double alpha = 1.0;
  std::optional<double> tau;
  std::uint64_t master_seed = 1;
  double log_factor_power = 0.0;  // slowly varying factor (log n)^power in the rate

  int posterior_draws = 200;   // per-replication draws for quantile errors
  double positivity_r = 0.05;  // refuse quantile studies below this density floor
  double zeta = 0.1;           // window half-width for the positivity check
  std::optional<int> frozen_resolution;  // pin J for every n (under-smoothing diagnostic)

  // dpm-laplace knobs
  double alpha_mass = 1.0;
  double a = 1.0;
  int gibbs_iters = 2000;
  int gibbs_burnin = 500;
  int gibbs_thin = 10;

  bool deterministic_output = true;  // zero the wall_time_ms column in emitted files
  std::string study_id = "study";
  std::optional<std::pair<double, double>> slope_range;  // assertion for the CLI exit code
};

struct RateRecord {
  Eigen::Index n = 0;
  int replication = 0;
  double sup_error = 0.0;
  double l1_error = 0.0;
  std::optional<double> quantile_error;
  std::uint64_t seed = 0;
  std::int64_t wall_time_ms = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  double target_exponent = 0.0;
};

struct StudyResult {
  std::vector<RateRecord> records;
  SlopeFit fit;
};

//! rate point (n / log n)^{-alpha/(2 alpha + 1)} (log n)^{log_factor_power}
double rate_point(Eigen::Index n, double alpha, double log_factor_power = 0.0);

StudyResult run_rate_study(const RateStudyConfig& cfg);
StudyResult run_quantile_rate_study(const RateStudyConfig& cfg);

//! least-squares slope of log(mean error per n) on log(n / log n)
SlopeFit fit_slope(const std::vector<RateRecord>& records, bool use_quantile_error,
                   double target_exponent);

enum class EmitFormat { csv, json, svg, gnuplot };

//! writes <study_id>.<ext> under out_dir; returns the paths written
std::vector<std::filesystem::path> emit(const StudyResult& result, const RateStudyConfig& cfg,
                                        EmitFormat format,
                                        const std::filesystem::path& out_dir);

std::vector<RateRecord> parse_records_csv(const std::filesystem::path& path);

//! content hash of a byte string (git-blob style sha1)
std::string sha1_hex(std::string_view bytes);

std::string to_json(const RateStudyConfig& cfg);
RateStudyConfig config_from_json_file(const std::filesystem::path& path);

}  // namespace supdens
