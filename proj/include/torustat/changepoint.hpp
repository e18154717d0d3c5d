#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "torustat/circular_stats.hpp"
#include "torustat/null_dist.hpp"

namespace torustat {

enum class Method { Sacc, Cvmc, Sagc };

std::string method_name(Method m);

/// Tests need at least this many observations; below it calibration noise
/// dominates.
inline constexpr std::size_t min_test_length = 10;

/// The CUSUM process T(k) of a real-valued sequence, its scaled version
/// T(k)/sqrt((k/n)(1-k/n)) over the interior points, and the maximum.
struct CusumProfile {
    std::vector<double> t_values; // T(1..n); T(n) vanishes
    std::vector<double> scaled;   // k = 1..n-1
    double max_statistic = 0.0;
    std::size_t argmax_index = 0; // 1-based k, smallest on ties
};

/// T(k) = [sum_{i<=k} v_i - k*vbar]^2 / (n * s^2) with the (n-1)-divisor
/// sample variance s^2.  Throws degenerate_sample_error on zero variance.
CusumProfile scaled_cusum(std::span<const double> values);

struct TestReport {
    Method method = Method::Sacc;
    std::size_t n = 0;
    double statistic = 0.0;
    std::size_t changepoint_index = 0; // 1..n-1, relative to the tested series
    double cutoff = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false; // statistic > cutoff  <=>  p_value < alpha
    bool p_below_resolution = false;
    std::string calibration; // descriptor of the calibration sample
    std::size_t calibration_replicates = 0;
};

/// Concentration-change test.  The per-observation scores are the squared
/// angles of the mean-centered data; the scaled CUSUM maximum is compared
/// against the Brownian-bridge supremum sample.  When mu is absent the
/// circular mean of the whole series is plugged in.
TestReport sacc_test(const AngleSeries& series, std::optional<double> mu, double alpha,
                     const CalibrationSample& calib);

/// Per-observation squared-angle scores of the SACC statistic.
std::vector<double> sacc_a_values(const AngleSeries& series, double mu);

/// Mean-change scan: candidate splits k = 2..n-1 are ranked by the ratio of
/// the pooled curved variance to the split curved variance.  Splits whose
/// segment mean is undefined are skipped; if every split is skipped the
/// sample is degenerate.
struct CvmcScan {
    std::size_t k_max = 0;   // argmax split, smallest index on ties
    double bbar0 = 0.0;      // pooled curved variance
    double mu1 = 0.0;        // circular mean of [1, k_max]
    double mu2 = 0.0;        // circular mean of [k_max+1, n]
    std::vector<double> bbar; // indexed by k; NaN outside 2..n-1 and at skips
};

CvmcScan cvmc_scan(const AngleSeries& series);

struct CvmcResult {
    double sn = 0.0;
    CvmcScan scan;
};

/// -2 log likelihood ratio at the scanned split, with the concentration
/// treated as known.  Supported families: von Mises, wrapped Cauchy.
CvmcResult cvmc_statistic(const AngleSeries& series, Family family, double concentration);

/// Mean-direction change test calibrated against a simulated null sample of
/// the same (n, family, concentration).
TestReport cvmc_test(const AngleSeries& series, Family family, double concentration, double alpha,
                     const CalibrationSample& calib);

/// Scores of the general test: d_i = max of the mean-centered squared angle
/// and the signed non-centered squared angle (sign +1 when theta_i < pi).
std::vector<double> sagc_d_values(const AngleSeries& series);

/// General (mean and/or concentration) change test; CUSUM of the d-scores
/// against the Brownian-bridge supremum sample.
TestReport sagc_test(const AngleSeries& series, double alpha, const CalibrationSample& calib);

} // namespace torustat
