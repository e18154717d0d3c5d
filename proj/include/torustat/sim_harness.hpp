#pragma once

#include "torustat/changepoint.hpp"

namespace torustat {

/// Two-segment power study: samples of size n drawn from h0 up to the true
/// changepoint and from an h1 grid point after it, with the rejection rate
/// recorded per grid point and level.
struct PowerStudySpec {
    Method method = Method::Sacc;
    std::size_t n = 500;
    std::size_t k_star = 0; // 0 means n/2
    DistributionSpec h0 = DistributionSpec::von_mises(0.0, 1.0);
    std::vector<DistributionSpec> h1_grid;
    std::vector<double> alphas = {0.01, 0.05};
    std::size_t replicates = 1000;
    std::size_t calibration_replicates = 5000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<double> known_mean; // SACC with a known mean direction
};

struct PowerCell {
    std::string h1_label;
    double alpha = 0.0;
    double power = 0.0;
    std::size_t errors = 0; // replicates the test could not be applied to
};

std::vector<PowerCell> run_power_study(const PowerStudySpec& spec);

/// The tabulated Monte Carlo reference cutoffs the harness can regenerate:
///   T1 -- concentration-change statistic under von Mises nulls, plus the
///         Brownian-bridge supremum at matching grid sizes;
///   T2 -- mean-change statistic, von Mises, n = 500, over (kappa, mu);
///   T3 -- mean-change statistic, von Mises, mu = 0, over (n, kappa);
///   T4 -- mean-change statistic, wrapped Cauchy, n = 500, over (rho, mu).
enum class CutoffTable { T1, T2, T3, T4 };

struct CutoffRow {
    std::string label;
    std::size_t n = 0;
    // exactly one configuration per row
    bool is_bridge = false;            // T1 bridge rows
    std::optional<double> kappa;       // von Mises rows
    std::optional<double> rho;         // wrapped Cauchy rows
    double mu = 0.0;
    double q90 = 0.0, q95 = 0.0, q99 = 0.0; // reference quantiles
};

const std::vector<CutoffRow>& cutoff_table_rows(CutoffTable table);

struct CutoffComparison {
    std::string row_label;
    double level = 0.0;      // 0.90 / 0.95 / 0.99
    double reference = 0.0;  // tabulated value
    double reproduced = 0.0; // regenerated value
    double abs_gap = 0.0;
    double tolerance = 0.0;  // 3 x asymptotic quantile standard error
    bool within = false;
};

/// Regenerate one row of a table and compare against the tabulated values.
std::vector<CutoffComparison> reproduce_cutoff_row(CutoffTable table, std::size_t row_index,
                                                   std::size_t replicates, std::uint64_t seed,
                                                   unsigned threads = 0);

/// Regenerate every row of a table.
std::vector<CutoffComparison> reproduce_cutoff_table(CutoffTable table, std::size_t replicates,
                                                     std::uint64_t seed, unsigned threads = 0);

/// Null simulation of the concentration-change statistic itself (von Mises
/// data, known mean); the sample calibrates and cross-checks the bridge law.
CalibrationSample simulate_sacc_null(std::size_t n, double mu, double kappa,
                                     std::size_t replicates, std::uint64_t seed,
                                     unsigned threads = 0);

/// Null simulation of the general-change statistic (estimated mean).
CalibrationSample simulate_sagc_null(std::size_t n, const DistributionSpec& spec,
                                     std::size_t replicates, std::uint64_t seed,
                                     unsigned threads = 0);

/// Two-sample Kolmogorov-Smirnov distance between sorted samples.
double ks_distance(const std::vector<double>& sorted_a, const std::vector<double>& sorted_b);

/// Asymptotic standard error of the empirical q-quantile of a sample, via a
/// finite-difference estimate of the quantile density.
double quantile_std_error(const CalibrationSample& sample, double q);

std::string cutoff_table_name(CutoffTable table);

/// CSV emission for power studies and table comparisons.
std::string power_study_csv(const std::vector<PowerCell>& cells);
std::string cutoff_comparison_csv(const std::vector<CutoffComparison>& rows);

} // namespace torustat
