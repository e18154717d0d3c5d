#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "torustat/distributions.hpp"

namespace torustat {

enum class CalibrationLaw { BInfinity, DeltaInfinity, SnNull };

std::string law_name(CalibrationLaw law);

/// A sorted Monte Carlo sample of a calibration law, together with the
/// parameters that produced it.  Identical (law, grid, replicates, seed)
/// always reproduce the identical sample.
struct CalibrationSample {
    CalibrationLaw law = CalibrationLaw::BInfinity;
    std::size_t grid_size = 0;   // bridge grid / sample size per replicate
    std::size_t replicates = 0;  // requested replicate count
    std::uint64_t seed = 0;
    std::size_t skipped = 0;     // degenerate replicates excluded (SnNull only)
    std::string note;            // family/parameter tag for SnNull
    std::vector<double> samples; // sorted ascending

    std::string descriptor() const;
};

/// Squared discrete Brownian bridge on the grid i/n, maximised over interior
/// grid points with the same 1/sqrt(u(1-u)) weight the CUSUM statistics use,
/// so the sample calibrates those statistics directly.
CalibrationSample simulate_b_infinity(std::size_t grid_size, std::size_t replicates,
                                      std::uint64_t seed, unsigned threads = 0);

/// sup over the grid of sqrt((B1^2(t) + B2^2(t)) / (t(1-t))) for two
/// independent discrete bridges.
CalibrationSample simulate_delta_infinity(std::size_t grid_size, std::size_t replicates,
                                          std::uint64_t seed, unsigned threads = 0);

/// Null distribution of the mean-change likelihood-ratio statistic: simulate
/// homogeneous samples of size n from the family with the given (known)
/// concentration and collect the statistic.  Degenerate replicates are
/// dropped and counted in `skipped`.
CalibrationSample simulate_sn_null(std::size_t n, Family family, double mu, double concentration,
                                   std::size_t replicates, std::uint64_t seed,
                                   unsigned threads = 0);

/// Empirical quantile by linear interpolation of the order statistics
/// (h = (m - 1) q convention).
double quantile(const CalibrationSample& sample, double q);

/// Smoothed Monte Carlo p-value: (1 + #{samples >= observed}) / (m + 1).
double p_value(const CalibrationSample& sample, double observed);

/// The rejection threshold that is exactly consistent with p_value: a
/// statistic rejects at level alpha iff it exceeds this value iff its
/// p-value is below alpha.  Returns +inf when alpha <= 1/(m+1).
double mc_cutoff(const CalibrationSample& sample, double alpha);

/// Smallest p-value the sample can resolve, 1/(m+1).
double p_value_resolution(const CalibrationSample& sample);

/// Plain-text cache: one header line (law/grid/replicates/seed/skipped/note)
/// followed by one value per line at full precision.
void save_calibration(const CalibrationSample& sample, const std::filesystem::path& path);
CalibrationSample load_calibration(const std::filesystem::path& path);

/// Canonical cache file name for a parameter combination.
std::string calibration_cache_filename(CalibrationLaw law, std::size_t grid_size,
                                       std::size_t replicates, std::uint64_t seed,
                                       const std::string& note = {});

} // namespace torustat
