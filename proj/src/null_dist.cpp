#include "torustat/null_dist.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "torustat/changepoint.hpp"
#include "torustat/parallel.hpp"

namespace torustat {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_sim_args(std::size_t grid_size, std::size_t replicates, const char* what) {
    if (grid_size < 10) {
        throw std::invalid_argument(std::string(what) + ": grid size must be >= 10");
    }
    if (replicates < 100) {
        throw std::invalid_argument(std::string(what) + ": needs >= 100 replicates");
    }
}

// Discrete standard Brownian bridge on i/n: scaled cumulative Gaussian sums
// with the endpoint subtracted.
void fill_bridge(RngStream& rng, std::size_t n, std::vector<double>& bridge) {
    bridge.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += rng.normal();
        bridge[i] = sum;
    }
    const double total = sum;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i + 1) / dn;
        bridge[i] = (bridge[i] - u * total) * inv_sqrt_n;
    }
}

} // namespace

std::string law_name(CalibrationLaw law) {
    switch (law) {
    case CalibrationLaw::BInfinity: return "binf";
    case CalibrationLaw::DeltaInfinity: return "dinf";
    case CalibrationLaw::SnNull: return "sn";
    }
    return "?";
}

std::string CalibrationSample::descriptor() const {
    std::ostringstream os;
    os << law_name(law) << " grid=" << grid_size << " replicates=" << replicates
       << " seed=" << seed;
    if (skipped > 0) os << " skipped=" << skipped;
    if (!note.empty()) os << " " << note;
    return os.str();
}

CalibrationSample simulate_b_infinity(std::size_t grid_size, std::size_t replicates,
                                      std::uint64_t seed, unsigned threads) {
    check_sim_args(grid_size, replicates, "simulate_b_infinity");
    std::vector<double> out(replicates);
    for_each_replicate(replicates, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        std::vector<double> bridge;
        fill_bridge(rng, grid_size, bridge);
        const double dn = static_cast<double>(grid_size);
        double best = 0.0;
        for (std::size_t i = 1; i < grid_size; ++i) {
            const double u = static_cast<double>(i) / dn;
            const double w = bridge[i - 1] * bridge[i - 1] / std::sqrt(u * (1.0 - u));
            best = std::max(best, w);
        }
        out[r] = best;
    });
    std::sort(out.begin(), out.end());
    return CalibrationSample{CalibrationLaw::BInfinity, grid_size, replicates, seed, 0, "",
                             std::move(out)};
}

CalibrationSample simulate_delta_infinity(std::size_t grid_size, std::size_t replicates,
                                          std::uint64_t seed, unsigned threads) {
    check_sim_args(grid_size, replicates, "simulate_delta_infinity");
    std::vector<double> out(replicates);
    for_each_replicate(replicates, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        std::vector<double> b1, b2;
        fill_bridge(rng, grid_size, b1);
        fill_bridge(rng, grid_size, b2);
        const double dn = static_cast<double>(grid_size);
        double best = 0.0;
        for (std::size_t i = 1; i < grid_size; ++i) {
            const double t = static_cast<double>(i) / dn;
            const double w = (b1[i - 1] * b1[i - 1] + b2[i - 1] * b2[i - 1]) / (t * (1.0 - t));
            best = std::max(best, w);
        }
        out[r] = std::sqrt(best);
    });
    std::sort(out.begin(), out.end());
    return CalibrationSample{CalibrationLaw::DeltaInfinity, grid_size, replicates, seed, 0, "",
                             std::move(out)};
}

CalibrationSample simulate_sn_null(std::size_t n, Family family, double mu, double concentration,
                                   std::size_t replicates, std::uint64_t seed, unsigned threads) {
    check_sim_args(n, replicates, "simulate_sn_null");
    const DistributionSpec spec = family == Family::VonMises
                                      ? DistributionSpec::von_mises(mu, concentration)
                                      : DistributionSpec::wrapped_cauchy(mu, concentration);
    std::vector<double> out(replicates, std::numeric_limits<double>::quiet_NaN());
    for_each_replicate(replicates, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        const AngleSeries data = sample(spec, n, rng);
        try {
            out[r] = cvmc_statistic(data, family, concentration).sn;
        } catch (const degenerate_sample_error&) {
        } catch (const undefined_mean_error&) {
        }
    });
    std::vector<double> kept;
    kept.reserve(replicates);
    for (double v : out) {
        if (!std::isnan(v)) kept.push_back(v);
    }
    std::sort(kept.begin(), kept.end());
    return CalibrationSample{CalibrationLaw::SnNull, n, replicates, seed,
                             replicates - kept.size(), spec.describe(), std::move(kept)};
}

double quantile(const CalibrationSample& sample, double q) {
    const auto& s = sample.samples;
    if (s.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("quantile: q must lie in (0, 1)");
    const double h = q * static_cast<double>(s.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= s.size()) return s.back();
    const double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[lo + 1] - s[lo]);
}

double p_value(const CalibrationSample& sample, double observed) {
    const auto& s = sample.samples;
    if (s.empty()) throw std::invalid_argument("p_value: empty sample");
    const auto it = std::lower_bound(s.begin(), s.end(), observed);
    const auto ge = static_cast<double>(s.end() - it);
    return (1.0 + ge) / (static_cast<double>(s.size()) + 1.0);
}

double mc_cutoff(const CalibrationSample& sample, double alpha) {
    const auto& s = sample.samples;
    if (s.empty()) throw std::invalid_argument("mc_cutoff: empty sample");
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("mc_cutoff: alpha must lie in (0, 1)");
    }
    const std::size_t m = s.size();
    // Smallest j such that a statistic just above s[j] has p-value < alpha;
    // the comparison uses the same floating arithmetic as p_value itself.
    auto p_above = [&](std::size_t j) {
        return (static_cast<double>(m - j)) / (static_cast<double>(m) + 1.0);
    };
    std::size_t j = 0;
    {
        // start near the analytic location, then adjust
        const double guess = static_cast<double>(m) - alpha * (static_cast<double>(m) + 1.0);
        j = guess <= 0.0 ? 0 : std::min(m - 1, static_cast<std::size_t>(guess));
        while (j > 0 && p_above(j - 1) < alpha) --j;
        while (j < m && p_above(j) >= alpha) ++j;
    }
    if (j >= m) return inf; // alpha below the sample's resolution
    return s[j];
}

double p_value_resolution(const CalibrationSample& sample) {
    return 1.0 / (static_cast<double>(sample.samples.size()) + 1.0);
}

std::string calibration_cache_filename(CalibrationLaw law, std::size_t grid_size,
                                       std::size_t replicates, std::uint64_t seed,
                                       const std::string& note) {
    std::ostringstream os;
    os << law_name(law) << "_g" << grid_size << "_r" << replicates << "_s" << seed;
    if (!note.empty()) {
        std::string tag = note;
        for (char& c : tag) {
            if (c == '(' || c == ')' || c == ',' || c == '=' || c == ' ') c = '-';
        }
        os << "_" << tag;
    }
    os << ".txt";
    return os.str();
}

void save_calibration(const CalibrationSample& sample, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw data_error("save_calibration: cannot open " + path.string());
    }
    out << "torustat-calibration v1 law=" << law_name(sample.law) << " grid=" << sample.grid_size
        << " replicates=" << sample.replicates << " seed=" << sample.seed
        << " skipped=" << sample.skipped << " note=" << sample.note << "\n";
    char buf[64];
    for (double v : sample.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) {
        throw data_error("save_calibration: write failed for " + path.string());
    }
}

CalibrationSample load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw data_error("load_calibration: cannot open " + path.string());
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw data_error("load_calibration: empty file " + path.string());
    }
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "torustat-calibration" || version != "v1") {
        throw data_error("load_calibration: unrecognised header in " + path.string());
    }
    CalibrationSample sample;
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "law") {
            if (value == "binf") sample.law = CalibrationLaw::BInfinity;
            else if (value == "dinf") sample.law = CalibrationLaw::DeltaInfinity;
            else if (value == "sn") sample.law = CalibrationLaw::SnNull;
            else throw data_error("load_calibration: unknown law '" + value + "'");
        } else if (key == "grid") {
            sample.grid_size = std::stoull(value);
        } else if (key == "replicates") {
            sample.replicates = std::stoull(value);
        } else if (key == "seed") {
            sample.seed = std::stoull(value);
        } else if (key == "skipped") {
            sample.skipped = std::stoull(value);
        } else if (key == "note") {
            std::string rest;
            std::getline(hs, rest);
            sample.note = value + rest;
        }
    }
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            sample.samples.push_back(v);
        } catch (const std::exception&) {
            throw data_error("load_calibration: bad value at line " + std::to_string(lineno) +
                             " of " + path.string());
        }
    }
    if (sample.samples.empty()) {
        throw data_error("load_calibration: no samples in " + path.string());
    }
    if (!std::is_sorted(sample.samples.begin(), sample.samples.end())) {
        std::sort(sample.samples.begin(), sample.samples.end());
    }
    return sample;
}

} // namespace torustat
