#include "torustat/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "torustat/torus_geometry.hpp"

namespace torustat {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_test_length(std::size_t n, const char* what) {
    if (n < min_test_length) {
        throw std::invalid_argument(std::string(what) + ": requires n >= 10");
    }
}

TestReport make_report(Method method, std::size_t n, double statistic, std::size_t index,
                       double alpha, const CalibrationSample& calib) {
    TestReport r;
    r.method = method;
    r.n = n;
    r.statistic = statistic;
    r.changepoint_index = index;
    r.alpha = alpha;
    r.cutoff = mc_cutoff(calib, alpha);
    r.p_value = p_value(calib, statistic);
    r.reject = statistic > r.cutoff;
    r.p_below_resolution = !calib.samples.empty() && statistic > calib.samples.back();
    r.calibration = calib.descriptor();
    r.calibration_replicates = calib.samples.size();
    return r;
}

} // namespace

std::string method_name(Method m) {
    switch (m) {
    case Method::Sacc: return "sacc";
    case Method::Cvmc: return "cvmc";
    case Method::Sagc: return "sagc";
    }
    return "?";
}

CusumProfile scaled_cusum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) {
        throw std::invalid_argument("scaled_cusum: requires n >= 3");
    }
    double sum = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("scaled_cusum: non-finite value");
        sum += v;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    const double variance = ss / static_cast<double>(n - 1);
    if (!(variance > 0.0)) {
        throw degenerate_sample_error("scaled_cusum: sample variance is zero");
    }

    CusumProfile p;
    p.t_values.resize(n);
    p.scaled.resize(n - 1);
    const double dn = static_cast<double>(n);
    double prefix = 0.0;
    double best = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        prefix += values[k - 1];
        const double dev = prefix - static_cast<double>(k) * mean;
        const double t = dev * dev / (dn * variance);
        p.t_values[k - 1] = t;
        if (k < n) {
            const double u = static_cast<double>(k) / dn;
            const double s = t / std::sqrt(u * (1.0 - u));
            p.scaled[k - 1] = s;
            if (s > best) {
                best = s;
                best_k = k;
            }
        }
    }
    p.max_statistic = best;
    p.argmax_index = best_k;
    return p;
}

std::vector<double> sacc_a_values(const AngleSeries& series, double mu) {
    std::vector<double> a;
    a.reserve(series.size());
    for (double th : series) a.push_back(square_angle(mod2pi(th - mu)));
    return a;
}

TestReport sacc_test(const AngleSeries& series, std::optional<double> mu, double alpha,
                     const CalibrationSample& calib) {
    check_test_length(series.size(), "sacc_test");
    if (calib.law != CalibrationLaw::BInfinity) {
        throw std::invalid_argument("sacc_test: calibration sample must be a B-infinity sample");
    }
    const double center = mu ? *mu : circular_mean(series);
    const CusumProfile p = scaled_cusum(sacc_a_values(series, center));
    return make_report(Method::Sacc, series.size(), p.max_statistic, p.argmax_index, alpha, calib);
}

CvmcScan cvmc_scan(const AngleSeries& series) {
    const std::size_t n = series.size();
    if (n < 4) {
        throw std::invalid_argument("cvmc_scan: requires n >= 4");
    }
    const double mu0 = circular_mean(series); // throws undefined_mean_error

    CvmcScan scan;
    scan.bbar0 = curved_variance(series, mu0);
    scan.bbar.assign(n + 1, nan);

    // Prefix resultants give each candidate split's segment means in O(1).
    std::vector<double> pc(n + 1, 0.0), ps(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        pc[i + 1] = pc[i] + std::cos(series[i]);
        ps[i + 1] = ps[i] + std::sin(series[i]);
    }

    double best_ratio = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 2; k <= n - 1; ++k) {
        const double c1 = pc[k], s1 = ps[k];
        const double c2 = pc[n] - pc[k], s2 = ps[n] - ps[k];
        const double r1 = std::hypot(c1, s1) / static_cast<double>(k);
        const double r2 = std::hypot(c2, s2) / static_cast<double>(n - k);
        if (r1 < resultant_floor || r2 < resultant_floor) {
            continue; // split with an undefined segment mean
        }
        const double mu1 = mod2pi(std::atan2(s1, c1));
        const double mu2 = mod2pi(std::atan2(s2, c2));
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += square_angle(mod2pi(series[i] - mu1));
        for (std::size_t i = k; i < n; ++i) sum += square_angle(mod2pi(series[i] - mu2));
        const double bk = sum / static_cast<double>(n);
        scan.bbar[k] = bk;
        const double ratio = scan.bbar0 / bk; // +inf for two pure segments
        if (std::isnan(ratio)) continue;      // 0/0: no variation anywhere
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_k = k;
            scan.mu1 = mu1;
            scan.mu2 = mu2;
        }
    }
    if (best_k == 0) {
        throw degenerate_sample_error("cvmc_scan: no admissible split");
    }
    scan.k_max = best_k;
    return scan;
}

namespace {

// Segment log likelihood up to the additive constant, which cancels in the
// ratio: von Mises contributes kappa * sum cos(theta - mu), wrapped Cauchy
// contributes -sum log(1 + rho^2 - 2 rho cos(theta - mu)).
double segment_loglik(const AngleSeries& series, std::size_t lo, std::size_t hi, double mu,
                      Family family, double concentration) {
    double acc = 0.0;
    if (family == Family::VonMises) {
        for (std::size_t i = lo; i < hi; ++i) acc += std::cos(series[i] - mu);
        return concentration * acc;
    }
    const double r2 = 1.0 + concentration * concentration;
    for (std::size_t i = lo; i < hi; ++i) {
        acc -= std::log(r2 - 2.0 * concentration * std::cos(series[i] - mu));
    }
    return acc;
}

} // namespace

CvmcResult cvmc_statistic(const AngleSeries& series, Family family, double concentration) {
    if (family == Family::KatoJones) {
        throw std::invalid_argument("cvmc_statistic: family must be von Mises or wrapped Cauchy");
    }
    if (!(concentration > 0.0) || (family == Family::WrappedCauchy && concentration >= 1.0)) {
        throw std::invalid_argument("cvmc_statistic: concentration out of range");
    }
    CvmcResult res;
    res.scan = cvmc_scan(series);
    const std::size_t n = series.size();
    const std::size_t k = res.scan.k_max;
    const double mu0 = circular_mean(series);
    const double l0 = segment_loglik(series, 0, n, mu0, family, concentration);
    const double l1 = segment_loglik(series, 0, k, res.scan.mu1, family, concentration);
    const double l2 = segment_loglik(series, k, n, res.scan.mu2, family, concentration);
    res.sn = 2.0 * (l1 + l2 - l0);
    return res;
}

TestReport cvmc_test(const AngleSeries& series, Family family, double concentration, double alpha,
                     const CalibrationSample& calib) {
    check_test_length(series.size(), "cvmc_test");
    if (calib.law != CalibrationLaw::SnNull) {
        throw std::invalid_argument("cvmc_test: calibration sample must be an Sn null sample");
    }
    const CvmcResult res = cvmc_statistic(series, family, concentration);
    return make_report(Method::Cvmc, series.size(), res.sn, res.scan.k_max, alpha, calib);
}

std::vector<double> sagc_d_values(const AngleSeries& series) {
    const double mu = circular_mean(series); // throws undefined_mean_error
    std::vector<double> d;
    d.reserve(series.size());
    for (double th : series) {
        const double centered = square_angle(mod2pi(th - mu));
        const double sign = th < std::numbers::pi ? 1.0 : -1.0;
        const double raw = sign * square_angle(th);
        d.push_back(std::max(centered, raw));
    }
    return d;
}

TestReport sagc_test(const AngleSeries& series, double alpha, const CalibrationSample& calib) {
    check_test_length(series.size(), "sagc_test");
    if (calib.law != CalibrationLaw::BInfinity) {
        throw std::invalid_argument("sagc_test: calibration sample must be a B-infinity sample");
    }
    const CusumProfile p = scaled_cusum(sagc_d_values(series));
    return make_report(Method::Sagc, series.size(), p.max_statistic, p.argmax_index, alpha, calib);
}

} // namespace torustat
