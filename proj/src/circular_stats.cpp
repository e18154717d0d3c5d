#include "torustat/circular_stats.hpp"

#include <cmath>

#include "torustat/distributions.hpp"
#include "torustat/torus_geometry.hpp"

namespace torustat {

namespace {

struct Resultant {
    double cos_sum = 0.0;
    double sin_sum = 0.0;
    double rbar(std::size_t n) const { return std::hypot(cos_sum, sin_sum) / static_cast<double>(n); }
};

Resultant resultant_of(const AngleSeries& series) {
    Resultant r;
    for (double th : series) {
        r.cos_sum += std::cos(th);
        r.sin_sum += std::sin(th);
    }
    return r;
}

} // namespace

double circular_mean(const AngleSeries& series) {
    const Resultant r = resultant_of(series);
    if (r.rbar(series.size()) < resultant_floor) {
        throw undefined_mean_error("circular_mean: resultant length below noise floor");
    }
    return mod2pi(std::atan2(r.sin_sum, r.cos_sum));
}

double mean_resultant_length(const AngleSeries& series) {
    return resultant_of(series).rbar(series.size());
}

AngleSeries center_mod2pi(const AngleSeries& series, double mu) {
    std::vector<double> out;
    out.reserve(series.size());
    for (double th : series) out.push_back(mod2pi(th - mu));
    return AngleSeries(std::move(out));
}

double curved_variance(const AngleSeries& series, std::optional<double> mu) {
    const double center = mu ? *mu : circular_mean(series);
    double sum = 0.0;
    for (double th : series) sum += square_angle(mod2pi(th - center));
    return sum / static_cast<double>(series.size());
}

double vm_kappa_from_resultant(double rbar) {
    if (!std::isfinite(rbar) || rbar < 0.0) {
        throw std::invalid_argument("vm_kappa_from_resultant: rbar must lie in [0, 1)");
    }
    if (rbar >= 1.0) {
        throw std::invalid_argument("vm_kappa_from_resultant: rbar >= 1 implies unbounded kappa");
    }
    if (rbar == 0.0) return 0.0;

    double lo = 0.0;
    double hi = 1.0;
    while (vm_mean_resultant(hi) < rbar) {
        hi *= 2.0;
        if (hi > 1e12) break; // rbar extremely close to 1
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double res = vm_mean_resultant(mid) - rbar;
        if (std::abs(res) < 1e-10) return mid;
        (res < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CircularSummary summarize(const AngleSeries& series) {
    CircularSummary s;
    s.resultant_length = mean_resultant_length(series);
    if (s.resultant_length >= resultant_floor) {
        s.mean_direction = circular_mean(series);
        s.curved_variance = curved_variance(series, s.mean_direction);
    }
    return s;
}

std::optional<double> concentration_value(const CircularSummary& s, ConcentrationMeasure measure) {
    if (measure == ConcentrationMeasure::MeanResultantLength) {
        return s.resultant_length;
    }
    if (s.resultant_length >= 1.0 - 1e-12) {
        return std::nullopt; // kappa unbounded for a (near) point mass
    }
    return vm_kappa_from_resultant(s.resultant_length);
}

} // namespace torustat
