#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace torustat {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Raised when the circular mean of a sample is numerically undefined
/// (mean resultant length below the noise floor).
class undefined_mean_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a statistic cannot be formed because the sample carries no
/// variation (e.g. all observations coincide).
class degenerate_sample_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised on malformed or unreadable input data.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduce an angle to the canonical range [0, 2*pi).
inline double mod2pi(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0; // rounding at the wrap point
    return r;
}

inline double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Temporally ordered angular observations, stored in radians in [0, 2*pi).
/// The order of the values is meaningful and preserved.
class AngleSeries {
public:
    explicit AngleSeries(std::vector<double> radians) : values_(std::move(radians)) {
        if (values_.empty()) {
            throw std::invalid_argument("AngleSeries: series must not be empty");
        }
        for (double& v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("AngleSeries: non-finite angle");
            }
            v = mod2pi(v);
        }
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    /// Sub-series over the 1-based inclusive index range [lo, hi].
    AngleSeries slice(std::size_t lo, std::size_t hi) const {
        if (lo < 1 || hi > values_.size() || lo > hi) {
            throw std::invalid_argument("AngleSeries::slice: bad range");
        }
        return AngleSeries(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(lo - 1),
                                               values_.begin() + static_cast<std::ptrdiff_t>(hi)));
    }

private:
    std::vector<double> values_;
};

} // namespace torustat
