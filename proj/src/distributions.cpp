#include "torustat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace torustat {

namespace {

constexpr double pi = std::numbers::pi;

void require_nonnegative_finite(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + ": argument must be finite and >= 0");
    }
}

// All power-series terms are positive, so the sum is cancellation-free.
double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

double i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x;
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// Large-argument expansion of exp(-x) * I_nu(x), truncated at the smallest
// term.  Accurate to ~1e-15 for x >= 25.
double i_scaled_asymptotic(double x, double four_nu_sq) {
    double term = 1.0;
    double sum = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(four_nu_sq - odd * odd) / (8.0 * k * x);
        if (std::abs(term) >= prev) break; // series started diverging
        prev = std::abs(term);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-18) break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

constexpr double series_cutoff = 25.0;

} // namespace

double bessel_i0(double x) {
    require_nonnegative_finite(x, "bessel_i0");
    if (x < series_cutoff) return i0_series(x);
    return i_scaled_asymptotic(x, 0.0) * std::exp(x);
}

double bessel_i0_scaled(double x) {
    require_nonnegative_finite(x, "bessel_i0_scaled");
    if (x < series_cutoff) return i0_series(x) * std::exp(-x);
    return i_scaled_asymptotic(x, 0.0);
}

double bessel_i1_scaled(double x) {
    require_nonnegative_finite(x, "bessel_i1_scaled");
    if (x < series_cutoff) return i1_series(x) * std::exp(-x);
    return i_scaled_asymptotic(x, 4.0);
}

double vm_mean_resultant(double kappa) {
    require_nonnegative_finite(kappa, "vm_mean_resultant");
    if (kappa == 0.0) return 0.0;
    return bessel_i1_scaled(kappa) / bessel_i0_scaled(kappa);
}

std::string family_name(Family f) {
    switch (f) {
    case Family::VonMises: return "vonmises";
    case Family::WrappedCauchy: return "wrappedcauchy";
    case Family::KatoJones: return "katojones";
    }
    return "?";
}

double KatoJones::xi() const {
    const double r2 = rho * rho;
    return std::sqrt(r2 * r2 + 2.0 * r2 * std::cos(2.0 * nu) + 1.0);
}

double KatoJones::eta() const {
    const double r2 = rho * rho;
    return mu + std::atan2(r2 * std::sin(2.0 * nu), r2 * std::cos(2.0 * nu) + 1.0);
}

DistributionSpec DistributionSpec::von_mises(double mu, double kappa) {
    if (!std::isfinite(mu) || !std::isfinite(kappa) || kappa <= 0.0) {
        throw std::invalid_argument("von_mises: requires finite mu and kappa > 0");
    }
    return DistributionSpec(VonMises{mod2pi(mu), kappa});
}

DistributionSpec DistributionSpec::wrapped_cauchy(double mu, double rho) {
    if (!std::isfinite(mu) || !(rho >= 0.0) || rho >= 1.0) {
        throw std::invalid_argument("wrapped_cauchy: requires finite mu and rho in [0, 1)");
    }
    return DistributionSpec(WrappedCauchy{mod2pi(mu), rho});
}

DistributionSpec DistributionSpec::kato_jones(double mu, double nu, double rho, double kappa) {
    if (!std::isfinite(mu) || !std::isfinite(nu) || !(rho >= 0.0) || rho >= 1.0 ||
        !std::isfinite(kappa) || kappa <= 0.0) {
        throw std::invalid_argument("kato_jones: requires rho in [0, 1) and kappa > 0");
    }
    return DistributionSpec(KatoJones{mod2pi(mu), mod2pi(nu), rho, kappa});
}

Family DistributionSpec::family() const {
    if (std::holds_alternative<VonMises>(v_)) return Family::VonMises;
    if (std::holds_alternative<WrappedCauchy>(v_)) return Family::WrappedCauchy;
    return Family::KatoJones;
}

double DistributionSpec::location() const {
    return std::visit([](const auto& d) { return d.mu; }, v_);
}

std::string DistributionSpec::describe() const {
    std::ostringstream os;
    os.precision(10);
    if (family() == Family::VonMises) {
        const auto& d = as_von_mises();
        os << "vonmises(mu=" << d.mu << ",kappa=" << d.kappa << ")";
    } else if (family() == Family::WrappedCauchy) {
        const auto& d = as_wrapped_cauchy();
        os << "wrappedcauchy(mu=" << d.mu << ",rho=" << d.rho << ")";
    } else {
        const auto& d = as_kato_jones();
        os << "katojones(mu=" << d.mu << ",nu=" << d.nu << ",rho=" << d.rho
           << ",kappa=" << d.kappa << ")";
    }
    return os.str();
}

namespace {

double von_mises_pdf(const VonMises& d, double theta) {
    // exp(kappa*(cos(t - mu) - 1)) / (2*pi*exp(-kappa)*I0(kappa)) never overflows.
    return std::exp(d.kappa * (std::cos(theta - d.mu) - 1.0)) /
           (two_pi * bessel_i0_scaled(d.kappa));
}

double wrapped_cauchy_pdf(const WrappedCauchy& d, double theta) {
    const double denom = 1.0 + d.rho * d.rho - 2.0 * d.rho * std::cos(theta - d.mu);
    return (1.0 - d.rho * d.rho) / (two_pi * denom);
}

// Exponent of the Kato-Jones kernel, shifted down by kappa so exp() stays tame.
double kato_jones_shifted_exponent(const KatoJones& d, double theta) {
    const double denom = 1.0 + d.rho * d.rho - 2.0 * d.rho * std::cos(theta - d.gamma());
    return d.kappa * (d.xi() * std::cos(theta - d.eta()) - 2.0 * d.rho * std::cos(d.nu)) / denom -
           d.kappa;
}

double kato_jones_pdf(const KatoJones& d, double theta) {
    const double denom = 1.0 + d.rho * d.rho - 2.0 * d.rho * std::cos(theta - d.gamma());
    return (1.0 - d.rho * d.rho) * std::exp(kato_jones_shifted_exponent(d, theta)) /
           (two_pi * bessel_i0_scaled(d.kappa) * denom);
}

// Best-Fisher rejection sampler for the von Mises distribution.
double von_mises_draw(const VonMises& d, RngStream& rng) {
    if (d.kappa < 1e-10) {
        return mod2pi(two_pi * rng.uniform()); // numerically uniform
    }
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * d.kappa * d.kappa);
    const double rho0 = (tau - std::sqrt(2.0 * tau)) / (2.0 * d.kappa);
    const double r = (1.0 + rho0 * rho0) / (2.0 * rho0);
    double f = 0.0;
    for (;;) {
        const double z = std::cos(pi * rng.uniform());
        f = (1.0 + r * z) / (r + z);
        const double c = d.kappa * (r - f);
        const double u = rng.uniform();
        if (c * (2.0 - c) - u > 0.0) break;
        if (std::log(c / u) + 1.0 - c >= 0.0) break;
    }
    f = std::clamp(f, -1.0, 1.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return mod2pi(d.mu + sign * std::acos(f));
}

// Exact inverse-CDF draw for the wrapped Cauchy distribution.
double wrapped_cauchy_draw(const WrappedCauchy& d, RngStream& rng) {
    const double u = rng.uniform();
    const double t = ((1.0 - d.rho) / (1.0 + d.rho)) * std::tan(pi * (u - 0.5));
    return mod2pi(d.mu + 2.0 * std::atan(t));
}

// Rejection sampler with a wrapped Cauchy(gamma, rho) envelope.  The envelope
// cancels the Kato-Jones denominator, so the acceptance ratio reduces to the
// exponential kernel alone.
class KatoJonesSampler {
public:
    explicit KatoJonesSampler(const KatoJones& d)
        : d_(d), envelope_{mod2pi(d.gamma()), d.rho} {
        double best = 0.0;
        constexpr int grid = 4096;
        for (int i = 0; i < grid; ++i) {
            const double th = two_pi * (static_cast<double>(i) + 0.5) / grid;
            best = std::max(best, std::exp(kato_jones_shifted_exponent(d_, th)));
        }
        bound_ = 1.05 * best;
    }

    double draw(RngStream& rng) const {
        for (;;) {
            const double th = wrapped_cauchy_draw(envelope_, rng);
            const double u = rng.uniform();
            if (u * bound_ <= std::exp(kato_jones_shifted_exponent(d_, th))) {
                return th;
            }
        }
    }

private:
    KatoJones d_;
    WrappedCauchy envelope_;
    double bound_ = 1.0;
};

} // namespace

double pdf(const DistributionSpec& spec, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("pdf: non-finite angle");
    }
    switch (spec.family()) {
    case Family::VonMises: return von_mises_pdf(spec.as_von_mises(), theta);
    case Family::WrappedCauchy: return wrapped_cauchy_pdf(spec.as_wrapped_cauchy(), theta);
    case Family::KatoJones: return kato_jones_pdf(spec.as_kato_jones(), theta);
    }
    return 0.0;
}

double sample_one(const DistributionSpec& spec, RngStream& rng) {
    switch (spec.family()) {
    case Family::VonMises: return von_mises_draw(spec.as_von_mises(), rng);
    case Family::WrappedCauchy: return wrapped_cauchy_draw(spec.as_wrapped_cauchy(), rng);
    case Family::KatoJones: return KatoJonesSampler(spec.as_kato_jones()).draw(rng);
    }
    return 0.0;
}

AngleSeries sample(const DistributionSpec& spec, std::size_t n, RngStream& rng) {
    if (n == 0) {
        throw std::invalid_argument("sample: n must be >= 1");
    }
    std::vector<double> out;
    out.reserve(n);
    if (spec.family() == Family::KatoJones) {
        KatoJonesSampler sampler(spec.as_kato_jones());
        for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
    } else {
        for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(spec, rng));
    }
    return AngleSeries(std::move(out));
}

} // namespace torustat
