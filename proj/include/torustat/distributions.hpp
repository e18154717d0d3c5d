#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "torustat/angles.hpp"
#include "torustat/rng.hpp"

namespace torustat {

/// Modified Bessel function of the first kind, order zero.  Power series for
/// small arguments, asymptotic expansion for large ones; relative error below
/// 1e-12.  Overflows to +inf only past x ~ 709 -- use the scaled variant for
/// ratios in that regime.
double bessel_i0(double x);

/// exp(-x) * I0(x); stays finite for all x >= 0.
double bessel_i0_scaled(double x);

/// exp(-x) * I1(x).
double bessel_i1_scaled(double x);

/// Mean resultant length of a von Mises distribution: I1(kappa) / I0(kappa).
double vm_mean_resultant(double kappa);

enum class Family { VonMises, WrappedCauchy, KatoJones };

std::string family_name(Family f);

struct VonMises {
    double mu;    // mean direction, radians
    double kappa; // concentration, > 0
};

struct WrappedCauchy {
    double mu;  // mean direction, radians
    double rho; // concentration, in [0, 1)
};

struct KatoJones {
    double mu;    // location, radians
    double nu;    // second location parameter, radians
    double rho;   // concentration, in [0, 1)
    double kappa; // concentration, > 0

    // Derived quantities used by the density.
    double gamma() const { return mu + nu; }
    double xi() const;
    double eta() const;
};

/// Tagged parameter set for the three circular families.  Parameter ranges
/// are validated at construction.
class DistributionSpec {
public:
    static DistributionSpec von_mises(double mu, double kappa);
    static DistributionSpec wrapped_cauchy(double mu, double rho);
    static DistributionSpec kato_jones(double mu, double nu, double rho, double kappa);

    Family family() const;
    std::string describe() const;

    /// Mean direction / primary location parameter.
    double location() const;

    const VonMises& as_von_mises() const { return std::get<VonMises>(v_); }
    const WrappedCauchy& as_wrapped_cauchy() const { return std::get<WrappedCauchy>(v_); }
    const KatoJones& as_kato_jones() const { return std::get<KatoJones>(v_); }

private:
    explicit DistributionSpec(std::variant<VonMises, WrappedCauchy, KatoJones> v) : v_(std::move(v)) {}
    std::variant<VonMises, WrappedCauchy, KatoJones> v_;
};

/// Density at theta.
double pdf(const DistributionSpec& spec, double theta);

/// n independent draws; deterministic given the stream.
AngleSeries sample(const DistributionSpec& spec, std::size_t n, RngStream& rng);

/// Single draw.
double sample_one(const DistributionSpec& spec, RngStream& rng);

} // namespace torustat
