#pragma once

#include "torustat/angles.hpp"

namespace torustat {

/// A point on the flat-torus parameter square, both coordinates in [0, 2*pi).
struct TorusPoint {
    double phi = 0.0;
    double theta = 0.0;

    TorusPoint() = default;
    TorusPoint(double phi_, double theta_) {
        if (!std::isfinite(phi_) || !std::isfinite(theta_)) {
            throw std::invalid_argument("TorusPoint: non-finite coordinate");
        }
        phi = mod2pi(phi_);
        theta = mod2pi(theta_);
    }
};

/// Shape of the torus through the radius ratio r/R in (0, 1].  The product
/// r*R cancels in every exported quantity, so only the ratio is kept.
struct TorusShape {
    double ratio = 1.0;

    TorusShape() = default;
    explicit TorusShape(double ratio_) : ratio(ratio_) {
        if (!std::isfinite(ratio) || ratio <= 0.0 || ratio > 1.0) {
            throw std::invalid_argument("TorusShape: ratio must lie in (0, 1]");
        }
    }
};

/// The four areas that partition the torus surface between two diagonally
/// opposite points, normalised by r*R (i.e. computed with r*R = 1).
/// They always sum to 4*pi^2.
struct CornerAreas {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;

    double min() const;
    double sum() const { return a1 + a2 + a3 + a4; }
};

/// Areas of the four rectangle images cut out by p1 and p2 on the curved
/// torus.  Coordinates are sorted per axis first, so the result does not
/// depend on the labelling of the two points.
CornerAreas corner_areas(const TorusPoint& p1, const TorusPoint& p2, const TorusShape& shape);

/// min(corner areas) / (4*pi^2); always in [0, 1/4].
double proportionate_area(const TorusPoint& p1, const TorusPoint& p2, const TorusShape& shape);

/// The scalar "square" of an angle: the proportionate area between (0,0) and
/// (theta, theta) at radius ratio 1.  Monotone on [0, pi], symmetric about pi,
/// with range [0, 1/4].
double square_angle(double theta);

/// Numerically integrates the normalised torus area element (1 + c*cos(theta))
/// over [phi_lo, phi_hi] x [theta_lo, theta_hi] with adaptive Simpson
/// quadrature.  Serves as the brute-force oracle for corner_areas in tests.
/// Throws std::runtime_error if the requested tolerance cannot be met.
double quadrature_area(double phi_lo, double phi_hi, double theta_lo, double theta_hi,
                       const TorusShape& shape, double abs_tol = 1e-10);

} // namespace torustat
