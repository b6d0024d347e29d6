#pragma once

#include <array>
#include <vector>

#include "speclab/mesh.hpp"
#include "speclab/moduli.hpp"

namespace speclab {

struct SpectrumLine {
    double lambda_bar = 0.0; // normalized eigenvalue, lambda * area
    int multiplicity = 0;
};

// First `count` distinct normalized eigenvalues of the canonical metric in the
// class, with multiplicities. Flat classes enumerate the dual lattice (Klein
// classes the G_b-invariant Fourier modes of the covering torus); round
// classes use the spherical-harmonic values l(l+1). Throws UnsupportedClass
// for subdomain tags, via the ClassTag overload.
std::vector<SpectrumLine> exact_spectrum(const ConformalClassParam& param, int count);
std::vector<SpectrumLine> exact_spectrum(const ClassTag& tag, int count);

// Width of the maximal embedded collar around a closed geodesic of the given
// length: pi/(alpha*l) * (pi - 2*atan(sinh(alpha*l/2))), alpha in {1,2}.
double collar_width(double length, int sidedness);

// Conformal factor of the collar chart metric at transverse coordinate t:
// cylinder profile l/(2*pi*cos(l*t/(2*pi))) for 2-sided geodesics, Moebius
// profile l/(pi*cos(l*t/pi)) for 1-sided ones. Throws OutOfCollar when |t|
// reaches the collar width or the chart singularity.
double collar_profile(double t, double length, int sidedness);

// Largest |t| at which the profile stays finite (where the cosine vanishes).
double collar_profile_pole(double length, int sidedness);

// Chart area of the collar (profile^2 integrated over the chart, Moebius
// quotient halved), in closed form. Finite whenever the chart domain stays
// inside the profile pole.
double collar_area(double length, int sidedness);

struct CollarGeometry {
    double length = 0.0;
    int sidedness = 2;
    double width = 0.0;

    double profile(double t) const { return collar_profile(t, length, sidedness); }
};

CollarGeometry make_collar(double length, int sidedness);

// The conformal map from collar coordinates to the unit sphere with splitting
// offset d: (sech(t-d)cos(theta), sech(t-d)sin(theta), tanh(t-d)). Exactly
// unit norm and overflow-safe for any t-d.
std::array<double, 3> collar_to_sphere(double t, double theta, double d);

// Test oracle: normalized spectrum of the unit-covolume lattice spanned by
// the two given basis vectors (not necessarily reduced).
std::vector<SpectrumLine> lattice_spectrum(const std::array<double, 2>& v1,
                                           const std::array<double, 2>& v2, int count);

} // namespace speclab
