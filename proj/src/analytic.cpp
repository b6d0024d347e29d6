#include "speclab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;

// Collects raw (eigenvalue, multiplicity) samples into distinct lines,
// merging values that agree to relative 1e-9.
std::vector<SpectrumLine> collect_lines(std::map<double, int>& samples, int count) {
    std::vector<SpectrumLine> lines;
    for (const auto& [value, mult] : samples) {
        if (!lines.empty() &&
            value - lines.back().lambda_bar <= 1e-9 * std::max(1.0, std::abs(value))) {
            lines.back().multiplicity += mult;
            continue;
        }
        lines.push_back({value, mult});
        if (static_cast<int>(lines.size()) > count + 1) break; // keep a guard line
    }
    lines.resize(std::min<size_t>(lines.size(), static_cast<size_t>(count)));
    return lines;
}

std::vector<SpectrumLine> torus_spectrum(double a, double b, int count) {
    const double sb = std::sqrt(b);
    return lattice_spectrum({1.0 / sb, 0.0}, {a / sb, sb}, count);
}

std::vector<SpectrumLine> klein_spectrum(double b, int count) {
    // Invariant Fourier modes of the covering torus: values pi^2 b m^2 +
    // 4 pi^2 n^2 / b for n >= 1 (multiplicity 2 when m >= 1, else 1), plus
    // 4 pi^2 b m^2 for the y-independent modes (multiplicity 2 when m >= 1).
    for (int radius = 4 * count + 8;; radius *= 2) {
        std::map<double, int> samples;
        samples[0.0] = 1;
        for (int m = 1; m <= radius; ++m) samples[4.0 * kPi * kPi * b * m * m] += 2;
        for (int m = 0; m <= radius; ++m)
            for (int n = 1; n <= radius; ++n)
                samples[kPi * kPi * b * m * m + 4.0 * kPi * kPi * n * n / b] += (m >= 1 ? 2 : 1);
        auto lines = collect_lines(samples, count);
        if (static_cast<int>(lines.size()) < count) continue;
        // accept once the largest kept value is safely inside the enumerated box
        double cutoff = std::min(4.0 * kPi * kPi * b * radius * radius,
                                 4.0 * kPi * kPi * radius * radius / b);
        if (lines.back().lambda_bar < 0.5 * cutoff) return lines;
    }
}

std::vector<SpectrumLine> sphere_spectrum(int count, bool rp2) {
    std::vector<SpectrumLine> lines;
    const double area = rp2 ? 2.0 * kPi : 4.0 * kPi;
    for (int l = 0; static_cast<int>(lines.size()) < count; ++l) {
        if (rp2 && l % 2 != 0) continue; // only even harmonics descend
        lines.push_back({area * l * (l + 1.0), 2 * l + 1});
    }
    return lines;
}

} // namespace

std::vector<SpectrumLine> lattice_spectrum(const std::array<double, 2>& v1,
                                           const std::array<double, 2>& v2, int count) {
    const double det = v1[0] * v2[1] - v1[1] * v2[0];
    if (std::abs(det) < 1e-300) throw InvalidClassParam("degenerate lattice basis");
    // dual basis: columns of B^{-T}
    const std::array<double, 2> d1{v2[1] / det, -v2[0] / det};
    const std::array<double, 2> d2{-v1[1] / det, v1[0] / det};
    // Gram lower bound to size the enumeration box
    const double g11 = d1[0] * d1[0] + d1[1] * d1[1];
    const double g22 = d2[0] * d2[0] + d2[1] * d2[1];
    const double g12 = d1[0] * d2[0] + d1[1] * d2[1];
    const double tr = g11 + g22;
    const double dete = g11 * g22 - g12 * g12;
    const double lam_min = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * dete, 0.0)));

    for (double r2 = 16.0 * std::max(g11, g22) * (count + 2);; r2 *= 4.0) {
        const int box = static_cast<int>(std::ceil(std::sqrt(r2 / std::max(lam_min, 1e-300)))) + 1;
        std::map<double, int> samples;
        for (int p = -box; p <= box; ++p)
            for (int q = -box; q <= box; ++q) {
                const double mx = p * d1[0] + q * d2[0];
                const double my = p * d1[1] + q * d2[1];
                const double n2 = mx * mx + my * my;
                if (n2 <= r2) samples[4.0 * kPi * kPi * n2] += 1;
            }
        auto lines = collect_lines(samples, count);
        if (static_cast<int>(lines.size()) < count) continue;
        if (lines.back().lambda_bar < 0.5 * (4.0 * kPi * kPi * r2)) return lines;
    }
}

std::vector<SpectrumLine> exact_spectrum(const ConformalClassParam& param, int count) {
    if (count < 1 || count > 10000) throw InvalidClassParam("count must be in [1, 1e4]");
    switch (param.kind) {
        case SurfaceClass::Torus: return torus_spectrum(param.a, param.b, count);
        case SurfaceClass::Klein: return klein_spectrum(param.b, count);
        case SurfaceClass::Sphere: return sphere_spectrum(count, false);
        case SurfaceClass::RP2: return sphere_spectrum(count, true);
    }
    throw InvalidClassParam("unknown class");
}

std::vector<SpectrumLine> exact_spectrum(const ClassTag& tag, int count) {
    if (tag.subdomain) throw UnsupportedClass("no closed-form spectrum for subdomains");
    return exact_spectrum(tag.param, count);
}

double collar_width(double length, int sidedness) {
    if (!(length > 0.0)) throw NonpositiveLength("geodesic length must be positive");
    if (sidedness != 1 && sidedness != 2) throw InvalidClassParam("sidedness must be 1 or 2");
    const double al = sidedness * length;
    return kPi / al * (kPi - 2.0 * std::atan(std::sinh(0.5 * al)));
}

double collar_profile_pole(double length, int sidedness) {
    if (!(length > 0.0)) throw NonpositiveLength("geodesic length must be positive");
    return sidedness == 2 ? kPi * kPi / length : kPi * kPi / (2.0 * length);
}

double collar_profile(double t, double length, int sidedness) {
    const double w = collar_width(length, sidedness);
    if (!(std::abs(t) < w))
        throw OutOfCollar("t = " + std::to_string(t) + " outside collar of width " + std::to_string(w));
    if (!(std::abs(t) < collar_profile_pole(length, sidedness)))
        throw OutOfCollar("t = " + std::to_string(t) + " beyond the chart singularity");
    if (sidedness == 2) return length / (2.0 * kPi * std::cos(length * t / (2.0 * kPi)));
    return length / (kPi * std::cos(length * t / kPi));
}

double collar_area(double length, int sidedness) {
    const double w = collar_width(length, sidedness);
    const double pole = collar_profile_pole(length, sidedness);
    // Short 1-sided geodesics have the chart singularity inside the nominal
    // width, so the chart integral diverges there.
    if (w >= pole) return std::numeric_limits<double>::infinity();
    if (sidedness == 2) {
        // 2*pi * int (l/(2*pi) sec(l t/(2*pi)))^2 dt over (-w, w)
        return 2.0 * length * std::tan(length * w / (2.0 * kPi));
    }
    // Moebius band: half of the doubled chart
    return 2.0 * length * std::tan(length * w / kPi);
}

CollarGeometry make_collar(double length, int sidedness) {
    return CollarGeometry{length, sidedness, collar_width(length, sidedness)};
}

std::array<double, 3> collar_to_sphere(double t, double theta, double d) {
    const double s = t - d;
    // sech/tanh formulation never overflows
    const double as = std::abs(s);
    const double e = std::exp(-as);
    const double sech = 2.0 * e / (1.0 + e * e);
    return {sech * std::cos(theta), sech * std::sin(theta), std::tanh(s)};
}

} // namespace speclab
