#pragma once

// Independent reference computations used by the tests: dense quadrature,
// Gauss-Legendre rules, Bessel moments of the von Mises distribution, and a
// complex rotation-matrix construction of the degree-1 Wigner functions.
// Everything here deliberately avoids the library's transform pipeline.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hef/special_functions.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Modified Bessel I_nu(kappa) by dense midpoint quadrature of
// (1/pi) int_0^pi exp(kappa cos t) cos(nu t) dt.
inline double bessel_i(int nu, double kappa, long n = 1000000) {
    double s = 0.0;
    for (long k = 0; k < n; ++k) {
        const double t = kPi * (k + 0.5) / n;
        s += std::exp(kappa * std::cos(t)) * std::cos(nu * t);
    }
    return s / n;
}

// Plain Legendre polynomial (explicit low-degree formulas are asserted
// against this in the tests).
inline double legendre_p(int l, double x) {
    double p0 = 1.0, p1 = x;
    if (l == 0) return p0;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Degree-1 Wigner d by conjugating the explicit rotation matrix Ry(beta)
// into the spherical basis e_{+1} = -(ex + i ey)/sqrt2, e_0 = ez,
// e_{-1} = (ex - i ey)/sqrt2.
inline std::vector<std::complex<double>> wigner_d1_from_rotation(double beta) {
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const double r2 = std::numbers::sqrt2;
    // Columns of E are the spherical basis vectors for m = -1, 0, +1.
    C E[3][3] = {{1.0 / r2, 0.0, -1.0 / r2}, {-i / r2, 0.0, -i / r2}, {0.0, 1.0, 0.0}};
    const double c = std::cos(beta), s = std::sin(beta);
    double R[3][3] = {{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}};
    // d = E^dagger R E, reported with rows/cols ordered m = -1, 0, +1.
    std::vector<C> out(9, C(0.0, 0.0));
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) {
            C sum(0.0, 0.0);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) sum += std::conj(E[a][r]) * R[a][b] * E[b][col];
            out[static_cast<size_t>(r) * 3 + col] = sum;
        }
    return out;
}

// Random points, one manifold, fixed seed.
inline std::vector<hef::ManifoldPoint> random_points(hef::Manifold m, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<hef::ManifoldPoint> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        switch (m) {
            case hef::Manifold::S1:
                pts.push_back(hef::ManifoldPoint::circle(ang(rng)));
                break;
            case hef::Manifold::S2:
                pts.push_back(hef::ManifoldPoint::sphere(std::acos(unit(rng)), ang(rng)));
                break;
            case hef::Manifold::SO3:
                pts.push_back(
                    hef::ManifoldPoint::rotation(ang(rng), std::acos(unit(rng)), ang(rng)));
                break;
        }
    }
    return pts;
}

inline std::vector<double> random_vector(size_t n, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    return v;
}

}  // namespace oracles
