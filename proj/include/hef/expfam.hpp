#pragma once

// Harmonic exponential family densities: p(g | eta) = exp(eta . T(g)) / Z_eta,
// with the real orthonormal matrix-element basis as sufficient statistics.
// The constant basis function is excluded from the parameter vector (it is
// absorbed by the normalizer), so a parameter vector has basis_count(m, L) - 1
// entries. Log-likelihoods are means per data point under the normalized
// invariant measure, so the uniform density has log-likelihood 0.

#include <span>
#include <vector>

#include "hef/transforms.hpp"

namespace hef {

struct NaturalParams {
    Manifold manifold = Manifold::S1;
    int L = 0;
    std::vector<double> eta;  // degrees 1..L in canonical order

    static NaturalParams zeros(Manifold m, int L);
};

long param_count(Manifold m, int L);  // basis_count - 1
void check_params(const NaturalParams& p);

struct MomentReport {
    std::vector<double> moments;  // E[T(g)], shaped like NaturalParams::eta
    double log_z = 0.0;
};

struct SufficientStats {
    Manifold manifold = Manifold::S1;
    int L = 0;
    long n = 0;                      // number of data points
    std::vector<double> mean_stats;  // empirical moments, shaped like eta
};

// eta . T(p); the excluded constant contributes nothing.
double log_unnormalized(const NaturalParams& eta, const ManifoldPoint& p);

// Moments and log-normalizer through the grid transform pipeline:
// synthesize the bandlimited log-density on a grid of bandlimit
// B = ceil(oversample * L) + 1, exponentiate after subtracting the maximum,
// analyze back, and read E[T] = M / M_0 and log Z = shift + log M_0.
MomentReport moments(const NaturalParams& eta, double oversample);

// Mean per-point log-likelihood: eta . mean_stats - log Z(eta).
double log_likelihood(const NaturalParams& eta, const SufficientStats& stats, double oversample);

// Gradient of the negative mean log-posterior:
// E[T] - mean_stats + reg * eta (elementwise), reg optional.
std::vector<double> nll_gradient(const NaturalParams& eta, const SufficientStats& stats,
                                 double oversample, const std::vector<double>* reg);

// Plancherel-weighted ridge precisions: reg_i = strength * (2 lambda_i + 1).
std::vector<double> plancherel_precisions(Manifold m, int L, double strength);

// Empirical moments of a dataset: mean of T(g) over the points, degrees 1..L.
SufficientStats empirical_moments(std::span<const ManifoldPoint> points, int L);

// Normalized density values on the canonical grid of bandlimit B > L;
// the weighted sum of the values is 1 by construction.
GridFunction density_grid(const NaturalParams& eta, int B);

// Embed parameters as spectral coefficients with a zero constant slot.
SpectralCoeffs embed_params(const NaturalParams& eta);

}  // namespace hef
