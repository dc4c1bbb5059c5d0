#pragma once

// Conjugate Bayesian inference over SO(3) from spherical correspondence
// pairs. With a harmonic prior over rotations and an isotropic Gaussian
// likelihood on bandlimited spherical signals, the posterior stays in the
// family: per degree, the parameter matrix picks up the outer product of the
// two signals' coefficient blocks scaled by 1 / (sigma^2 sqrt(2 lambda + 1)).

#include "hef/expfam.hpp"
#include "hef/transforms.hpp"

namespace hef {

// Real spherical-harmonic coefficients of a function on S^2, degrees 0..L
// (the constant included), canonical order.
struct SphericalSignal {
    int L = 0;
    std::vector<double> coef;  // (L+1)^2 entries

    static SphericalSignal zeros(int L);
};

using PosteriorParams = NaturalParams;  // always over SO(3)

// Forward transform of sampled image values; the grid bandlimit must exceed L.
SphericalSignal sphere_analyze(const GridFunction& samples, int L);

// Coefficients of the rotated function x(g^{-1} p): per degree the real
// orthogonal block U^l(g) applied to the degree's coefficients.
SphericalSignal rotate_spectral(const SphericalSignal& x, const ManifoldPoint& g);

// Same block action on natural parameters (S^2: vector blocks; SO(3): the
// parameter matrix of each degree is multiplied by U^l(g) on the left).
NaturalParams rotate_params(const NaturalParams& eta, const ManifoldPoint& g);

// Conjugate update. The degree-0 contribution is constant in g and dropped.
PosteriorParams posterior(const NaturalParams& prior, const SphericalSignal& x,
                          const SphericalSignal& y, double sigma);

struct MapEstimate {
    ManifoldPoint g;
    double log_value = 0.0;  // eta . T(g) at the estimate
};

// Grid search over the SO(3) grid of bandlimit B (ties broken by the lowest
// node index) followed by refine_steps of gradient ascent in Euler
// coordinates with step halving. The returned value never falls below the
// best grid node. For a flat posterior every node ties and the first node is
// returned with value 0.
MapEstimate map_rotation(const PosteriorParams& post, int B, int refine_steps);

// Normalized posterior density on the SO(3) grid of bandlimit B > L.
GridFunction posterior_grid(const PosteriorParams& post, int B);

}  // namespace hef
