#pragma once

// Discrete forward (analysis) and inverse (synthesis) Fourier transforms on
// S^1, S^2 and SO(3), exact on bandlimited functions.
//
// Grids are equiangular with 2B nodes per axis. The colatitude axis uses the
// midpoint nodes beta_j = pi (2j+1) / (4B) with Driscoll-Healy quadrature
// weights, which integrate every Legendre polynomial of degree < 2B exactly;
// the periodic axes use uniform nodes and weights. All weights are scaled so
// they sum to 1 (normalized invariant measure).
//
// analyze/synthesize run an FFT along the periodic axes and a dense
// contraction against precomputed Legendre / Wigner-d tables along the
// colatitude axis, parallelized with OpenMP. The *_reference variants are
// straightforward serial O(nodes x basis) loops kept as the comparison
// implementation for tests and benchmarks.

#include <span>
#include <vector>

#include "hef/special_functions.hpp"

namespace hef {

struct GridSpec {
    Manifold manifold = Manifold::S1;
    int B = 0;  // grid bandlimit; every axis has 2B nodes

    // Axis nodes. S^1: theta; S^2: beta, phi; SO(3): beta, alpha, gamma.
    std::vector<double> beta_nodes;     // colatitude (S^2, SO(3))
    std::vector<double> periodic_nodes; // theta / phi / alpha and gamma
    std::vector<double> beta_weights;   // colatitude weights, sum to 1

    long node_count() const;
    // Weight of one node; weights sum to 1 over the grid.
    double weight(long node) const;
    // Coordinates of one node. Storage order nests the colatitude axis
    // outermost: S^2 rows are (beta_j, phi_k) with k fastest; SO(3) nodes are
    // (beta_j, alpha_a, gamma_c) with c fastest.
    ManifoldPoint point(long node) const;
};

struct GridFunction {
    GridSpec spec;
    std::vector<double> values;  // one per node, storage order of GridSpec
};

// Real coefficients in canonical basis order for all degrees <= L
// (the constant lambda = 0 slot included).
struct SpectralCoeffs {
    Manifold manifold = Manifold::S1;
    int L = 0;
    std::vector<double> coef;
};

// Build the canonical grid; exact quadrature for all basis functions of
// degree < B (and in fact < 2B along the colatitude axis).
GridSpec make_grid(Manifold m, int B);

// Forward transform: coefficients c_i = sum_nodes w * f * T_i for degrees <= L.
// Requires L < f.spec.B.
SpectralCoeffs analyze(const GridFunction& f, int L);

// Inverse transform: values(node) = sum_i c_i T_i(node). Requires c.L < spec.B.
GridFunction synthesize(const SpectralCoeffs& c, const GridSpec& spec);

// Serial reference implementations (direct per-node basis evaluation).
SpectralCoeffs analyze_reference(const GridFunction& f, int L);
GridFunction synthesize_reference(const SpectralCoeffs& c, const GridSpec& spec);

// Precomputed-table cache control. Tables are keyed by (manifold, B, L) and
// built at most once; set_table_cache_limit bounds how many stay resident.
void set_table_cache_limit(int max_entries);
void clear_table_cache();

}  // namespace hef
