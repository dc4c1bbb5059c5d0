#include "hef/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hef {

namespace {

int moment_grid_bandlimit(int L, double oversample) {
    if (!(oversample >= 1.0))
        throw std::invalid_argument("oversample factor must be at least 1");
    return static_cast<int>(std::ceil(oversample * std::max(L, 1))) + 1;
}

}  // namespace

long param_count(Manifold m, int L) { return basis_count(m, L) - 1; }

NaturalParams NaturalParams::zeros(Manifold m, int L) {
    return NaturalParams{m, L, std::vector<double>(param_count(m, L), 0.0)};
}

void check_params(const NaturalParams& p) {
    if (static_cast<long>(p.eta.size()) != param_count(p.manifold, p.L))
        throw std::invalid_argument("natural parameter vector has wrong length");
    for (double v : p.eta)
        if (!std::isfinite(v)) throw std::invalid_argument("natural parameters must be finite");
}

SpectralCoeffs embed_params(const NaturalParams& eta) {
    SpectralCoeffs c;
    c.manifold = eta.manifold;
    c.L = eta.L;
    c.coef.resize(basis_count(eta.manifold, eta.L));
    c.coef[0] = 0.0;
    std::copy(eta.eta.begin(), eta.eta.end(), c.coef.begin() + 1);
    return c;
}

double log_unnormalized(const NaturalParams& eta, const ManifoldPoint& p) {
    check_params(eta);
    if (p.manifold != eta.manifold)
        throw std::invalid_argument("log_unnormalized: manifold mismatch");
    const long J = basis_count(eta.manifold, eta.L);
    std::vector<double> row(J);
    eval_basis_row(p, eta.L, row);
    double s = 0.0;
    for (long i = 1; i < J; ++i) s += eta.eta[i - 1] * row[i];
    return s;
}

MomentReport moments(const NaturalParams& eta, double oversample) {
    check_params(eta);
    const int B = moment_grid_bandlimit(eta.L, oversample);
    const GridSpec spec = make_grid(eta.manifold, B);
    GridFunction logf = synthesize(embed_params(eta), spec);

    double shift = logf.values.empty() ? 0.0 : logf.values[0];
#pragma omp parallel for reduction(max : shift)
    for (long i = 0; i < static_cast<long>(logf.values.size()); ++i)
        shift = std::max(shift, logf.values[i]);
    if (!std::isfinite(shift)) throw std::runtime_error("moments: log-density overflowed");

#pragma omp parallel for
    for (long i = 0; i < static_cast<long>(logf.values.size()); ++i)
        logf.values[i] = std::exp(logf.values[i] - shift);

    SpectralCoeffs m = analyze(logf, eta.L);
    const double m0 = m.coef[0];
    if (!(m0 > 0.0)) throw std::runtime_error("moments: nonpositive mass, aliasing or overflow");
    MomentReport report;
    report.log_z = shift + std::log(m0);
    report.moments.resize(m.coef.size() - 1);
    for (size_t i = 1; i < m.coef.size(); ++i) {
        const double v = m.coef[i] / m0;
        if (!std::isfinite(v)) throw std::runtime_error("moments: non-finite moment");
        report.moments[i - 1] = v;
    }
    return report;
}

double log_likelihood(const NaturalParams& eta, const SufficientStats& stats, double oversample) {
    check_params(eta);
    if (stats.manifold != eta.manifold || stats.L != eta.L)
        throw std::invalid_argument("log_likelihood: statistics shape mismatch");
    double dot = 0.0;
    for (size_t i = 0; i < eta.eta.size(); ++i) dot += eta.eta[i] * stats.mean_stats[i];
    return dot - moments(eta, oversample).log_z;
}

std::vector<double> nll_gradient(const NaturalParams& eta, const SufficientStats& stats,
                                 double oversample, const std::vector<double>* reg) {
    check_params(eta);
    if (stats.manifold != eta.manifold || stats.L != eta.L)
        throw std::invalid_argument("nll_gradient: statistics shape mismatch");
    if (reg && reg->size() != eta.eta.size())
        throw std::invalid_argument("nll_gradient: precision vector shape mismatch");
    std::vector<double> g = moments(eta, oversample).moments;
    for (size_t i = 0; i < g.size(); ++i) {
        g[i] -= stats.mean_stats[i];
        if (reg) g[i] += (*reg)[i] * eta.eta[i];
    }
    return g;
}

std::vector<double> plancherel_precisions(Manifold m, int L, double strength) {
    std::vector<double> reg(param_count(m, L));
    for (long i = 0; i < static_cast<long>(reg.size()); ++i) {
        const BasisIndex idx = basis_from_linear(m, i + 1);
        reg[i] = strength * (2.0 * idx.degree + 1.0);
    }
    return reg;
}

SufficientStats empirical_moments(std::span<const ManifoldPoint> points, int L) {
    if (points.empty()) throw std::invalid_argument("empirical_moments: empty point list");
    const Manifold m = points.front().manifold;
    for (const auto& p : points)
        if (p.manifold != m)
            throw std::invalid_argument("empirical_moments: points on different manifolds");
    const long J = basis_count(m, L);
    const long nblocks = (static_cast<long>(points.size()) + 1023) / 1024;
    std::vector<double> partial(static_cast<size_t>(nblocks) * (J - 1), 0.0);
    // Fixed-size blocks accumulated independently, then combined in block
    // order: the result does not depend on the thread count.
#pragma omp parallel
    {
        std::vector<double> row(J);
#pragma omp for schedule(dynamic)
        for (long blk = 0; blk < nblocks; ++blk) {
            double* acc = &partial[static_cast<size_t>(blk) * (J - 1)];
            const long lo = blk * 1024;
            const long hi = std::min<long>(lo + 1024, points.size());
            for (long i = lo; i < hi; ++i) {
                eval_basis_row(points[i], L, row);
                for (long k = 1; k < J; ++k) acc[k - 1] += row[k];
            }
        }
    }
    SufficientStats stats;
    stats.manifold = m;
    stats.L = L;
    stats.n = static_cast<long>(points.size());
    stats.mean_stats.assign(J - 1, 0.0);
    for (long blk = 0; blk < nblocks; ++blk)
        for (long k = 0; k < J - 1; ++k)
            stats.mean_stats[k] += partial[static_cast<size_t>(blk) * (J - 1) + k];
    for (long k = 0; k < J - 1; ++k) stats.mean_stats[k] /= static_cast<double>(stats.n);
    return stats;
}

GridFunction density_grid(const NaturalParams& eta, int B) {
    check_params(eta);
    if (B <= eta.L)
        throw std::invalid_argument("density_grid: grid bandlimit must exceed the model bandlimit");
    const GridSpec spec = make_grid(eta.manifold, B);
    GridFunction f = synthesize(embed_params(eta), spec);
    double shift = f.values[0];
#pragma omp parallel for reduction(max : shift)
    for (long i = 0; i < static_cast<long>(f.values.size()); ++i)
        shift = std::max(shift, f.values[i]);
#pragma omp parallel for
    for (long i = 0; i < static_cast<long>(f.values.size()); ++i)
        f.values[i] = std::exp(f.values[i] - shift);
    double mass = 0.0;
    for (long i = 0; i < static_cast<long>(f.values.size()); ++i)
        mass += spec.weight(i) * f.values[i];
    if (!(mass > 0.0)) throw std::runtime_error("density_grid: nonpositive mass");
#pragma omp parallel for
    for (long i = 0; i < static_cast<long>(f.values.size()); ++i) f.values[i] /= mass;
    return f;
}

}  // namespace hef
