#include "hef/bayes_rotation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hef {

SphericalSignal SphericalSignal::zeros(int L) {
    return SphericalSignal{L, std::vector<double>(static_cast<size_t>(L + 1) * (L + 1), 0.0)};
}

SphericalSignal sphere_analyze(const GridFunction& samples, int L) {
    if (samples.spec.manifold != Manifold::S2)
        throw std::invalid_argument("sphere_analyze: grid is not on the sphere");
    SpectralCoeffs c = analyze(samples, L);
    return SphericalSignal{L, std::move(c.coef)};
}

namespace {

// U^l(g): the real orthogonal degree-l block, i.e. the basis block divided by
// its sqrt(2l+1) normalization.
Matrix rotation_block(int degree, const ManifoldPoint& g) {
    const ManifoldPoint pts[1] = {g};
    Matrix block = eval_basis_block(Manifold::SO3, degree, pts);
    const int d = 2 * degree + 1;
    Matrix u(d, d);
    const double inv = 1.0 / std::sqrt(2.0 * degree + 1.0);
    for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col) u(r, col) = block(0, r * d + col) * inv;
    return u;
}

}  // namespace

SphericalSignal rotate_spectral(const SphericalSignal& x, const ManifoldPoint& g) {
    if (g.manifold != Manifold::SO3)
        throw std::invalid_argument("rotate_spectral: g must be a rotation");
    SphericalSignal out = SphericalSignal::zeros(x.L);
    for (int l = 0; l <= x.L; ++l) {
        const Matrix u = rotation_block(l, g);
        const int d = 2 * l + 1;
        const long off = degree_offset(Manifold::S2, l);
        for (int r = 0; r < d; ++r) {
            double s = 0.0;
            for (int col = 0; col < d; ++col) s += u(r, col) * x.coef[off + col];
            out.coef[off + r] = s;
        }
    }
    return out;
}

NaturalParams rotate_params(const NaturalParams& eta, const ManifoldPoint& g) {
    check_params(eta);
    if (g.manifold != Manifold::SO3)
        throw std::invalid_argument("rotate_params: g must be a rotation");
    if (eta.manifold == Manifold::S1)
        throw std::invalid_argument("rotate_params: parameters must live on S^2 or SO(3)");
    NaturalParams out = NaturalParams::zeros(eta.manifold, eta.L);
    for (int l = 1; l <= eta.L; ++l) {
        const Matrix u = rotation_block(l, g);
        const int d = 2 * l + 1;
        const long off = degree_offset(eta.manifold, l) - 1;  // eta skips degree 0
        if (eta.manifold == Manifold::S2) {
            for (int r = 0; r < d; ++r) {
                double s = 0.0;
                for (int col = 0; col < d; ++col) s += u(r, col) * eta.eta[off + col];
                out.eta[off + r] = s;
            }
        } else {
            for (int r = 0; r < d; ++r)
                for (int col = 0; col < d; ++col) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k)
                        s += u(r, k) * eta.eta[off + static_cast<long>(k) * d + col];
                    out.eta[off + static_cast<long>(r) * d + col] = s;
                }
        }
    }
    return out;
}

PosteriorParams posterior(const NaturalParams& prior, const SphericalSignal& x,
                          const SphericalSignal& y, double sigma) {
    check_params(prior);
    if (prior.manifold != Manifold::SO3)
        throw std::invalid_argument("posterior: prior must live on SO(3)");
    if (x.L != y.L) throw std::invalid_argument("posterior: signal bandlimits differ");
    if (!(sigma > 0.0)) throw std::invalid_argument("posterior: sigma must be positive");

    const int L = std::max(prior.L, x.L);
    PosteriorParams post = NaturalParams::zeros(Manifold::SO3, L);
    for (int l = 1; l <= prior.L; ++l) {
        const long src = degree_offset(Manifold::SO3, l) - 1;
        const long cnt = degree_count(Manifold::SO3, l);
        std::copy(prior.eta.begin() + src, prior.eta.begin() + src + cnt,
                  post.eta.begin() + src);
    }
    const double inv_var = 1.0 / (sigma * sigma);
    for (int l = 1; l <= x.L; ++l) {
        const int d = 2 * l + 1;
        const long soff = degree_offset(Manifold::S2, l);
        const long poff = degree_offset(Manifold::SO3, l) - 1;
        const double scale = inv_var / std::sqrt(2.0 * l + 1.0);
        for (int r = 0; r < d; ++r)
            for (int col = 0; col < d; ++col)
                post.eta[poff + static_cast<long>(r) * d + col] +=
                    scale * x.coef[soff + r] * y.coef[soff + col];
    }
    return post;
}

namespace {

double log_value_at(const PosteriorParams& post, const ManifoldPoint& g) {
    return log_unnormalized(post, g);
}

std::array<double, 3> fd_gradient(const PosteriorParams& post, const ManifoldPoint& g) {
    // Central differences in the Euler chart; the chart reduction keeps the
    // evaluations on the correct group element near the beta boundary.
    const double h = 1e-6;
    std::array<double, 3> grad{};
    const double args[3] = {g.alpha(), g.beta(), g.gamma()};
    for (int k = 0; k < 3; ++k) {
        double hi[3] = {args[0], args[1], args[2]};
        double lo[3] = {args[0], args[1], args[2]};
        hi[k] += h;
        lo[k] -= h;
        grad[k] = (log_value_at(post, ManifoldPoint::rotation(hi[0], hi[1], hi[2])) -
                   log_value_at(post, ManifoldPoint::rotation(lo[0], lo[1], lo[2]))) /
                  (2.0 * h);
    }
    return grad;
}

}  // namespace

MapEstimate map_rotation(const PosteriorParams& post, int B, int refine_steps) {
    check_params(post);
    if (post.manifold != Manifold::SO3)
        throw std::invalid_argument("map_rotation: parameters must live on SO(3)");
    if (B <= post.L)
        throw std::invalid_argument("map_rotation: search bandlimit must exceed the model's");
    const GridSpec spec = make_grid(Manifold::SO3, B);
    const GridFunction logf = synthesize(embed_params(post), spec);

    long best = 0;
    for (long i = 1; i < static_cast<long>(logf.values.size()); ++i)
        if (logf.values[i] > logf.values[best]) best = i;

    MapEstimate est{spec.point(best), log_value_at(post, spec.point(best))};
    double step = 0.5 * std::numbers::pi / B;
    for (int it = 0; it < refine_steps; ++it) {
        const auto grad = fd_gradient(post, est.g);
        const double norm = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
        if (norm == 0.0) break;
        bool moved = false;
        while (step > 1e-14) {
            const ManifoldPoint trial = ManifoldPoint::rotation(
                est.g.alpha() + step * grad[0] / norm, est.g.beta() + step * grad[1] / norm,
                est.g.gamma() + step * grad[2] / norm);
            const double val = log_value_at(post, trial);
            if (val > est.log_value) {
                est.g = trial;
                est.log_value = val;
                step *= 1.5;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return est;
}

GridFunction posterior_grid(const PosteriorParams& post, int B) {
    if (post.manifold != Manifold::SO3)
        throw std::invalid_argument("posterior_grid: parameters must live on SO(3)");
    return density_grid(post, B);
}

}  // namespace hef
