#include "hef/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hef {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

struct LinePoint {
    double t;
    double f;
    double df;  // directional derivative
};

// Cubic interpolation minimizer for the zoom stage; falls back to bisection
// when the interpolant is degenerate or leaves the bracket.
double interpolate(const LinePoint& lo, const LinePoint& hi) {
    const double d1 = lo.df + hi.df - 3.0 * (lo.f - hi.f) / (lo.t - hi.t);
    const double disc = d1 * d1 - lo.df * hi.df;
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), hi.t - lo.t);
        const double t = hi.t - (hi.t - lo.t) * (hi.df + d2 - d1) / (hi.df - lo.df + 2.0 * d2);
        const double a = std::min(lo.t, hi.t), b = std::max(lo.t, hi.t);
        const double margin = 0.1 * (b - a);
        if (std::isfinite(t) && t > a + margin && t < b - margin) return t;
    }
    return 0.5 * (lo.t + hi.t);
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& fg, std::vector<double> x0,
                           const LbfgsOptions& opt) {
    const size_t n = x0.size();
    LbfgsResult res;
    res.x = std::move(x0);
    std::vector<double> grad(n), xnew(n), gnew(n), dir(n);

    res.f = fg(res.x, grad);
    if (!std::isfinite(res.f)) throw std::runtime_error("lbfgs: objective is not finite");
    res.trace.push_back(res.f);
    res.gradient_norm = inf_norm(grad);
    if (res.gradient_norm <= opt.gradient_tolerance) {
        res.converged = true;
        res.message = "converged at the initial point";
        return res;
    }

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> alpha_buf;

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        // Two-loop recursion: dir = -H grad
        dir.assign(grad.begin(), grad.end());
        const int k = static_cast<int>(s_hist.size());
        alpha_buf.assign(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            alpha_buf[i] = rho_hist[i] * dot(s_hist[i], dir);
            for (size_t j = 0; j < n; ++j) dir[j] -= alpha_buf[i] * y_hist[i][j];
        }
        if (k > 0) {
            const double yy = dot(y_hist.back(), y_hist.back());
            const double sy = 1.0 / rho_hist.back();
            const double scale = sy / yy;
            for (double& d : dir) d *= scale;
        }
        for (int i = 0; i < k; ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], dir);
            for (size_t j = 0; j < n; ++j) dir[j] += (alpha_buf[i] - beta) * s_hist[i][j];
        }
        for (double& d : dir) d = -d;

        double dphi0 = dot(grad, dir);
        if (!(dphi0 < 0.0)) {
            // Not a descent direction; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (size_t j = 0; j < n; ++j) dir[j] = -grad[j];
            dphi0 = dot(grad, dir);
        }

        // Strong Wolfe line search (bracket then zoom).
        const double f0 = res.f;
        const double c1 = opt.sufficient_decrease;
        const double c2 = opt.curvature;
        auto eval = [&](double t) -> LinePoint {
            for (size_t j = 0; j < n; ++j) xnew[j] = res.x[j] + t * dir[j];
            const double f = fg(xnew, gnew);
            if (std::isnan(f)) throw std::runtime_error("lbfgs: objective became NaN");
            return LinePoint{t, f, dot(gnew, dir)};
        };

        LinePoint prev{0.0, f0, dphi0};
        LinePoint cur{};
        bool accepted = false;
        bool bracketed = false;
        LinePoint lo{}, hi{};
        double t = 1.0;
        int evals = 0;
        for (; evals < opt.max_line_search; ++evals) {
            cur = eval(t);
            if (cur.f > f0 + c1 * cur.t * dphi0 || (evals > 0 && cur.f >= prev.f)) {
                lo = prev;
                hi = cur;
                bracketed = true;
                break;
            }
            if (std::abs(cur.df) <= -c2 * dphi0) {
                accepted = true;
                break;
            }
            if (cur.df >= 0.0) {
                lo = cur;
                hi = prev;
                bracketed = true;
                break;
            }
            prev = cur;
            t *= 2.0;
        }
        if (bracketed && !accepted) {
            for (; evals < opt.max_line_search; ++evals) {
                const double tz = interpolate(lo, hi);
                cur = eval(tz);
                if (cur.f > f0 + c1 * cur.t * dphi0 || cur.f >= lo.f) {
                    hi = cur;
                } else {
                    if (std::abs(cur.df) <= -c2 * dphi0) {
                        accepted = true;
                        break;
                    }
                    if (cur.df * (hi.t - lo.t) >= 0.0) hi = lo;
                    lo = cur;
                }
                if (std::abs(hi.t - lo.t) < 1e-16 * std::max(1.0, std::abs(lo.t))) break;
            }
        }
        if (!accepted && bracketed && lo.t > 0.0 && lo.f < f0) {
            // The bracket collapsed; take the best point seen.
            cur = eval(lo.t);
            accepted = std::abs(cur.df) <= -c2 * dphi0 || cur.f < f0;
        }
        if (!accepted || !(cur.f <= f0)) {
            res.message = "line search failed";
            res.converged = false;
            return res;
        }

        // Accept the step.
        std::vector<double> s(n), y(n);
        for (size_t j = 0; j < n; ++j) {
            s[j] = xnew[j] - res.x[j];
            y[j] = gnew[j] - grad[j];
        }
        res.x = xnew;
        grad = gnew;
        res.f = cur.f;
        res.trace.push_back(res.f);
        res.iterations = iter + 1;
        res.gradient_norm = inf_norm(grad);
        if (res.gradient_norm <= opt.gradient_tolerance) {
            res.converged = true;
            res.message = "gradient tolerance reached";
            return res;
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opt.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
    }
    res.message = "iteration limit reached";
    return res;
}

namespace {

std::vector<double> fit_precisions(const FitConfig& cfg, Manifold m) {
    if (cfg.scheme == RegScheme::Plancherel && cfg.reg_strength > 0.0)
        return plancherel_precisions(m, cfg.L, cfg.reg_strength);
    return {};
}

}  // namespace

FitResult fit_map(const SufficientStats& stats, const FitConfig& cfg) {
    const std::vector<double> zero(param_count(stats.manifold, cfg.L), 0.0);
    return fit_map(stats, cfg, zero);
}

FitResult fit_map(const SufficientStats& stats, const FitConfig& cfg,
                  std::span<const double> initial) {
    if (cfg.L != stats.L)
        throw std::invalid_argument("fit_map: statistics bandlimit does not match config");
    if (!(cfg.gradient_tolerance > 0.0)) throw std::invalid_argument("fit_map: tolerance <= 0");
    if (cfg.history < 1) throw std::invalid_argument("fit_map: history < 1");
    const long n = param_count(stats.manifold, cfg.L);
    if (static_cast<long>(initial.size()) != n)
        throw std::invalid_argument("fit_map: initial point has wrong length");

    const std::vector<double> reg = fit_precisions(cfg, stats.manifold);
    NaturalParams eta = NaturalParams::zeros(stats.manifold, cfg.L);

    Objective fg = [&](std::span<const double> x, std::span<double> grad_out) -> double {
        std::copy(x.begin(), x.end(), eta.eta.begin());
        const MomentReport rep = moments(eta, cfg.oversample);
        double obj = rep.log_z;
        for (long i = 0; i < n; ++i) {
            obj -= x[i] * stats.mean_stats[i];
            grad_out[i] = rep.moments[i] - stats.mean_stats[i];
            if (!reg.empty()) {
                obj += 0.5 * reg[i] * x[i] * x[i];
                grad_out[i] += reg[i] * x[i];
            }
        }
        return obj;
    };

    LbfgsOptions opt;
    opt.history = cfg.history;
    opt.max_iterations = cfg.max_iterations;
    opt.gradient_tolerance = cfg.gradient_tolerance;
    LbfgsResult lr = lbfgs_minimize(fg, std::vector<double>(initial.begin(), initial.end()), opt);

    FitResult out;
    out.eta = NaturalParams{stats.manifold, cfg.L, lr.x};
    out.objective = lr.f;
    out.gradient_norm = lr.gradient_norm;
    out.iterations = lr.iterations;
    out.converged = lr.converged;
    out.trace = std::move(lr.trace);
    out.diagnostic = std::move(lr.message);
    return out;
}

CrossValReport cross_validate(std::span<const ManifoldPoint> points, int folds,
                              std::span<const int> bandlimits,
                              std::span<const double> reg_strengths, const FitConfig& base,
                              std::uint64_t seed) {
    const long n = static_cast<long>(points.size());
    if (folds < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
    if (n < folds) throw std::invalid_argument("cross_validate: fewer points than folds");

    std::vector<long> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    // Contiguous blocks of the shuffled order.
    std::vector<std::pair<long, long>> ranges(folds);
    for (int f = 0; f < folds; ++f)
        ranges[f] = {f * n / folds, (f + 1) * static_cast<long>(n) / folds};
    for (const auto& [lo, hi] : ranges)
        if (hi <= lo) throw std::invalid_argument("cross_validate: a fold has no points");

    CrossValReport report;
    for (int L : bandlimits) {
        // Statistics are shared across regularization settings for one fold.
        std::vector<SufficientStats> train_stats(folds), test_stats(folds);
        for (int f = 0; f < folds; ++f) {
            std::vector<ManifoldPoint> train, test;
            for (int g = 0; g < folds; ++g) {
                auto [lo, hi] = ranges[g];
                for (long i = lo; i < hi; ++i)
                    (g == f ? test : train).push_back(points[order[i]]);
            }
            train_stats[f] = empirical_moments(train, L);
            test_stats[f] = empirical_moments(test, L);
        }
        for (double reg : reg_strengths) {
            FitConfig cfg = base;
            cfg.L = L;
            cfg.reg_strength = reg;
            cfg.scheme = reg > 0.0 ? RegScheme::Plancherel : RegScheme::None;
            CrossValSummary summary;
            summary.L = L;
            summary.reg_strength = reg;
            std::vector<double> trains, tests;
            for (int f = 0; f < folds; ++f) {
                const auto t0 = std::chrono::steady_clock::now();
                const FitResult fit = fit_map(train_stats[f], cfg);
                const auto t1 = std::chrono::steady_clock::now();
                CrossValEntry e;
                e.L = L;
                e.reg_strength = reg;
                e.fold = f;
                e.train_ll = log_likelihood(fit.eta, train_stats[f], cfg.oversample);
                e.test_ll = log_likelihood(fit.eta, test_stats[f], cfg.oversample);
                e.seconds = std::chrono::duration<double>(t1 - t0).count();
                report.entries.push_back(e);
                trains.push_back(e.train_ll);
                tests.push_back(e.test_ll);
                summary.seconds_mean += e.seconds / folds;
            }
            auto mean_std = [](const std::vector<double>& v) {
                const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
                double var = 0.0;
                for (double x : v) var += (x - mean) * (x - mean);
                return std::pair<double, double>(mean, std::sqrt(var / v.size()));
            };
            std::tie(summary.train_mean, summary.train_std) = mean_std(trains);
            std::tie(summary.test_mean, summary.test_std) = mean_std(tests);
            report.summaries.push_back(summary);
        }
    }
    return report;
}

}  // namespace hef
