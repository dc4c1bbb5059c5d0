#include "hef/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace hef {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Precomputed colatitude tables and FFT plans for one (manifold, B, L).
struct Tables {
    Manifold manifold = Manifold::S1;
    int B = 0;
    int L = 0;

    // S^2: pbar_{l,m}(cos beta_j); block for order m starts at leg_off[m],
    // laid out (l - m) major, node j minor.
    std::vector<double> leg;
    std::vector<long> leg_off;

    // SO(3): d^l_{u,v} and d^l_{u,-v} at beta_j for u,v in [0, L]; block for
    // pair (u,v) starts at pair_off[u*(L+1)+v], laid out (l - l0) major.
    std::vector<double> dp;
    std::vector<double> dm;
    std::vector<long> pair_off;

    fftw_plan fwd1 = nullptr;
    fftw_plan bwd1 = nullptr;
    fftw_plan fwd2 = nullptr;
    fftw_plan bwd2 = nullptr;

    ~Tables() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd1) fftw_destroy_plan(fwd1);
        if (bwd1) fftw_destroy_plan(bwd1);
        if (fwd2) fftw_destroy_plan(fwd2);
        if (bwd2) fftw_destroy_plan(bwd2);
    }
};

using TableKey = std::tuple<int, int, int>;  // manifold, B, L

struct TableCache {
    std::mutex mutex;
    std::map<TableKey, std::pair<std::shared_ptr<const Tables>, std::uint64_t>> entries;
    std::uint64_t stamp = 0;
    int limit = 16;
};

TableCache& table_cache() {
    static TableCache cache;
    return cache;
}

std::complex<double>* as_fftw(std::complex<double>* p) { return p; }

void run_fft(fftw_plan plan, std::complex<double>* in, std::complex<double>* out) {
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

std::shared_ptr<const Tables> build_tables(Manifold m, int B, int L) {
    auto t = std::make_shared<Tables>();
    t->manifold = m;
    t->B = B;
    t->L = L;
    const int n = 2 * B;
    GridSpec spec = make_grid(m, B);

    if (m == Manifold::S2) {
        t->leg_off.resize(L + 2, 0);
        for (int mm = 0; mm <= L; ++mm)
            t->leg_off[mm + 1] = t->leg_off[mm] + static_cast<long>(L - mm + 1) * n;
        t->leg.assign(t->leg_off[L + 1], 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int mm = 0; mm <= L; ++mm) {
            std::vector<double> col(L - mm + 1);
            for (int j = 0; j < n; ++j) {
                legendre_column(mm, std::cos(spec.beta_nodes[j]), L, col);
                for (int l = mm; l <= L; ++l)
                    t->leg[t->leg_off[mm] + static_cast<long>(l - mm) * n + j] = col[l - mm];
            }
        }
    } else if (m == Manifold::SO3) {
        const int P = L + 1;
        t->pair_off.resize(P * P + 1, 0);
        for (int u = 0; u <= L; ++u)
            for (int v = 0; v <= L; ++v) {
                const int idx = u * P + v;
                const int l0 = std::max(u, v);
                t->pair_off[idx + 1] = t->pair_off[idx] + static_cast<long>(L - l0 + 1) * n;
            }
        t->dp.assign(t->pair_off[P * P], 0.0);
        t->dm.assign(t->pair_off[P * P], 0.0);
#pragma omp parallel for schedule(dynamic) collapse(2)
        for (int u = 0; u <= L; ++u) {
            for (int v = 0; v <= L; ++v) {
                const int l0 = std::max(u, v);
                std::vector<double> seq(L - l0 + 1);
                const long off = t->pair_off[u * P + v];
                for (int j = 0; j < n; ++j) {
                    wigner_d_sequence(u, v, spec.beta_nodes[j], L, seq);
                    for (int l = l0; l <= L; ++l)
                        t->dp[off + static_cast<long>(l - l0) * n + j] = seq[l - l0];
                    wigner_d_sequence(u, -v, spec.beta_nodes[j], L, seq);
                    for (int l = l0; l <= L; ++l)
                        t->dm[off + static_cast<long>(l - l0) * n + j] = seq[l - l0];
                }
            }
        }
    }

    {
        std::vector<std::complex<double>> a(static_cast<size_t>(n) * (m == Manifold::SO3 ? n : 1));
        std::vector<std::complex<double>> b(a.size());
        std::lock_guard<std::mutex> lock(fftw_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        t->fwd1 = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(as_fftw(a.data())),
                                   reinterpret_cast<fftw_complex*>(as_fftw(b.data())),
                                   FFTW_FORWARD, flags);
        t->bwd1 = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(as_fftw(a.data())),
                                   reinterpret_cast<fftw_complex*>(as_fftw(b.data())),
                                   FFTW_BACKWARD, flags);
        if (m == Manifold::SO3) {
            t->fwd2 = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(as_fftw(a.data())),
                                       reinterpret_cast<fftw_complex*>(as_fftw(b.data())),
                                       FFTW_FORWARD, flags);
            t->bwd2 = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(as_fftw(a.data())),
                                       reinterpret_cast<fftw_complex*>(as_fftw(b.data())),
                                       FFTW_BACKWARD, flags);
        }
    }
    return t;
}

std::shared_ptr<const Tables> get_tables(Manifold m, int B, int L) {
    TableCache& cache = table_cache();
    const TableKey key{static_cast<int>(m), B, L};
    {
        std::lock_guard<std::mutex> lock(cache.mutex);
        auto it = cache.entries.find(key);
        if (it != cache.entries.end()) return it->second.first;
    }
    // Built outside the lock; concurrent builders produce identical tables and
    // one of them wins the insert.
    auto built = build_tables(m, B, L);
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second.first;
    cache.entries.emplace(key, std::make_pair(built, cache.stamp++));
    while (static_cast<int>(cache.entries.size()) > cache.limit) {
        auto oldest = cache.entries.begin();
        for (auto jt = cache.entries.begin(); jt != cache.entries.end(); ++jt)
            if (jt->second.second < oldest->second.second) oldest = jt;
        cache.entries.erase(oldest);
    }
    return built;
}

void check_analyze_args(const GridFunction& f, int L) {
    if (L < 0) throw std::invalid_argument("analyze: negative bandlimit");
    if (L >= f.spec.B)
        throw std::invalid_argument("analyze: bandlimit must be below the grid bandlimit");
    if (static_cast<long>(f.values.size()) != f.spec.node_count())
        throw std::invalid_argument("analyze: value count does not match the grid");
}

void check_synthesize_args(const SpectralCoeffs& c, const GridSpec& spec) {
    if (c.manifold != spec.manifold)
        throw std::invalid_argument("synthesize: coefficient/grid manifold mismatch");
    if (c.L >= spec.B)
        throw std::invalid_argument("synthesize: bandlimit must be below the grid bandlimit");
    if (static_cast<long>(c.coef.size()) != basis_count(c.manifold, c.L))
        throw std::invalid_argument("synthesize: coefficient count does not match bandlimit");
}

}  // namespace

long GridSpec::node_count() const {
    const long n = 2L * B;
    switch (manifold) {
        case Manifold::S1: return n;
        case Manifold::S2: return n * n;
        case Manifold::SO3: return n * n * n;
    }
    return 0;
}

double GridSpec::weight(long node) const {
    const long n = 2L * B;
    switch (manifold) {
        case Manifold::S1: return 1.0 / n;
        case Manifold::S2: return beta_weights[node / n] / n;
        case Manifold::SO3: return beta_weights[node / (n * n)] / (n * n);
    }
    return 0.0;
}

ManifoldPoint GridSpec::point(long node) const {
    const long n = 2L * B;
    switch (manifold) {
        case Manifold::S1: return ManifoldPoint::circle(periodic_nodes[node]);
        case Manifold::S2:
            return ManifoldPoint::sphere(beta_nodes[node / n], periodic_nodes[node % n]);
        case Manifold::SO3: {
            const long j = node / (n * n);
            const long a = (node / n) % n;
            const long c = node % n;
            return ManifoldPoint::rotation(periodic_nodes[a], beta_nodes[j], periodic_nodes[c]);
        }
    }
    return {};
}

GridSpec make_grid(Manifold m, int B) {
    if (B < 1) throw std::invalid_argument("make_grid: grid bandlimit must be positive");
    GridSpec spec;
    spec.manifold = m;
    spec.B = B;
    const int n = 2 * B;
    spec.periodic_nodes.resize(n);
    for (int k = 0; k < n; ++k) spec.periodic_nodes[k] = 2.0 * kPi * k / n;
    if (m != Manifold::S1) {
        spec.beta_nodes.resize(n);
        spec.beta_weights.resize(n);
        for (int j = 0; j < n; ++j) {
            const double theta = kPi * (2 * j + 1) / (4.0 * B);
            spec.beta_nodes[j] = theta;
            // Driscoll-Healy weights for the midpoint grid: exact for
            // integral_0^pi P_l(cos t) sin t dt, l < 2B. Normalized to sum 1.
            double s = 0.0;
            for (int k = 0; k < B; ++k)
                s += std::sin((2 * j + 1) * (2 * k + 1) * kPi / (4.0 * B)) / (2 * k + 1);
            spec.beta_weights[j] = (2.0 / B) * std::sin(theta) * s / 2.0;
        }
    }
    return spec;
}

// --- analysis ------------------------------------------------------------------

namespace {

SpectralCoeffs analyze_s1(const GridFunction& f, int L, const Tables& t) {
    const int n = 2 * f.spec.B;
    SpectralCoeffs out{Manifold::S1, L, std::vector<double>(basis_count(Manifold::S1, L), 0.0)};
    std::vector<std::complex<double>> in(n), sp(n);
    for (int k = 0; k < n; ++k) in[k] = f.values[k];
    run_fft(t.fwd1, in.data(), sp.data());
    out.coef[0] = sp[0].real() / n;
    for (int l = 1; l <= L; ++l) {
        out.coef[2 * l - 1] = kSqrt2 * sp[l].real() / n;
        out.coef[2 * l] = -kSqrt2 * sp[l].imag() / n;
    }
    return out;
}

SpectralCoeffs analyze_s2(const GridFunction& f, int L, const Tables& t) {
    const int B = f.spec.B;
    const int n = 2 * B;
    SpectralCoeffs out{Manifold::S2, L, std::vector<double>(basis_count(Manifold::S2, L), 0.0)};
    // Longitude FFT per colatitude row: gc = sum_k f cos(m phi_k), gs = sin.
    std::vector<double> gc(static_cast<size_t>(n) * (L + 1));
    std::vector<double> gs(static_cast<size_t>(n) * (L + 1));
#pragma omp parallel
    {
        std::vector<std::complex<double>> in(n), sp(n);
#pragma omp for
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) in[k] = f.values[static_cast<size_t>(j) * n + k];
            run_fft(t.fwd1, in.data(), sp.data());
            for (int m = 0; m <= L; ++m) {
                gc[static_cast<size_t>(j) * (L + 1) + m] = sp[m].real();
                gs[static_cast<size_t>(j) * (L + 1) + m] = -sp[m].imag();
            }
        }
    }
    // Colatitude contraction against the Legendre table.
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m <= L; ++m) {
        for (int l = m; l <= L; ++l) {
            const double* tab = &t.leg[t.leg_off[m] + static_cast<long>(l - m) * n];
            double sc = 0.0, ss = 0.0;
            for (int j = 0; j < n; ++j) {
                const double w = f.spec.beta_weights[j] / n;
                sc += w * tab[j] * gc[static_cast<size_t>(j) * (L + 1) + m];
                if (m > 0) ss += w * tab[j] * gs[static_cast<size_t>(j) * (L + 1) + m];
            }
            const long off = degree_offset(Manifold::S2, l) + l;
            if (m == 0) {
                out.coef[off] = sc;
            } else {
                out.coef[off + m] = kSqrt2 * sc;
                out.coef[off - m] = kSqrt2 * ss;
            }
        }
    }
    return out;
}

SpectralCoeffs analyze_so3(const GridFunction& f, int L, const Tables& t) {
    const int B = f.spec.B;
    const int n = 2 * B;
    const int P = L + 1;
    SpectralCoeffs out{Manifold::SO3, L, std::vector<double>(basis_count(Manifold::SO3, L), 0.0)};
    // 2D FFT per colatitude slice over (alpha, gamma); keep the four real
    // projections onto cos/sin of (u alpha + v gamma) and (u alpha - v gamma).
    const size_t quad = static_cast<size_t>(n) * P * P;
    std::vector<double> pc(quad), ps(quad), mc(quad), ms(quad);
#pragma omp parallel
    {
        std::vector<std::complex<double>> in(static_cast<size_t>(n) * n);
        std::vector<std::complex<double>> sp(static_cast<size_t>(n) * n);
#pragma omp for
        for (int j = 0; j < n; ++j) {
            const double* slice = &f.values[static_cast<size_t>(j) * n * n];
            for (int i = 0; i < n * n; ++i) in[i] = slice[i];
            run_fft(t.fwd2, in.data(), sp.data());
            for (int u = 0; u <= L; ++u) {
                for (int v = 0; v <= L; ++v) {
                    const std::complex<double> zp = sp[static_cast<size_t>(u) * n + v];
                    const std::complex<double> zm = sp[static_cast<size_t>(u) * n + ((n - v) % n)];
                    const size_t q = (static_cast<size_t>(j) * P + u) * P + v;
                    pc[q] = zp.real();
                    ps[q] = -zp.imag();
                    mc[q] = zm.real();
                    ms[q] = -zm.imag();
                }
            }
        }
    }
#pragma omp parallel for schedule(dynamic) collapse(2)
    for (int u = 0; u <= L; ++u) {
        for (int v = 0; v <= L; ++v) {
            const int l0 = std::max(u, v);
            const long poff = t.pair_off[u * P + v];
            const double s1 = ((u + v) % 2 == 0) ? 1.0 : -1.0;
            const double s2 = (u % 2 == 0) ? 1.0 : -1.0;
            const double sv = (v % 2 == 0) ? 1.0 : -1.0;
            for (int l = l0; l <= L; ++l) {
                const double* tp = &t.dp[poff + static_cast<long>(l - l0) * n];
                const double* tm = &t.dm[poff + static_cast<long>(l - l0) * n];
                const double scale = std::sqrt(2.0 * l + 1.0);
                const long base = degree_offset(Manifold::SO3, l);
                const int d = 2 * l + 1;
                auto slot = [&](int row, int col) -> double& {
                    return out.coef[base + static_cast<long>(row + l) * d + (col + l)];
                };
                double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double w = f.spec.beta_weights[j] / (static_cast<double>(n) * n);
                    const size_t q = (static_cast<size_t>(j) * P + u) * P + v;
                    if (u == 0 && v == 0) {
                        a0 += w * tp[j] * pc[q];
                    } else if (v == 0) {
                        a0 += w * tp[j] * pc[q];
                        a1 += w * tp[j] * ps[q];
                    } else if (u == 0) {
                        a0 += w * tp[j] * pc[q];
                        a1 += w * tp[j] * ps[q];
                    } else {
                        a0 += w * (s1 * tp[j] * pc[q] + s2 * tm[j] * mc[q]);
                        a1 += w * (-s1 * tp[j] * ps[q] + s2 * tm[j] * ms[q]);
                        a2 += w * (s1 * tp[j] * ps[q] + s2 * tm[j] * ms[q]);
                        a3 += w * (s1 * tp[j] * pc[q] - s2 * tm[j] * mc[q]);
                    }
                }
                if (u == 0 && v == 0) {
                    slot(0, 0) = scale * a0;
                } else if (v == 0) {
                    slot(u, 0) = scale * s2 * kSqrt2 * a0;
                    slot(-u, 0) = scale * s2 * kSqrt2 * a1;
                } else if (u == 0) {
                    slot(0, v) = scale * sv * kSqrt2 * a0;
                    slot(0, -v) = -scale * sv * kSqrt2 * a1;
                } else {
                    slot(u, v) = scale * a0;
                    slot(u, -v) = scale * a1;
                    slot(-u, v) = scale * a2;
                    slot(-u, -v) = scale * a3;
                }
            }
        }
    }
    return out;
}

}  // namespace

SpectralCoeffs analyze(const GridFunction& f, int L) {
    check_analyze_args(f, L);
    auto t = get_tables(f.spec.manifold, f.spec.B, L);
    switch (f.spec.manifold) {
        case Manifold::S1: return analyze_s1(f, L, *t);
        case Manifold::S2: return analyze_s2(f, L, *t);
        case Manifold::SO3: return analyze_so3(f, L, *t);
    }
    throw std::logic_error("analyze: unknown manifold");
}

// --- synthesis -----------------------------------------------------------------

namespace {

GridFunction synthesize_s1(const SpectralCoeffs& c, const GridSpec& spec, const Tables& t) {
    const int n = 2 * spec.B;
    GridFunction g{spec, std::vector<double>(n, 0.0)};
    std::vector<std::complex<double>> h(n, 0.0), outc(n);
    h[0] = c.coef[0];
    for (int l = 1; l <= c.L; ++l) {
        const double a = kSqrt2 * c.coef[2 * l - 1];
        const double b = kSqrt2 * c.coef[2 * l];
        h[l] = std::complex<double>(0.5 * a, -0.5 * b);
        h[n - l] = std::complex<double>(0.5 * a, 0.5 * b);
    }
    run_fft(t.bwd1, h.data(), outc.data());
    for (int k = 0; k < n; ++k) g.values[k] = outc[k].real();
    return g;
}

GridFunction synthesize_s2(const SpectralCoeffs& c, const GridSpec& spec, const Tables& t) {
    const int B = spec.B;
    const int n = 2 * B;
    const int L = c.L;
    GridFunction g{spec, std::vector<double>(static_cast<size_t>(n) * n, 0.0)};
    // Colatitude sums per order m: ac = cosine amplitude, bs = sine amplitude.
    std::vector<double> ac(static_cast<size_t>(L + 1) * n, 0.0);
    std::vector<double> bs(static_cast<size_t>(L + 1) * n, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m <= L; ++m) {
        for (int l = m; l <= L; ++l) {
            const double* tab = &t.leg[t.leg_off[m] + static_cast<long>(l - m) * n];
            const long off = degree_offset(Manifold::S2, l) + l;
            if (m == 0) {
                const double a = c.coef[off];
                for (int j = 0; j < n; ++j) ac[j] += a * tab[j];
            } else {
                const double a = kSqrt2 * c.coef[off + m];
                const double b = kSqrt2 * c.coef[off - m];
                double* arow = &ac[static_cast<size_t>(m) * n];
                double* brow = &bs[static_cast<size_t>(m) * n];
                for (int j = 0; j < n; ++j) {
                    arow[j] += a * tab[j];
                    brow[j] += b * tab[j];
                }
            }
        }
    }
#pragma omp parallel
    {
        std::vector<std::complex<double>> h(n), outc(n);
#pragma omp for
        for (int j = 0; j < n; ++j) {
            std::fill(h.begin(), h.end(), std::complex<double>(0.0, 0.0));
            h[0] = ac[j];
            for (int m = 1; m <= L; ++m) {
                const double a = ac[static_cast<size_t>(m) * n + j];
                const double b = bs[static_cast<size_t>(m) * n + j];
                h[m] = std::complex<double>(0.5 * a, -0.5 * b);
                h[n - m] = std::complex<double>(0.5 * a, 0.5 * b);
            }
            run_fft(t.bwd1, h.data(), outc.data());
            for (int k = 0; k < n; ++k) g.values[static_cast<size_t>(j) * n + k] = outc[k].real();
        }
    }
    return g;
}

GridFunction synthesize_so3(const SpectralCoeffs& c, const GridSpec& spec, const Tables& t) {
    const int B = spec.B;
    const int n = 2 * B;
    const int L = c.L;
    const int P = L + 1;
    GridFunction g{spec, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0)};
#pragma omp parallel
    {
        std::vector<std::complex<double>> h(static_cast<size_t>(n) * n);
        std::vector<std::complex<double>> outc(static_cast<size_t>(n) * n);
#pragma omp for
        for (int j = 0; j < n; ++j) {
            std::fill(h.begin(), h.end(), std::complex<double>(0.0, 0.0));
            for (int u = 0; u <= L; ++u) {
                for (int v = 0; v <= L; ++v) {
                    const int l0 = std::max(u, v);
                    const long poff = t.pair_off[u * P + v];
                    const double s1 = ((u + v) % 2 == 0) ? 1.0 : -1.0;
                    const double s2 = (u % 2 == 0) ? 1.0 : -1.0;
                    const double sv = (v % 2 == 0) ? 1.0 : -1.0;
                    double cp = 0.0, cm = 0.0, sp = 0.0, sm = 0.0;
                    for (int l = l0; l <= L; ++l) {
                        const double tpj = t.dp[poff + static_cast<long>(l - l0) * n + j];
                        const double tmj = t.dm[poff + static_cast<long>(l - l0) * n + j];
                        const double scale = std::sqrt(2.0 * l + 1.0);
                        const long base = degree_offset(Manifold::SO3, l);
                        const int d = 2 * l + 1;
                        auto coef = [&](int row, int col) {
                            return c.coef[base + static_cast<long>(row + l) * d + (col + l)];
                        };
                        if (u == 0 && v == 0) {
                            cp += scale * coef(0, 0) * tpj;
                        } else if (v == 0) {
                            cp += scale * s2 * kSqrt2 * coef(u, 0) * tpj;
                            sp += scale * s2 * kSqrt2 * coef(-u, 0) * tpj;
                        } else if (u == 0) {
                            cp += scale * sv * kSqrt2 * coef(0, v) * tpj;
                            sp += -scale * sv * kSqrt2 * coef(0, -v) * tpj;
                        } else {
                            cp += scale * s1 * tpj * (coef(u, v) + coef(-u, -v));
                            cm += scale * s2 * tmj * (coef(u, v) - coef(-u, -v));
                            sp += scale * s1 * tpj * (coef(-u, v) - coef(u, -v));
                            sm += scale * s2 * tmj * (coef(u, -v) + coef(-u, v));
                        }
                    }
                    if (u == 0 && v == 0) {
                        h[0] += cp;
                    } else if (v == 0) {
                        h[static_cast<size_t>(u) * n] += std::complex<double>(0.5 * cp, -0.5 * sp);
                        h[static_cast<size_t>(n - u) * n] +=
                            std::complex<double>(0.5 * cp, 0.5 * sp);
                    } else if (u == 0) {
                        h[v] += std::complex<double>(0.5 * cp, -0.5 * sp);
                        h[n - v] += std::complex<double>(0.5 * cp, 0.5 * sp);
                    } else {
                        h[static_cast<size_t>(u) * n + v] +=
                            std::complex<double>(0.5 * cp, -0.5 * sp);
                        h[static_cast<size_t>(n - u) * n + (n - v)] +=
                            std::complex<double>(0.5 * cp, 0.5 * sp);
                        h[static_cast<size_t>(u) * n + (n - v)] +=
                            std::complex<double>(0.5 * cm, -0.5 * sm);
                        h[static_cast<size_t>(n - u) * n + v] +=
                            std::complex<double>(0.5 * cm, 0.5 * sm);
                    }
                }
            }
            run_fft(t.bwd2, h.data(), outc.data());
            double* slice = &g.values[static_cast<size_t>(j) * n * n];
            for (int i = 0; i < n * n; ++i) slice[i] = outc[i].real();
        }
    }
    return g;
}

}  // namespace

GridFunction synthesize(const SpectralCoeffs& c, const GridSpec& spec) {
    check_synthesize_args(c, spec);
    auto t = get_tables(spec.manifold, spec.B, c.L);
    switch (spec.manifold) {
        case Manifold::S1: return synthesize_s1(c, spec, *t);
        case Manifold::S2: return synthesize_s2(c, spec, *t);
        case Manifold::SO3: return synthesize_so3(c, spec, *t);
    }
    throw std::logic_error("synthesize: unknown manifold");
}

// --- serial reference implementations ---------------------------------------

SpectralCoeffs analyze_reference(const GridFunction& f, int L) {
    check_analyze_args(f, L);
    const long J = basis_count(f.spec.manifold, L);
    SpectralCoeffs out{f.spec.manifold, L, std::vector<double>(J, 0.0)};
    std::vector<double> row(J);
    for (long node = 0; node < f.spec.node_count(); ++node) {
        eval_basis_row(f.spec.point(node), L, row);
        const double wf = f.spec.weight(node) * f.values[node];
        for (long i = 0; i < J; ++i) out.coef[i] += wf * row[i];
    }
    return out;
}

GridFunction synthesize_reference(const SpectralCoeffs& c, const GridSpec& spec) {
    check_synthesize_args(c, spec);
    const long J = basis_count(c.manifold, c.L);
    GridFunction g{spec, std::vector<double>(spec.node_count(), 0.0)};
    std::vector<double> row(J);
    for (long node = 0; node < spec.node_count(); ++node) {
        eval_basis_row(spec.point(node), c.L, row);
        double s = 0.0;
        for (long i = 0; i < J; ++i) s += c.coef[i] * row[i];
        g.values[node] = s;
    }
    return g;
}

void set_table_cache_limit(int max_entries) {
    TableCache& cache = table_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    cache.limit = std::max(1, max_entries);
}

void clear_table_cache() {
    TableCache& cache = table_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    cache.entries.clear();
}

}  // namespace hef
