#include "hef/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hef {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void bad_index(const BasisIndex& idx) {
    throw std::invalid_argument("basis index out of range for " +
                                std::string(manifold_name(idx.manifold)) + ": degree=" +
                                std::to_string(idx.degree) + " row=" + std::to_string(idx.row) +
                                " col=" + std::to_string(idx.col));
}

}  // namespace

const char* manifold_name(Manifold m) {
    switch (m) {
        case Manifold::S1: return "s1";
        case Manifold::S2: return "s2";
        case Manifold::SO3: return "so3";
    }
    return "?";
}

long basis_count(Manifold m, int L) {
    if (L < 0) return 0;
    const long l = L;
    switch (m) {
        case Manifold::S1: return 2 * l + 1;
        case Manifold::S2: return (l + 1) * (l + 1);
        case Manifold::SO3: return (l + 1) * (2 * l + 1) * (2 * l + 3) / 3;
    }
    return 0;
}

int degree_count(Manifold m, int degree) {
    switch (m) {
        case Manifold::S1: return degree == 0 ? 1 : 2;
        case Manifold::S2: return 2 * degree + 1;
        case Manifold::SO3: return (2 * degree + 1) * (2 * degree + 1);
    }
    return 0;
}

long degree_offset(Manifold m, int degree) {
    return basis_count(m, degree - 1);
}

bool valid_index(const BasisIndex& idx) {
    if (idx.degree < 0) return false;
    switch (idx.manifold) {
        case Manifold::S1:
            if (idx.col != 0) return false;
            if (idx.degree == 0) return idx.row == 0;
            return idx.row == 1 || idx.row == -1;
        case Manifold::S2:
            return idx.col == 0 && std::abs(idx.row) <= idx.degree;
        case Manifold::SO3:
            return std::abs(idx.row) <= idx.degree && std::abs(idx.col) <= idx.degree;
    }
    return false;
}

long linear_index(const BasisIndex& idx) {
    if (!valid_index(idx)) bad_index(idx);
    const long base = degree_offset(idx.manifold, idx.degree);
    switch (idx.manifold) {
        case Manifold::S1:
            if (idx.degree == 0) return 0;
            return base + (idx.row > 0 ? 0 : 1);  // cosine before sine
        case Manifold::S2:
            return base + (idx.row + idx.degree);
        case Manifold::SO3: {
            const long d = 2 * idx.degree + 1;
            return base + (idx.row + idx.degree) * d + (idx.col + idx.degree);
        }
    }
    bad_index(idx);
}

BasisIndex basis_from_linear(Manifold m, long i) {
    if (i < 0) throw std::invalid_argument("negative basis index");
    int degree = 0;
    while (degree_offset(m, degree + 1) <= i) ++degree;
    const long r = i - degree_offset(m, degree);
    BasisIndex idx;
    idx.manifold = m;
    idx.degree = degree;
    switch (m) {
        case Manifold::S1:
            idx.row = degree == 0 ? 0 : (r == 0 ? 1 : -1);
            break;
        case Manifold::S2:
            idx.row = static_cast<int>(r) - degree;
            break;
        case Manifold::SO3: {
            const long d = 2 * degree + 1;
            idx.row = static_cast<int>(r / d) - degree;
            idx.col = static_cast<int>(r % d) - degree;
            break;
        }
    }
    return idx;
}

double wrap_angle(double x) {
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x = 0.0;  // fmod rounding at the seam
    return x;
}

ManifoldPoint ManifoldPoint::circle(double theta) {
    ManifoldPoint p;
    p.manifold = Manifold::S1;
    p.a = wrap_angle(theta);
    return p;
}

ManifoldPoint ManifoldPoint::sphere(double beta, double phi) {
    ManifoldPoint p;
    p.manifold = Manifold::S2;
    beta = wrap_angle(beta);
    if (beta > std::numbers::pi) {  // reflect through the axis
        beta = kTwoPi - beta;
        phi += std::numbers::pi;
    }
    p.a = beta;
    p.b = wrap_angle(phi);
    return p;
}

ManifoldPoint ManifoldPoint::rotation(double alpha, double beta, double gamma) {
    ManifoldPoint p;
    p.manifold = Manifold::SO3;
    beta = wrap_angle(beta);
    if (beta > std::numbers::pi) {  // Ry(-b) = Rz(pi) Ry(b) Rz(pi)
        beta = kTwoPi - beta;
        alpha += std::numbers::pi;
        gamma += std::numbers::pi;
    }
    p.a = wrap_angle(alpha);
    p.b = beta;
    p.c = wrap_angle(gamma);
    return p;
}

// --- normalized associated Legendre -----------------------------------------

void legendre_column(int m, double x, int lmax, std::span<double> out) {
    const int count = lmax - m + 1;
    if (m < 0 || count <= 0) throw std::invalid_argument("legendre_column: bad order/degree");
    if (static_cast<int>(out.size()) < count)
        throw std::invalid_argument("legendre_column: output too small");
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    // Sectoral seed pbar_{m,m}, built multiplicatively to avoid factorials.
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= s * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
    out[0] = pmm;
    if (count == 1) return;
    double prev2 = pmm;
    double prev1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    out[1] = prev1;
    for (int l = m + 2; l <= lmax; ++l) {
        const double num = (2.0 * l - 1.0) * (2.0 * l + 1.0);
        const double den = (static_cast<double>(l) - m) * (static_cast<double>(l) + m);
        const double a = std::sqrt(num / den);
        const double b = std::sqrt((2.0 * l + 1.0) * (l - 1.0 + m) * (l - 1.0 - m) /
                                   (den * (2.0 * l - 3.0)));
        const double val = a * x * prev1 - b * prev2;
        out[l - m] = val;
        prev2 = prev1;
        prev1 = val;
    }
}

// --- Wigner d ----------------------------------------------------------------

namespace {

// Boundary value d^{l0}_{m,l0}(beta) with l0 = max over the pair, computed in
// log space so that the binomial factor never overflows.
double wigner_d_column_max(int l0, int m, double cos_half, double sin_half) {
    const int a = l0 + m;  // power of cos(beta/2)
    const int b = l0 - m;  // power of sin(beta/2)
    if (cos_half == 0.0 && a > 0) return 0.0;
    if (sin_half == 0.0 && b > 0) return 0.0;
    double lg = 0.5 * (std::lgamma(2.0 * l0 + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
    if (a > 0) lg += a * std::log(cos_half);
    if (b > 0) lg += b * std::log(sin_half);
    return std::exp(lg);
}

// Seed d^{l0}_{mn}(beta) where l0 = max(|m|, |n|), by mapping the four
// boundary cases onto the column-max closed form through the symmetries
// d_{mn} = (-1)^{m-n} d_{nm} = d_{-n,-m}.
double wigner_d_seed(int m, int n, double beta) {
    const int l0 = std::max(std::abs(m), std::abs(n));
    const double ch = std::cos(0.5 * beta);
    const double sh = std::sin(0.5 * beta);
    if (n == l0) return wigner_d_column_max(l0, m, ch, sh);
    if (-n == l0) {
        const double v = wigner_d_column_max(l0, -m, ch, sh);
        return ((l0 + m) % 2 == 0) ? v : -v;
    }
    if (m == l0) {
        const double v = wigner_d_column_max(l0, n, ch, sh);
        return ((l0 - n) % 2 == 0) ? v : -v;
    }
    return wigner_d_column_max(l0, -n, ch, sh);  // -m == l0
}

}  // namespace

void wigner_d_sequence(int m, int n, double beta, int lmax, std::span<double> out) {
    const int l0 = std::max(std::abs(m), std::abs(n));
    const int count = lmax - l0 + 1;
    if (count <= 0) throw std::invalid_argument("wigner_d_sequence: lmax below max(|m|,|n|)");
    if (static_cast<int>(out.size()) < count)
        throw std::invalid_argument("wigner_d_sequence: output too small");
    const double x = std::cos(beta);
    double prev2 = 0.0;  // coefficient of d^{l0-1} vanishes, so any value works
    double prev1 = wigner_d_seed(m, n, beta);
    out[0] = prev1;
    const double mn = static_cast<double>(m) * n;
    for (int l = l0; l < lmax; ++l) {
        double val;
        if (l == 0) {
            val = x * prev1;  // d^1_{00} = cos(beta); the general step divides by l
        } else {
            const double lp = l + 1.0;
            const double amp = std::sqrt((lp * lp - m * m) * (lp * lp - n * n));
            const double am = std::sqrt((static_cast<double>(l) * l - m * m) *
                                        (static_cast<double>(l) * l - n * n));
            val = ((2.0 * l + 1.0) * (l * lp * x - mn) * prev1 - lp * am * prev2) / (l * amp);
        }
        out[l - l0 + 1] = val;
        prev2 = prev1;
        prev1 = val;
    }
}

Matrix wigner_d(int degree, double beta) {
    if (degree < 0) throw std::invalid_argument("wigner_d: negative degree");
    const int d = 2 * degree + 1;
    Matrix out(d, d);
    std::vector<double> seq;
#pragma omp parallel for schedule(dynamic) firstprivate(seq)
    for (int m = -degree; m <= degree; ++m) {
        for (int n = -degree; n <= degree; ++n) {
            const int l0 = std::max(std::abs(m), std::abs(n));
            seq.resize(degree - l0 + 1);
            wigner_d_sequence(m, n, beta, degree, seq);
            out(m + degree, n + degree) = seq.back();
        }
    }
    return out;
}

// --- basis evaluation ---------------------------------------------------------

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double so3_element(int degree, int row, int col, double alpha, double beta, double gamma) {
    // Real matrix element built from the two Wigner-d values d_{u,v} and
    // d_{u,-v} (u = |row|, v = |col|) and sums/differences of the two outer
    // angles. The sign factors come from realifying the complex basis.
    const int u = std::abs(row);
    const int v = std::abs(col);
    const int l0 = std::max(u, v);
    std::vector<double> seq(degree - l0 + 1);
    wigner_d_sequence(u, v, beta, degree, seq);
    const double dp = seq.back();
    wigner_d_sequence(u, -v, beta, degree, seq);
    const double dm = seq.back();

    const double s1 = ((u + v) % 2 == 0) ? 1.0 : -1.0;
    const double s2 = (u % 2 == 0) ? 1.0 : -1.0;
    if (row == 0 && col == 0) return dp;
    if (col == 0) {
        const double f = s2 * kSqrt2 * dp;
        return row > 0 ? f * std::cos(u * alpha) : f * std::sin(u * alpha);
    }
    if (row == 0) {
        const double sv = (v % 2 == 0) ? 1.0 : -1.0;
        const double f = sv * kSqrt2 * dp;
        return col > 0 ? f * std::cos(v * gamma) : -f * std::sin(v * gamma);
    }
    const double plus = u * alpha + v * gamma;
    const double minus = u * alpha - v * gamma;
    if (row > 0 && col > 0) return s1 * dp * std::cos(plus) + s2 * dm * std::cos(minus);
    if (row > 0 && col < 0) return -s1 * dp * std::sin(plus) + s2 * dm * std::sin(minus);
    if (row < 0 && col > 0) return s1 * dp * std::sin(plus) + s2 * dm * std::sin(minus);
    return s1 * dp * std::cos(plus) - s2 * dm * std::cos(minus);
}

}  // namespace

double eval_basis(const BasisIndex& idx, const ManifoldPoint& p) {
    if (!valid_index(idx)) bad_index(idx);
    if (idx.manifold != p.manifold)
        throw std::invalid_argument("eval_basis: index and point on different manifolds");
    const int l = idx.degree;
    switch (idx.manifold) {
        case Manifold::S1: {
            if (l == 0) return 1.0;
            return idx.row > 0 ? kSqrt2 * std::cos(l * p.theta()) : kSqrt2 * std::sin(l * p.theta());
        }
        case Manifold::S2: {
            const int m = std::abs(idx.row);
            std::vector<double> col(l - m + 1);
            legendre_column(m, std::cos(p.beta()), l, col);
            const double pb = col.back();
            if (idx.row == 0) return pb;
            return idx.row > 0 ? kSqrt2 * pb * std::cos(m * p.phi())
                               : kSqrt2 * pb * std::sin(m * p.phi());
        }
        case Manifold::SO3: {
            const double scale = std::sqrt(2.0 * l + 1.0);
            return scale * so3_element(l, idx.row, idx.col, p.alpha(), p.beta(), p.gamma());
        }
    }
    bad_index(idx);
}

namespace {

// One point, one degree, values in canonical column order. `scratch` holds
// reusable buffers to keep block evaluation allocation-free per point.
struct DegreeScratch {
    std::vector<double> leg;
    std::vector<double> dp;
    std::vector<double> dm;
    std::vector<double> cos_a, sin_a, cos_g, sin_g;
};

void fill_trig(int lmax, double angle, std::vector<double>& c, std::vector<double>& s) {
    c.resize(lmax + 1);
    s.resize(lmax + 1);
    for (int k = 0; k <= lmax; ++k) {
        c[k] = std::cos(k * angle);
        s[k] = std::sin(k * angle);
    }
}

void eval_degree_s2(int degree, const ManifoldPoint& p, DegreeScratch& sc, std::span<double> out) {
    const double x = std::cos(p.beta());
    fill_trig(degree, p.phi(), sc.cos_a, sc.sin_a);
    sc.leg.resize(degree + 1);
    for (int m = 0; m <= degree; ++m) {
        std::vector<double> col(degree - m + 1);
        legendre_column(m, x, degree, col);
        sc.leg[m] = col.back();
    }
    out[degree] = sc.leg[0];
    for (int m = 1; m <= degree; ++m) {
        out[degree + m] = kSqrt2 * sc.leg[m] * sc.cos_a[m];
        out[degree - m] = kSqrt2 * sc.leg[m] * sc.sin_a[m];
    }
}

void eval_degree_so3(int degree, const ManifoldPoint& p, DegreeScratch& sc,
                     std::span<double> out) {
    const int d = 2 * degree + 1;
    const double scale = std::sqrt(2.0 * degree + 1.0);
    fill_trig(degree, p.alpha(), sc.cos_a, sc.sin_a);
    fill_trig(degree, p.gamma(), sc.cos_g, sc.sin_g);
    // d^degree_{u,v} and d^degree_{u,-v} for u,v >= 0
    sc.dp.assign(static_cast<size_t>(degree + 1) * (degree + 1), 0.0);
    sc.dm.assign(static_cast<size_t>(degree + 1) * (degree + 1), 0.0);
    std::vector<double> seq;
    for (int u = 0; u <= degree; ++u) {
        for (int v = 0; v <= degree; ++v) {
            const int l0 = std::max(u, v);
            seq.resize(degree - l0 + 1);
            wigner_d_sequence(u, v, p.beta(), degree, seq);
            sc.dp[static_cast<size_t>(u) * (degree + 1) + v] = seq.back();
            wigner_d_sequence(u, -v, p.beta(), degree, seq);
            sc.dm[static_cast<size_t>(u) * (degree + 1) + v] = seq.back();
        }
    }
    auto at = [&](std::span<double> o, int row, int col) -> double& {
        return o[static_cast<size_t>(row + degree) * d + (col + degree)];
    };
    for (int u = 0; u <= degree; ++u) {
        for (int v = 0; v <= degree; ++v) {
            const double dp = sc.dp[static_cast<size_t>(u) * (degree + 1) + v];
            const double dm = sc.dm[static_cast<size_t>(u) * (degree + 1) + v];
            const double s1 = ((u + v) % 2 == 0) ? 1.0 : -1.0;
            const double s2 = (u % 2 == 0) ? 1.0 : -1.0;
            if (u == 0 && v == 0) {
                at(out, 0, 0) = scale * dp;
            } else if (v == 0) {
                at(out, u, 0) = scale * s2 * kSqrt2 * dp * sc.cos_a[u];
                at(out, -u, 0) = scale * s2 * kSqrt2 * dp * sc.sin_a[u];
            } else if (u == 0) {
                const double sv = (v % 2 == 0) ? 1.0 : -1.0;
                at(out, 0, v) = scale * sv * kSqrt2 * dp * sc.cos_g[v];
                at(out, 0, -v) = -scale * sv * kSqrt2 * dp * sc.sin_g[v];
            } else {
                const double cp = sc.cos_a[u] * sc.cos_g[v] - sc.sin_a[u] * sc.sin_g[v];
                const double sp = sc.sin_a[u] * sc.cos_g[v] + sc.cos_a[u] * sc.sin_g[v];
                const double cm = sc.cos_a[u] * sc.cos_g[v] + sc.sin_a[u] * sc.sin_g[v];
                const double sm = sc.sin_a[u] * sc.cos_g[v] - sc.cos_a[u] * sc.sin_g[v];
                at(out, u, v) = scale * (s1 * dp * cp + s2 * dm * cm);
                at(out, u, -v) = scale * (-s1 * dp * sp + s2 * dm * sm);
                at(out, -u, v) = scale * (s1 * dp * sp + s2 * dm * sm);
                at(out, -u, -v) = scale * (s1 * dp * cp - s2 * dm * cm);
            }
        }
    }
}

void eval_degree(Manifold m, int degree, const ManifoldPoint& p, DegreeScratch& sc,
                 std::span<double> out) {
    switch (m) {
        case Manifold::S1:
            if (degree == 0) {
                out[0] = 1.0;
            } else {
                out[0] = kSqrt2 * std::cos(degree * p.theta());
                out[1] = kSqrt2 * std::sin(degree * p.theta());
            }
            return;
        case Manifold::S2:
            eval_degree_s2(degree, p, sc, out);
            return;
        case Manifold::SO3:
            eval_degree_so3(degree, p, sc, out);
            return;
    }
}

}  // namespace

Matrix eval_basis_block(Manifold m, int degree, std::span<const ManifoldPoint> points) {
    if (degree < 0) throw std::invalid_argument("eval_basis_block: negative degree");
    for (const auto& p : points)
        if (p.manifold != m)
            throw std::invalid_argument("eval_basis_block: point on wrong manifold");
    const int cols = degree_count(m, degree);
    Matrix out(static_cast<int>(points.size()), cols);
    DegreeScratch sc;
#pragma omp parallel for schedule(dynamic, 16) firstprivate(sc)
    for (long i = 0; i < static_cast<long>(points.size()); ++i) {
        eval_degree(m, degree, points[i], sc,
                    std::span<double>(out.data.data() + i * static_cast<long>(cols), cols));
    }
    return out;
}

void eval_basis_row(const ManifoldPoint& p, int L, std::span<double> out) {
    if (static_cast<long>(out.size()) < basis_count(p.manifold, L))
        throw std::invalid_argument("eval_basis_row: output too small");
    if (p.manifold == Manifold::S2) {
        // Shared Legendre recurrences across degrees: one column per order m.
        const double x = std::cos(p.beta());
        std::vector<double> col(L + 1);
        std::vector<double> cs(L + 1), sn(L + 1);
        for (int k = 0; k <= L; ++k) {
            cs[k] = std::cos(k * p.phi());
            sn[k] = std::sin(k * p.phi());
        }
        for (int m = 0; m <= L; ++m) {
            legendre_column(m, x, L, std::span<double>(col.data(), L - m + 1));
            for (int l = m; l <= L; ++l) {
                const long off = degree_offset(Manifold::S2, l) + l;
                const double pb = col[l - m];
                if (m == 0) {
                    out[off] = pb;
                } else {
                    out[off + m] = kSqrt2 * pb * cs[m];
                    out[off - m] = kSqrt2 * pb * sn[m];
                }
            }
        }
        return;
    }
    DegreeScratch sc;
    for (int l = 0; l <= L; ++l) {
        const long off = degree_offset(p.manifold, l);
        eval_degree(p.manifold, l, p, sc,
                    std::span<double>(out.data() + off, degree_count(p.manifold, l)));
    }
}

// --- rotations ----------------------------------------------------------------

Mat3 rotation_matrix(const ManifoldPoint& g) {
    if (g.manifold != Manifold::SO3)
        throw std::invalid_argument("rotation_matrix: not an SO(3) point");
    const double ca = std::cos(g.alpha()), sa = std::sin(g.alpha());
    const double cb = std::cos(g.beta()), sb = std::sin(g.beta());
    const double cg = std::cos(g.gamma()), sg = std::sin(g.gamma());
    // Rz(alpha) Ry(beta) Rz(gamma)
    return Mat3{ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb,
                sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb,
                -sb * cg,               sb * sg,                 cb};
}

ManifoldPoint rotation_from_matrix(const Mat3& r) {
    const double cb = std::clamp(r[8], -1.0, 1.0);
    const double beta = std::acos(cb);
    double alpha, gamma;
    const double sb = std::sqrt(std::max(0.0, 1.0 - cb * cb));
    if (sb > 1e-12) {
        alpha = std::atan2(r[5], r[2]);
        gamma = std::atan2(r[7], -r[6]);
    } else {
        // beta ~ 0 or pi: only alpha +/- gamma is determined
        alpha = (cb > 0) ? std::atan2(r[3], r[0]) : std::atan2(-r[3], -r[0]);
        gamma = 0.0;
    }
    return ManifoldPoint::rotation(alpha, beta, gamma);
}

ManifoldPoint compose(const ManifoldPoint& g, const ManifoldPoint& h) {
    const Mat3 a = rotation_matrix(g);
    const Mat3 b = rotation_matrix(h);
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
            c[i * 3 + j] = s;
        }
    return rotation_from_matrix(c);
}

ManifoldPoint inverse(const ManifoldPoint& g) {
    return ManifoldPoint::rotation(-g.gamma(), -g.beta(), -g.alpha());
}

double geodesic_distance(const ManifoldPoint& g, const ManifoldPoint& h) {
    const Mat3 a = rotation_matrix(g);
    const Mat3 b = rotation_matrix(h);
    double tr = 0.0;  // trace(a^T b)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tr += a[j * 3 + i] * b[j * 3 + i];
    return std::acos(std::clamp(0.5 * (tr - 1.0), -1.0, 1.0));
}

ManifoldPoint rotate_point(const ManifoldPoint& g, const ManifoldPoint& p) {
    if (p.manifold != Manifold::S2)
        throw std::invalid_argument("rotate_point: not a sphere point");
    const Mat3 r = rotation_matrix(g);
    const double sb = std::sin(p.beta());
    const double v[3] = {sb * std::cos(p.phi()), sb * std::sin(p.phi()), std::cos(p.beta())};
    double w[3];
    for (int i = 0; i < 3; ++i)
        w[i] = r[i * 3 + 0] * v[0] + r[i * 3 + 1] * v[1] + r[i * 3 + 2] * v[2];
    const double beta = std::acos(std::clamp(w[2], -1.0, 1.0));
    const double phi = std::atan2(w[1], w[0]);
    return ManifoldPoint::sphere(beta, phi);
}

}  // namespace hef
