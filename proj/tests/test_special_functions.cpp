#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "hef/special_functions.hpp"
#include "hef/transforms.hpp"
#include "oracles.hpp"

using namespace hef;
using oracles::kPi;

TEST_CASE("canonical ordering round-trips and counts") {
    CHECK(basis_count(Manifold::S1, 3) == 7);
    CHECK(basis_count(Manifold::S2, 3) == 16);
    CHECK(basis_count(Manifold::SO3, 2) == 1 + 9 + 25);
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        const long J = basis_count(m, 4);
        for (long i = 0; i < J; ++i) {
            const BasisIndex idx = basis_from_linear(m, i);
            CHECK(valid_index(idx));
            CHECK(linear_index(idx) == i);
        }
    }
    CHECK_THROWS_AS(linear_index(BasisIndex{Manifold::S2, 2, 3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_index(BasisIndex{Manifold::SO3, 1, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(linear_index(BasisIndex{Manifold::S1, 1, 0, 0}), std::invalid_argument);
}

TEST_CASE("point reduction lands in canonical ranges and keeps the point") {
    const ManifoldPoint p = ManifoldPoint::sphere(-0.3, 1.0);
    CHECK(p.beta() == doctest::Approx(0.3));
    CHECK(p.phi() == doctest::Approx(1.0 + kPi));
    // Same geometric point: every low-degree basis value agrees.
    const ManifoldPoint q = ManifoldPoint::sphere(2.0 * kPi - 0.3, 1.0 + kPi);
    for (long i = 0; i < basis_count(Manifold::S2, 3); ++i) {
        const BasisIndex idx = basis_from_linear(Manifold::S2, i);
        CHECK(eval_basis(idx, p) == doctest::Approx(eval_basis(idx, q)).epsilon(1e-12));
    }
    // Rotation reduction: the reduced Euler triple is the same group element.
    const ManifoldPoint g = ManifoldPoint::rotation(0.4, -1.1, 5.0);
    CHECK(g.beta() >= 0.0);
    CHECK(g.beta() <= kPi);
    const Mat3 direct = rotation_matrix(ManifoldPoint::rotation(0.4, 0.0, 0.0));
    (void)direct;
    const ManifoldPoint lifted = ManifoldPoint::rotation(0.4 + kPi, 1.1, 5.0 + kPi);
    CHECK(geodesic_distance(g, lifted) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("constant basis function is exactly one") {
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        for (const auto& p : oracles::random_points(m, 25, 7)) {
            CHECK(eval_basis(BasisIndex{m, 0, 0, 0}, p) == 1.0);
        }
    }
}

TEST_CASE("named low-degree values") {
    CHECK(eval_basis(BasisIndex{Manifold::S1, 3, 1, 0}, ManifoldPoint::circle(0.0)) ==
          doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
    // sqrt(5) P_2(0) with P_2(x) = (3x^2 - 1) / 2
    const double expected = std::sqrt(5.0) * (3.0 * 0.0 - 1.0) / 2.0;
    CHECK(eval_basis(BasisIndex{Manifold::S2, 2, 0, 0}, ManifoldPoint::sphere(kPi / 2, 0.3)) ==
          doctest::Approx(expected).epsilon(1e-13));
    for (double beta : {0.1, 0.7, 1.9, 2.9}) {
        CHECK(eval_basis(BasisIndex{Manifold::SO3, 1, 0, 0},
                         ManifoldPoint::rotation(0.0, beta, 0.0)) ==
              doctest::Approx(std::sqrt(3.0) * std::cos(beta)).epsilon(1e-13));
    }
}

TEST_CASE("degree-2 Legendre column matches the explicit normalized formula") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double x = unit(rng);
        std::vector<double> col(3);
        legendre_column(0, x, 2, col);
        CHECK(col[0] == doctest::Approx(1.0));
        CHECK(col[1] == doctest::Approx(std::sqrt(3.0) * x).epsilon(1e-14));
        CHECK(col[2] ==
              doctest::Approx(std::sqrt(5.0) * oracles::legendre_p(2, x)).epsilon(1e-13));
    }
}

TEST_CASE("wigner_d degree 0 and 1") {
    const Matrix d0 = wigner_d(0, 1.234);
    CHECK(d0.rows == 1);
    CHECK(d0(0, 0) == doctest::Approx(1.0));

    for (double beta : {0.0, 0.4, kPi / 2, 2.5, kPi}) {
        const Matrix d1 = wigner_d(1, beta);
        const auto ref = oracles::wigner_d1_from_rotation(beta);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                CHECK(ref[static_cast<size_t>(r) * 3 + c].imag() ==
                      doctest::Approx(0.0).epsilon(1e-14));
                CHECK(d1(r, c) ==
                      doctest::Approx(ref[static_cast<size_t>(r) * 3 + c].real()).epsilon(1e-13));
            }
    }
    const Matrix dm = wigner_d(1, kPi / 2);
    CHECK(dm(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("wigner_d is orthogonal across degrees") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    for (int l : {2, 5, 17, 64}) {
        const Matrix d = wigner_d(l, ang(rng));
        const int n = 2 * l + 1;
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += d(r, k) * d(c, k);
                CHECK(s == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-10));
            }
        // identity at beta = 0
        const Matrix id = wigner_d(l, 0.0);
        for (int r = 0; r < n; ++r) CHECK(id(r, r) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("wigner_d survives degree 512 without overflow") {
    const Matrix d = wigner_d(512, 0.9);
    const int n = 2 * 512 + 1;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            CHECK(std::isfinite(d(r, c)));
            CHECK(std::abs(d(r, c)) <= 1.0 + 1e-9);
        }
    // spot-check orthogonality on a few row pairs
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int rep = 0; rep < 20; ++rep) {
        const int r = pick(rng), c = pick(rng);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += d(r, k) * d(c, k);
        CHECK(s == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("degree-1 block is the rotation matrix in the (y, z, x) basis") {
    // row/col order (-1, 0, +1) corresponds to the Cartesian axes (y, z, x)
    const int perm[3] = {1, 2, 0};
    for (const auto& g : oracles::random_points(Manifold::SO3, 20, 31)) {
        const Mat3 r = rotation_matrix(g);
        const ManifoldPoint pts[1] = {g};
        const Matrix block = eval_basis_block(Manifold::SO3, 1, pts);
        const double inv = 1.0 / std::sqrt(3.0);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                CHECK(block(0, a * 3 + b) * inv ==
                      doctest::Approx(r[perm[a] * 3 + perm[b]]).epsilon(1e-12));
            }
    }
}

TEST_CASE("eval_basis_block matches eval_basis elementwise") {
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        const auto pts = oracles::random_points(m, 7, 43);
        for (int l : {0, 1, 2, 5}) {
            const Matrix block = eval_basis_block(m, l, pts);
            CHECK(block.rows == 7);
            CHECK(block.cols == degree_count(m, l));
            for (int i = 0; i < block.rows; ++i)
                for (int c = 0; c < block.cols; ++c) {
                    BasisIndex idx = basis_from_linear(m, degree_offset(m, l) + c);
                    const double direct = eval_basis(idx, pts[i]);
                    CHECK(block(i, c) ==
                          doctest::Approx(direct).epsilon(1e-12).scale(std::abs(direct) + 1.0));
                }
        }
        // empty point list: empty matrix, not an error
        const Matrix empty = eval_basis_block(m, 1, std::span<const ManifoldPoint>());
        CHECK(empty.rows == 0);
    }
}

TEST_CASE("eval_basis_row agrees with eval_basis") {
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        const int L = 5;
        const long J = basis_count(m, L);
        std::vector<double> row(J);
        for (const auto& p : oracles::random_points(m, 5, 97)) {
            eval_basis_row(p, L, row);
            for (long i = 0; i < J; ++i) {
                const double direct = eval_basis(basis_from_linear(m, i), p);
                CHECK(row[i] ==
                      doctest::Approx(direct).epsilon(1e-12).scale(std::abs(direct) + 1.0));
            }
        }
    }
}

TEST_CASE("degree-200 sphere block stays within the unitarity bound") {
    const auto pts = oracles::random_points(Manifold::S2, 5780, 2020);
    const Matrix block = eval_basis_block(Manifold::S2, 200, pts);
    const double bound = std::sqrt(2.0 * 200 + 1.0);
    double maxabs = 0.0;
    for (double v : block.data) {
        REQUIRE(std::isfinite(v));
        maxabs = std::max(maxabs, std::abs(v));
    }
    CHECK(maxabs <= bound + 1e-9);
}

TEST_CASE("recurrence stability bound up to degree 512") {
    std::mt19937 rng(321);
    std::uniform_int_distribution<int> degree_pick(1, 512);
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        const auto pts = oracles::random_points(m, 300, 55);
        for (const auto& p : pts) {
            const int l = degree_pick(rng);
            BasisIndex idx{m, l, 0, 0};
            if (m == Manifold::S1) {
                idx.row = (l % 2 == 0) ? 1 : -1;
            } else {
                std::uniform_int_distribution<int> mm(-l, l);
                idx.row = mm(rng);
                if (m == Manifold::SO3) idx.col = mm(rng);
            }
            const double v = eval_basis(idx, p);
            REQUIRE(std::isfinite(v));
            CHECK(std::abs(v) <= std::sqrt(static_cast<double>(degree_count(m, l))) + 1e-6);
        }
    }
}

TEST_CASE("weighted Gram matrix of the basis is the identity") {
    const int L = 4;
    for (Manifold m : {Manifold::S1, Manifold::S2, Manifold::SO3}) {
        const GridSpec spec = make_grid(m, L + 1);
        const long J = basis_count(m, L);
        std::vector<double> gram(static_cast<size_t>(J) * J, 0.0);
        std::vector<double> row(J);
        for (long node = 0; node < spec.node_count(); ++node) {
            eval_basis_row(spec.point(node), L, row);
            const double w = spec.weight(node);
            for (long i = 0; i < J; ++i)
                for (long j = i; j < J; ++j) gram[i * J + j] += w * row[i] * row[j];
        }
        for (long i = 0; i < J; ++i)
            for (long j = i; j < J; ++j)
                CHECK(gram[i * J + j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("sphere basis equals the n = 0 column of the rotation-group basis") {
    for (const auto& p : oracles::random_points(Manifold::S2, 30, 77)) {
        const ManifoldPoint g = ManifoldPoint::rotation(p.phi(), p.beta(), 0.0);
        for (int l = 0; l <= 4; ++l)
            for (int m = -l; m <= l; ++m) {
                const double s2 = eval_basis(BasisIndex{Manifold::S2, l, m, 0}, p);
                const double so3 = eval_basis(BasisIndex{Manifold::SO3, l, m, 0}, g);
                CHECK(s2 == doctest::Approx(so3).epsilon(1e-11).scale(std::abs(s2) + 1.0));
            }
    }
}

TEST_CASE("rotation matrix round trip and composition") {
    const auto gs = oracles::random_points(Manifold::SO3, 25, 123);
    for (const auto& g : gs) {
        const ManifoldPoint back = rotation_from_matrix(rotation_matrix(g));
        CHECK(geodesic_distance(g, back) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(geodesic_distance(compose(g, inverse(g)),
                                ManifoldPoint::rotation(0, 0, 0)) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    // compose matches matrix product via the rotation action on points
    const ManifoldPoint g = gs[0], h = gs[1];
    const ManifoldPoint p = ManifoldPoint::sphere(1.1, 0.4);
    const ManifoldPoint lhs = rotate_point(compose(g, h), p);
    const ManifoldPoint rhs = rotate_point(g, rotate_point(h, p));
    CHECK(lhs.beta() == doctest::Approx(rhs.beta()).epsilon(1e-10));
}
