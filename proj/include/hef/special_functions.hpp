#pragma once

// Real L2-normalized matrix-element bases on the circle S^1, the sphere S^2
// and the rotation group SO(3).
//
// Conventions used throughout:
//  * All measures are normalized to total mass 1 (uniform measure on S^1,
//    sin(beta) dbeta dphi / 4pi on S^2, normalized Haar measure on SO(3)).
//  * Basis functions are real and orthonormal under these measures:
//      S^1:   {1, sqrt(2) cos(k theta), sqrt(2) sin(k theta)}
//      S^2:   real spherical harmonics scaled so that integral |T|^2 dmu = 1
//             (no Condon-Shortley phase; m>0 cosine terms, m<0 sine terms)
//      SO(3): real Wigner matrix elements scaled by sqrt(2 lambda + 1)
//  * SO(3) points use ZYZ Euler angles (alpha, beta, gamma): the rotation
//    matrix is Rz(alpha) * Ry(beta) * Rz(gamma).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hef {

enum class Manifold : std::uint8_t { S1, S2, SO3 };

const char* manifold_name(Manifold m);

// Number of basis functions with degree <= L.
// S^1: 2L+1, S^2: (L+1)^2, SO(3): sum_{l<=L} (2l+1)^2.
long basis_count(Manifold m, int L);

// Number of basis functions of one degree: 1 or 2 on S^1, 2l+1 on S^2,
// (2l+1)^2 on SO(3).
int degree_count(Manifold m, int degree);

// Offset of the first basis function of a degree in the canonical ordering
// (degree ascending; within a degree, row m ascending, then column n;
// on S^1 cosine before sine).
long degree_offset(Manifold m, int degree);

// Identifies one basis function. On S^1, row = +1 selects the cosine and
// row = -1 the sine component (col unused); on S^2, -degree <= row <= degree
// and col = 0; on SO(3), both row and col range over [-degree, degree].
struct BasisIndex {
    Manifold manifold = Manifold::S1;
    int degree = 0;
    int row = 0;
    int col = 0;
};

bool valid_index(const BasisIndex& idx);
long linear_index(const BasisIndex& idx);
BasisIndex basis_from_linear(Manifold m, long i);

// A point of one of the three manifolds. Coordinates are reduced into the
// canonical ranges on construction: angles wrap mod 2pi and the colatitude
// beta reflects into [0, pi] (adjusting the other angles so the same point
// or rotation is represented).
struct ManifoldPoint {
    Manifold manifold = Manifold::S1;
    double a = 0.0;  // theta on S^1, beta on S^2, alpha on SO(3)
    double b = 0.0;  // phi on S^2, beta on SO(3)
    double c = 0.0;  // gamma on SO(3)

    static ManifoldPoint circle(double theta);
    static ManifoldPoint sphere(double beta, double phi);
    static ManifoldPoint rotation(double alpha, double beta, double gamma);

    double theta() const { return a; }
    double beta() const { return manifold == Manifold::S2 ? a : b; }
    double phi() const { return b; }
    double alpha() const { return a; }
    double gamma() const { return c; }
};

// Row-major dense matrix, sized on construction.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// Value of one real orthonormal basis function at a point.
double eval_basis(const BasisIndex& idx, const ManifoldPoint& p);

// All basis functions of one degree at many points; one row per point,
// columns in canonical (row, col) order for that degree.
Matrix eval_basis_block(Manifold m, int degree, std::span<const ManifoldPoint> points);

// All basis functions with degree <= L at one point, in canonical order
// (including the constant lambda = 0 slot). Writes basis_count(m, L) values.
void eval_basis_row(const ManifoldPoint& p, int L, std::span<double> out);

// Wigner middle-angle factor d^l(beta): the (2l+1)x(2l+1) real orthogonal
// matrix with d^l(0) = I, indexed by (row + l, col + l). Stable for l <= 512.
Matrix wigner_d(int degree, double beta);

// d^l_{mn}(beta) for l = max(|m|,|n|) .. lmax (inclusive), written in order.
void wigner_d_sequence(int m, int n, double beta, int lmax, std::span<double> out);

// Fully normalized associated Legendre values pbar_{l,m}(cos beta) for
// l = m .. lmax, normalized so (1/2) * integral_{-1}^{1} pbar^2 dx = 1.
// No Condon-Shortley phase. Stable for l <= 512.
void legendre_column(int m, double cos_beta, int lmax, std::span<double> out);

// --- rotation utilities -----------------------------------------------------

using Mat3 = std::array<double, 9>;  // row-major 3x3

Mat3 rotation_matrix(const ManifoldPoint& g);
ManifoldPoint rotation_from_matrix(const Mat3& r);
ManifoldPoint compose(const ManifoldPoint& g, const ManifoldPoint& h);
ManifoldPoint inverse(const ManifoldPoint& g);
// Angle of the relative rotation between g and h, in [0, pi].
double geodesic_distance(const ManifoldPoint& g, const ManifoldPoint& h);
// Image of a sphere point under a rotation.
ManifoldPoint rotate_point(const ManifoldPoint& g, const ManifoldPoint& p);

// Reduce an angle into [0, 2pi).
double wrap_angle(double x);

}  // namespace hef
