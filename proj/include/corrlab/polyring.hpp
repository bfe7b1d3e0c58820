#pragma once

#include <span>
#include <vector>

#include "corrlab/common.hpp"
#include "corrlab/moebius.hpp"

namespace corrlab {

// Univariate polynomial over C, coefficients ascending by degree. The empty
// coefficient list is the zero polynomial. Construction trims trailing
// coefficients below drop_tol relative to the largest one.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<cplx> coeffs, double drop_tol = 1e-12);

    static ComplexPoly zero() { return ComplexPoly(); }
    static ComplexPoly one() { return ComplexPoly({cplx(1.0)}); }
    static ComplexPoly monomial(int degree, cplx lc = cplx(1.0));
    static ComplexPoly from_roots(std::span<const cplx> roots, cplx lc = cplx(1.0));

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    cplx coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : cplx(0.0); }
    cplx lc() const { return c_.empty() ? cplx(0.0) : c_.back(); }
    std::span<const cplx> coeffs() const { return c_; }
    double max_abs_coeff() const;

    cplx eval(cplx x) const;
    // Homogeneous evaluation at formal degree D: sum c_i z^i w^(D-i).
    cplx eval_homog(const SpherePoint& p, int formal_degree) const;

    ComplexPoly derivative() const;
    // Coefficient reversal at a formal degree: z^D * p(1/z).
    ComplexPoly reversed(int formal_degree) const;
    // Multiplicity of the root at 0 (exact index of first retained coefficient).
    int order_at_zero() const;
    ComplexPoly shifted_down(int k) const; // divide by z^k (requires order >= k)

    ComplexPoly operator+(const ComplexPoly& o) const;
    ComplexPoly operator-(const ComplexPoly& o) const;
    ComplexPoly operator*(const ComplexPoly& o) const;
    ComplexPoly operator*(cplx s) const;

    // Long division; remainder returned through rem.
    ComplexPoly divide(const ComplexPoly& divisor, ComplexPoly* rem = nullptr) const;

private:
    std::vector<cplx> c_;
};

struct RootCluster {
    cplx center;
    int multiplicity;
    double residual; // |p(center)| relative to coefficient scale
};

struct RootOptions {
    double cluster_tol = 1e-7; // relative clustering radius for multiplicities
    int max_iterations = 400;
};

// All deg(p) roots with multiplicities, Aberth-Ehrlich iteration with a
// companion-matrix fallback. Throws ZeroPolynomial / NonConvergence.
std::vector<RootCluster> roots(const ComplexPoly& p, const RootOptions& opts = {});

// Roots in projective form at a formal degree: degree deficiency shows up as a
// root at infinity with the matching multiplicity.
std::vector<std::pair<SpherePoint, int>> projective_roots(const ComplexPoly& p, int formal_degree,
                                                          const RootOptions& opts = {});

// Resultant under the convention Res(p, q) = lc(p)^deg(q) * prod q(alpha_i).
cplx resultant(const ComplexPoly& p, const ComplexPoly& q);

// j-th principal subresultant coefficient (determinant definition); formal
// degrees default to the actual ones. scale_out, when given, receives the
// Hadamard bound of the determinant for relative smallness tests.
cplx subresultant_coeff(const ComplexPoly& p, const ComplexPoly& q, int j,
                        double* scale_out = nullptr);
cplx subresultant_coeff(const ComplexPoly& p, const ComplexPoly& q, int j, int formal_deg_p,
                        int formal_deg_q, double* scale_out = nullptr);

// Approximate gcd: subresultant ranks pick the degree, matched root clusters
// build the (monic) factor. Degree-0 result is 1 for coprime inputs.
ComplexPoly gcd_approx(const ComplexPoly& p, const ComplexPoly& q, double tol);

// Bivariate polynomial; coefficient of x^i y^j at (i, j). Trimmed so declared
// bidegree matches matrix extents.
class BivarPoly {
public:
    BivarPoly() = default;
    BivarPoly(int deg_x, int deg_y); // zero-filled
    static BivarPoly from_coeffs(std::vector<std::vector<cplx>> rows, double drop_tol = 1e-12);

    int deg_x() const { return nx_ - 1; }
    int deg_y() const { return ny_ - 1; }
    bool is_zero() const { return nx_ == 0; }

    cplx coeff(int i, int j) const;
    void set_coeff(int i, int j, cplx v);

    double max_abs_coeff() const;
    BivarPoly trimmed(double drop_tol = 1e-12) const;
    BivarPoly transposed() const;
    BivarPoly operator-(const BivarPoly& o) const;
    BivarPoly operator*(const BivarPoly& o) const;

    cplx eval(cplx x, cplx y) const;
    // Homogeneous evaluation in both slots at the declared bidegree.
    cplx eval_homog(const SpherePoint& x, const SpherePoint& y) const;

    // Specialization at projective x: coefficients of the y-polynomial
    // sum_i c_ij X^i W^(deg_x - i), formal y-degree = deg_y.
    ComplexPoly specialize_x(const SpherePoint& x) const;
    ComplexPoly specialize_y(const SpherePoint& y) const;
    ComplexPoly diagonal() const; // Q(x, x)
    BivarPoly partial_x() const;
    BivarPoly partial_y() const;

    // x-polynomial with y-polynomial coefficients; row i = coeff of x^i.
    ComplexPoly x_row(int i) const;

private:
    int nx_ = 0, ny_ = 0;
    std::vector<cplx> c_; // c_[i * ny_ + j]

    friend BivarPoly tensor_difference(const ComplexPoly&, const ComplexPoly&, const ComplexPoly&,
                                       const ComplexPoly&);
};

// P(x) S(y) - Q(x) T(y).
BivarPoly tensor_difference(const ComplexPoly& P, const ComplexPoly& S, const ComplexPoly& Q,
                            const ComplexPoly& T);

// Exact long division in x with coefficients in C[y]; every intermediate
// division by the leading y-coefficient of L must leave a relative remainder
// below tol, else NotDivisible.
BivarPoly divide_out_bivar(const BivarPoly& N, const BivarPoly& L, double tol);

} // namespace corrlab
