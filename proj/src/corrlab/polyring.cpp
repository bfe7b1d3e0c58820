#include "corrlab/polyring.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace corrlab {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs, double drop_tol) : c_(std::move(coeffs)) {
    double m = 0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    if (m == 0.0) {
        c_.clear();
        return;
    }
    size_t last = 0;
    for (size_t i = 0; i < c_.size(); ++i)
        if (std::abs(c_[i]) > drop_tol * m) last = i + 1;
    c_.resize(last);
}

ComplexPoly ComplexPoly::monomial(int degree, cplx lead) {
    std::vector<cplx> c(degree + 1, cplx(0.0));
    c.back() = lead;
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots, cplx lead) {
    std::vector<cplx> c{lead};
    for (cplx r : roots) {
        c.push_back(cplx(0.0));
        for (size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
        c[0] = -r * c[0];
    }
    return ComplexPoly(std::move(c), 0.0);
}

double ComplexPoly::max_abs_coeff() const {
    double m = 0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

cplx ComplexPoly::eval(cplx x) const {
    cplx acc(0.0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

cplx ComplexPoly::eval_homog(const SpherePoint& p, int formal_degree) const {
    // sum_i c_i z^i w^(D - i); |z|, |w| <= 1 keeps every term bounded by |c_i|.
    cplx acc(0.0);
    cplx zp(1.0);
    std::vector<cplx> wp(formal_degree + 1);
    wp[0] = cplx(1.0);
    for (int i = 1; i <= formal_degree; ++i) wp[i] = wp[i - 1] * p.w;
    for (int i = 0; i <= formal_degree; ++i) {
        acc += coeff(i) * zp * wp[formal_degree - i];
        zp *= p.z;
    }
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (c_.size() <= 1) return ComplexPoly();
    std::vector<cplx> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return ComplexPoly(std::move(d), 0.0);
}

ComplexPoly ComplexPoly::reversed(int formal_degree) const {
    std::vector<cplx> r(formal_degree + 1, cplx(0.0));
    for (int i = 0; i <= formal_degree; ++i) r[formal_degree - i] = coeff(i);
    return ComplexPoly(std::move(r), 0.0);
}

int ComplexPoly::order_at_zero() const {
    if (is_zero()) return 0;
    double m = max_abs_coeff();
    for (size_t i = 0; i < c_.size(); ++i)
        if (std::abs(c_[i]) > 1e-12 * m) return static_cast<int>(i);
    return 0;
}

ComplexPoly ComplexPoly::shifted_down(int k) const {
    if (k == 0) return *this;
    if (static_cast<int>(c_.size()) <= k) return ComplexPoly();
    std::vector<cplx> r(c_.begin() + k, c_.end());
    return ComplexPoly(std::move(r), 0.0);
}

ComplexPoly ComplexPoly::operator+(const ComplexPoly& o) const {
    std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx(0.0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return ComplexPoly(std::move(r));
}

ComplexPoly ComplexPoly::operator-(const ComplexPoly& o) const { return *this + o * cplx(-1.0); }

ComplexPoly ComplexPoly::operator*(const ComplexPoly& o) const {
    if (is_zero() || o.is_zero()) return ComplexPoly();
    std::vector<cplx> r(c_.size() + o.c_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return ComplexPoly(std::move(r));
}

ComplexPoly ComplexPoly::operator*(cplx s) const {
    std::vector<cplx> r(c_);
    for (auto& v : r) v *= s;
    return ComplexPoly(std::move(r), 0.0);
}

ComplexPoly ComplexPoly::divide(const ComplexPoly& divisor, ComplexPoly* rem) const {
    if (divisor.is_zero()) fail("ZeroPolynomial", "division by the zero polynomial");
    std::vector<cplx> r(c_.begin(), c_.end());
    int dd = divisor.degree();
    int dn = degree();
    if (dn < dd) {
        if (rem) *rem = *this;
        return ComplexPoly();
    }
    std::vector<cplx> q(dn - dd + 1, cplx(0.0));
    for (int i = dn - dd; i >= 0; --i) {
        cplx f = r[i + dd] / divisor.lc();
        q[i] = f;
        for (int j = 0; j <= dd; ++j) r[i + j] -= f * divisor.coeff(j);
    }
    r.resize(dd > 0 ? dd : 0);
    if (rem) *rem = ComplexPoly(std::move(r));
    return ComplexPoly(std::move(q));
}

namespace {

std::vector<cplx> aberth_roots(const std::vector<cplx>& c, int max_iter, bool* converged) {
    const int n = static_cast<int>(c.size()) - 1; // degree, lc nonzero
    std::vector<cplx> z(n);
    // Initial guesses on a circle sized by the Cauchy-style bound.
    double radius = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = std::abs(c[i] / c[n]);
        radius = std::max(radius, std::pow(v, 1.0 / (n - i)));
    }
    radius = std::max(radius * 1.1, 0.5);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n + 0.41;
        z[i] = radius * cplx(std::cos(th), std::sin(th));
    }

    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));

    auto eval_pd = [&](cplx x, cplx& p, cplx& dp) {
        p = c[n];
        dp = cplx(0.0);
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + c[i];
        }
    };

    *converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx p, dp;
            eval_pd(z[i], p, dp);
            double growth = std::max(1.0, std::pow(std::abs(z[i]), n));
            worst = std::max(worst, std::abs(p) / (scale * growth));
            if (std::abs(p) == 0.0) continue;
            cplx w = (std::abs(dp) > 0.0) ? p / dp : cplx(1e-3, 1e-3);
            cplx s(0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) s += cplx(1.0) / (z[i] - z[j]);
            cplx denom = cplx(1.0) - w * s;
            cplx step = (std::abs(denom) > 1e-300) ? w / denom : w;
            z[i] -= step;
        }
        if (worst < 1e-14) {
            *converged = true;
            break;
        }
    }
    return z;
}

std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) A(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) z[i] = es.eigenvalues()(i);
    return z;
}

} // namespace

std::vector<RootCluster> roots(const ComplexPoly& p, const RootOptions& opts) {
    if (p.is_zero()) fail("ZeroPolynomial", "roots of the zero polynomial");
    int zero_mult = p.order_at_zero();
    ComplexPoly q = p.shifted_down(zero_mult);
    int n = q.degree();

    std::vector<cplx> z;
    if (n > 0) {
        std::vector<cplx> c(q.coeffs().begin(), q.coeffs().end());
        bool ok = false;
        z = aberth_roots(c, opts.max_iterations, &ok);
        if (!ok) z = companion_roots(c);
        // Newton polish.
        ComplexPoly dq = q.derivative();
        for (auto& zi : z) {
            for (int it = 0; it < 3; ++it) {
                cplx pv = q.eval(zi), dv = dq.eval(zi);
                if (std::abs(dv) < 1e-300) break;
                zi -= pv / dv;
            }
        }
    }

    // Cluster within the relative tolerance; multiplicities are cluster sizes.
    std::vector<RootCluster> out;
    if (zero_mult > 0) out.push_back({cplx(0.0), zero_mult, 0.0});
    std::vector<bool> used(z.size(), false);
    double scale = q.max_abs_coeff();
    for (size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> members{i};
        used[i] = true;
        for (size_t j = i + 1; j < z.size(); ++j) {
            if (used[j]) continue;
            double tol = opts.cluster_tol * std::max(1.0, std::abs(z[i]));
            if (std::abs(z[i] - z[j]) <= tol) {
                members.push_back(j);
                used[j] = true;
            }
        }
        cplx center(0.0);
        for (size_t m : members) center += z[m];
        center /= static_cast<double>(members.size());
        double growth = std::max(1.0, std::pow(std::abs(center), n));
        double resid = std::abs(q.eval(center)) / (scale * growth);
        out.push_back({center, static_cast<int>(members.size()), resid});
    }

    for (const auto& rc : out) {
        if (rc.multiplicity == 1 && rc.residual > 1e-10)
            fail("NonConvergence", "root residual " + std::to_string(rc.residual));
    }
    return out;
}

std::vector<std::pair<SpherePoint, int>> projective_roots(const ComplexPoly& p, int formal_degree,
                                                          const RootOptions& opts) {
    std::vector<std::pair<SpherePoint, int>> out;
    if (p.is_zero()) fail("ZeroPolynomial", "projective roots of the zero polynomial");
    int inf_mult = formal_degree - p.degree();
    if (inf_mult < 0) fail("InvalidArgument", "formal degree below actual degree");
    if (inf_mult > 0) out.emplace_back(SpherePoint::infinity(), inf_mult);
    if (p.degree() > 0)
        for (const auto& rc : roots(p, opts)) out.emplace_back(SpherePoint::finite(rc.center), rc.multiplicity);
    return out;
}

namespace {

// Matrix of the determinant definition of sres_j for formal degrees (m, n):
// rows are x^(n-j-1) p .. p then x^(m-j-1) q .. q on the basis
// x^(m+n-j-1) .. x^j.
Eigen::MatrixXcd subresultant_matrix(const ComplexPoly& p, const ComplexPoly& q, int j, int m,
                                     int n) {
    int size = m + n - 2 * j;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(size, size);
    int row = 0;
    for (int s = n - j - 1; s >= 0; --s, ++row) { // x^s * p
        for (int k = 0; k <= m; ++k) {
            int deg = k + s;
            int col = (m + n - j - 1) - deg;
            if (col >= 0 && col < size) M(row, col) = p.coeff(k);
        }
    }
    for (int s = m - j - 1; s >= 0; --s, ++row) { // x^s * q
        for (int k = 0; k <= n; ++k) {
            int deg = k + s;
            int col = (m + n - j - 1) - deg;
            if (col >= 0 && col < size) M(row, col) = q.coeff(k);
        }
    }
    return M;
}

// Determinant via row/column equilibration. The scaled determinant of the
// equilibrated matrix is a conditioning-aware relative magnitude: the scale
// is the product of the scalings corrected down from the Hadamard bound to
// the typical determinant size, so genuinely nonzero subresultants sit at
// O(1) relative magnitude and roundoff zeros far below.
cplx equilibrated_determinant(Eigen::MatrixXcd M, double* scale_out) {
    const int n = static_cast<int>(M.rows());
    double logprod = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
            double r = M.row(i).norm();
            if (r > 1e-300) {
                M.row(i) /= r;
                logprod += std::log(r);
            }
        }
        for (int j = 0; j < n; ++j) {
            double c = M.col(j).norm();
            if (c > 1e-300) {
                M.col(j) /= c;
                logprod += std::log(c);
            }
        }
    }
    cplx det_eq = Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
    if (scale_out) {
        double typical = 0.5 * std::lgamma(n + 1.0) - 0.5 * n * std::log(std::max(1.0, double(n)));
        *scale_out = std::exp(logprod + typical);
    }
    return det_eq * std::exp(logprod);
}

} // namespace

cplx subresultant_coeff(const ComplexPoly& p, const ComplexPoly& q, int j, int m, int n,
                        double* scale_out) {
    if (p.is_zero() || q.is_zero()) fail("ZeroPolynomial", "subresultant of zero polynomial");
    if (j < 0 || j > std::min(m, n)) fail("IndexOutOfRange", "subresultant index");
    if (j == std::min(m, n)) {
        // By convention sres_min = lc of the lower-degree input (formal).
        if (scale_out) *scale_out = 1.0;
        return m <= n ? p.coeff(m) : q.coeff(n);
    }
    Eigen::MatrixXcd M = subresultant_matrix(p, q, j, m, n);
    return equilibrated_determinant(std::move(M), scale_out);
}

cplx subresultant_coeff(const ComplexPoly& p, const ComplexPoly& q, int j, double* scale_out) {
    return subresultant_coeff(p, q, j, p.degree(), q.degree(), scale_out);
}

cplx resultant(const ComplexPoly& p, const ComplexPoly& q) {
    if (p.is_zero() || q.is_zero()) fail("ZeroPolynomial", "resultant of zero polynomial");
    if (p.degree() == 0) return std::pow(p.coeff(0), q.degree());
    if (q.degree() == 0) return std::pow(q.coeff(0), p.degree());
    return subresultant_coeff(p, q, 0, nullptr);
}

ComplexPoly gcd_approx(const ComplexPoly& p, const ComplexPoly& q, double tol) {
    if (p.is_zero() && q.is_zero()) fail("ZeroPolynomial", "gcd of two zero polynomials");
    if (p.is_zero()) return q * (cplx(1.0) / q.lc());
    if (q.is_zero()) return p * (cplx(1.0) / p.lc());
    int m = p.degree(), n = q.degree();
    int minmn = std::min(m, n);
    if (minmn == 0) return ComplexPoly::one();

    // Degree of the gcd: the first subresultant that clearly does not vanish.
    int k = minmn;
    for (int j = 0; j < minmn; ++j) {
        double scale = 1.0;
        cplx s = subresultant_coeff(p, q, j, m, n, &scale);
        if (std::abs(s) > tol * scale) {
            k = j;
            break;
        }
    }
    if (k == 0) return ComplexPoly::one();
    if (k == minmn) {
        // One input divides the other (up to tolerance): gcd is the smaller.
        const ComplexPoly& g = (m <= n) ? p : q;
        return g * (cplx(1.0) / g.lc());
    }

    // Build the factor from matched root clusters of the two inputs.
    auto rp = roots(p);
    auto rq = roots(q);
    struct Pair {
        double dist;
        size_t ip, iq;
    };
    std::vector<Pair> pairs;
    for (size_t i = 0; i < rp.size(); ++i)
        for (size_t j = 0; j < rq.size(); ++j)
            pairs.push_back({std::abs(rp[i].center - rq[j].center), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dist < b.dist; });

    std::vector<int> left_p(rp.size()), left_q(rq.size());
    for (size_t i = 0; i < rp.size(); ++i) left_p[i] = rp[i].multiplicity;
    for (size_t j = 0; j < rq.size(); ++j) left_q[j] = rq[j].multiplicity;
    std::vector<cplx> taken;
    for (const auto& pr : pairs) {
        if (static_cast<int>(taken.size()) >= k) break;
        while (left_p[pr.ip] > 0 && left_q[pr.iq] > 0 && static_cast<int>(taken.size()) < k) {
            taken.push_back(0.5 * (rp[pr.ip].center + rq[pr.iq].center));
            --left_p[pr.ip];
            --left_q[pr.iq];
        }
    }
    if (static_cast<int>(taken.size()) < k)
        fail("NonConvergence", "could not match enough root clusters for the gcd");
    return ComplexPoly::from_roots(taken);
}

BivarPoly::BivarPoly(int deg_x, int deg_y)
    : nx_(deg_x + 1), ny_(deg_y + 1), c_(static_cast<size_t>(nx_) * ny_, cplx(0.0)) {}

BivarPoly BivarPoly::from_coeffs(std::vector<std::vector<cplx>> rows, double drop_tol) {
    int nx = static_cast<int>(rows.size());
    int ny = 0;
    for (const auto& r : rows) ny = std::max(ny, static_cast<int>(r.size()));
    BivarPoly b(nx - 1, ny - 1);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < static_cast<int>(rows[i].size()); ++j) b.set_coeff(i, j, rows[i][j]);
    return b.trimmed(drop_tol);
}

cplx BivarPoly::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return cplx(0.0);
    return c_[static_cast<size_t>(i) * ny_ + j];
}

void BivarPoly::set_coeff(int i, int j, cplx v) {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) fail("IndexOutOfRange", "bivariate coefficient");
    c_[static_cast<size_t>(i) * ny_ + j] = v;
}

double BivarPoly::max_abs_coeff() const {
    double m = 0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

BivarPoly BivarPoly::trimmed(double drop_tol) const {
    double m = max_abs_coeff();
    if (m == 0.0) return BivarPoly();
    int mx = -1, my = -1;
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            if (std::abs(coeff(i, j)) > drop_tol * m) {
                mx = std::max(mx, i);
                my = std::max(my, j);
            }
    BivarPoly out(mx, my);
    for (int i = 0; i <= mx; ++i)
        for (int j = 0; j <= my; ++j) {
            cplx v = coeff(i, j);
            out.set_coeff(i, j, std::abs(v) > drop_tol * m ? v : cplx(0.0));
        }
    return out;
}

BivarPoly BivarPoly::transposed() const {
    BivarPoly out(deg_y(), deg_x());
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) out.set_coeff(j, i, coeff(i, j));
    return out;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const {
    BivarPoly out(std::max(deg_x(), o.deg_x()), std::max(deg_y(), o.deg_y()));
    for (int i = 0; i <= out.deg_x(); ++i)
        for (int j = 0; j <= out.deg_y(); ++j) out.set_coeff(i, j, coeff(i, j) - o.coeff(i, j));
    return out;
}

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
    if (is_zero() || o.is_zero()) return BivarPoly();
    BivarPoly out(deg_x() + o.deg_x(), deg_y() + o.deg_y());
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            if (coeff(i, j) == cplx(0.0)) continue;
            for (int k = 0; k <= o.deg_x(); ++k)
                for (int l = 0; l <= o.deg_y(); ++l)
                    out.set_coeff(i + k, j + l,
                                  out.coeff(i + k, j + l) + coeff(i, j) * o.coeff(k, l));
        }
    return out;
}

cplx BivarPoly::eval(cplx x, cplx y) const {
    cplx acc(0.0);
    for (int i = nx_ - 1; i >= 0; --i) {
        cplx row(0.0);
        for (int j = ny_ - 1; j >= 0; --j) row = row * y + coeff(i, j);
        acc = acc * x + row;
    }
    return acc;
}

cplx BivarPoly::eval_homog(const SpherePoint& x, const SpherePoint& y) const {
    return specialize_x(x).eval_homog(y, deg_y());
}

ComplexPoly BivarPoly::specialize_x(const SpherePoint& x) const {
    std::vector<cplx> ycoeffs(ny_, cplx(0.0));
    // Powers of x.z and x.w up to deg_x; both moduli <= 1.
    std::vector<cplx> zp(nx_), wp(nx_);
    cplx az(1.0), aw(1.0);
    for (int i = 0; i < nx_; ++i) {
        zp[i] = az;
        wp[i] = aw;
        az *= x.z;
        aw *= x.w;
    }
    for (int j = 0; j < ny_; ++j) {
        cplx s(0.0);
        for (int i = 0; i < nx_; ++i) s += coeff(i, j) * zp[i] * wp[nx_ - 1 - i];
        ycoeffs[j] = s;
    }
    return ComplexPoly(std::move(ycoeffs));
}

ComplexPoly BivarPoly::specialize_y(const SpherePoint& y) const { return transposed().specialize_x(y); }

ComplexPoly BivarPoly::diagonal() const {
    std::vector<cplx> d(nx_ + ny_ - 1, cplx(0.0));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) d[i + j] += coeff(i, j);
    return ComplexPoly(std::move(d));
}

BivarPoly BivarPoly::partial_x() const {
    if (deg_x() <= 0) return BivarPoly();
    BivarPoly out(deg_x() - 1, deg_y());
    for (int i = 1; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) out.set_coeff(i - 1, j, coeff(i, j) * static_cast<double>(i));
    return out;
}

BivarPoly BivarPoly::partial_y() const { return transposed().partial_x().transposed(); }

ComplexPoly BivarPoly::x_row(int i) const {
    std::vector<cplx> r(ny_, cplx(0.0));
    for (int j = 0; j < ny_; ++j) r[j] = coeff(i, j);
    return ComplexPoly(std::move(r));
}

BivarPoly tensor_difference(const ComplexPoly& P, const ComplexPoly& S, const ComplexPoly& Q,
                            const ComplexPoly& T) {
    int nx = std::max(P.degree(), Q.degree()) + 1;
    int ny = std::max(S.degree(), T.degree()) + 1;
    BivarPoly out(nx - 1, ny - 1);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out.set_coeff(i, j, P.coeff(i) * S.coeff(j) - Q.coeff(i) * T.coeff(j));
    return out;
}

BivarPoly divide_out_bivar(const BivarPoly& N, const BivarPoly& L, double tol) {
    if (L.is_zero()) fail("ZeroPolynomial", "bivariate division by zero");
    if (N.is_zero()) return BivarPoly();
    int dn = N.deg_x(), dl = L.deg_x();
    if (dn < dl) fail("NotDivisible", "x-degree of numerator below divisor");
    double nscale = N.max_abs_coeff();

    ComplexPoly lead = L.x_row(dl);
    // Remainder rows as y-polynomials, mutated in place.
    std::vector<ComplexPoly> rows(dn + 1);
    for (int i = 0; i <= dn; ++i) rows[i] = N.x_row(i);
    std::vector<ComplexPoly> qrows(dn - dl + 1);

    for (int i = dn - dl; i >= 0; --i) {
        ComplexPoly rem;
        ComplexPoly s = rows[i + dl].divide(lead, &rem);
        if (rem.max_abs_coeff() > tol * std::max(nscale, 1e-300))
            fail("NotDivisible", "leading-coefficient division leaves remainder");
        qrows[i] = s;
        for (int j = 0; j <= dl; ++j) rows[i + j] = rows[i + j] - s * L.x_row(j);
    }
    for (int i = 0; i < dl; ++i)
        if (rows[i].max_abs_coeff() > tol * std::max(nscale, 1e-300))
            fail("NotDivisible", "bivariate remainder too large");

    int ny = 0;
    for (const auto& r : qrows) ny = std::max(ny, r.degree() + 1);
    BivarPoly out(dn - dl, std::max(ny - 1, 0));
    for (int i = 0; i <= dn - dl; ++i)
        for (int j = 0; j < ny; ++j) out.set_coeff(i, j, qrows[i].coeff(j));
    return out.trimmed();
}

} // namespace corrlab
