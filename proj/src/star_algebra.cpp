#include "ncg/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ncg {

namespace {

// Incremental orthonormal span of vectorised matrices.
class SpanBuilder {
public:
    SpanBuilder(int n, double thr) : n_(n), thr_(thr), basis_(static_cast<Eigen::Index>(n) * n, 0) {}

    // `scale` is the size the candidate would have without cancellation; defaults to its own norm
    bool add(const Mat& x, double scale = -1.0) {
        Vec v = vec(x);
        double nv = v.norm();
        if (!(nv > 1e-300)) return false;
        if (scale < 0.0) scale = nv;
        for (int pass = 0; pass < 2; ++pass) {
            if (basis_.cols()) v -= basis_ * (basis_.adjoint() * v);
        }
        double r = v.norm();
        if (r <= thr_ * scale) return false;
        basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
        basis_.col(basis_.cols() - 1) = v / r;
        return true;
    }

    int size() const { return static_cast<int>(basis_.cols()); }
    Mat element(int k) const { return unvec(basis_.col(k), n_, n_); }

private:
    int n_;
    double thr_;
    Mat basis_;
};

double span_threshold(const Tolerance& tol) { return std::max(tol.rank_cut * 100.0, 1e-12); }

Mat ad_gram(const std::vector<Mat>& ops, int n) {
    const int nn = n * n;
    Mat g = Mat::Zero(nn, nn);
    Mat id = identity(n);
    for (const Mat& b : ops) {
        Mat bbar = b.conjugate();
        Mat bt = b.transpose();
        g += kron(bbar * bt, id) - kron(bbar, b) - kron(bt, b.adjoint()) + kron(id, b.adjoint() * b);
    }
    return g;
}

AlgebraBasis from_columns(const Mat& cols, int n) {
    AlgebraBasis out;
    out.hilbert_dim = n;
    for (Eigen::Index k = 0; k < cols.cols(); ++k) out.basis.push_back(unvec(cols.col(k), n, n));
    out.unital = true;
    return out;
}

}  // namespace

Mat AlgebraBasis::coords() const {
    Mat c(static_cast<Eigen::Index>(hilbert_dim) * hilbert_dim, size());
    for (int k = 0; k < size(); ++k) c.col(k) = vec(basis[static_cast<std::size_t>(k)]);
    return c;
}

Vec AlgebraBasis::coefficients(const Mat& x) const {
    Vec c(size());
    for (int k = 0; k < size(); ++k) c(k) = (basis[static_cast<std::size_t>(k)].adjoint() * x).trace();
    return c;
}

Mat AlgebraBasis::element(const Vec& coeffs) const {
    Mat out = Mat::Zero(hilbert_dim, hilbert_dim);
    for (int k = 0; k < size(); ++k) out += coeffs(k) * basis[static_cast<std::size_t>(k)];
    return out;
}

Mat AlgebraBasis::project(const Mat& x) const { return element(coefficients(x)); }

double AlgebraBasis::membership_residual(const Mat& x) const {
    return (x - project(x)).norm() / std::max(1.0, x.norm());
}

AlgebraBasis generate_algebra(const std::vector<Mat>& generators, bool with_unit, const Tolerance& tol, int dim) {
    int n = dim;
    for (const Mat& g : generators) {
        if (!is_square(g)) throw NcgError("generate_algebra: generator is not square");
        if (n < 0) n = static_cast<int>(g.rows());
        if (g.rows() != n) throw NcgError("generate_algebra: generator dimension mismatch");
    }
    if (n < 0) throw NcgError("generate_algebra: empty generator list needs an explicit dimension");

    SpanBuilder span(n, span_threshold(tol));
    AlgebraBasis out;
    out.hilbert_dim = n;
    out.unital = with_unit;
    if (with_unit) span.add(identity(n));
    for (std::size_t i = 0; i < generators.size(); ++i) {
        bool grew = span.add(generators[i]);
        grew = span.add(generators[i].adjoint()) || grew;
        if (grew) out.generators.push_back(static_cast<int>(i));
    }

    // Every new element is multiplied against everything seen so far, so the span closes.
    int processed = 0;
    int rounds = 0;
    const int cap = n * n;
    while (processed < span.size()) {
        if (++rounds > cap * cap + 1) throw NcgError("generate_algebra: closure did not stabilise");
        Mat x = span.element(processed);
        span.add(x.adjoint(), 1.0);
        for (int j = 0; j <= processed; ++j) {
            Mat y = span.element(j);
            span.add(x * y, 1.0);
            span.add(y * x, 1.0);
        }
        ++processed;
        if (span.size() > cap) throw NcgError("generate_algebra: dimension exceeded n^2");
    }
    for (int k = 0; k < span.size(); ++k) out.basis.push_back(span.element(k));
    return out;
}

AlgebraBasis algebra_from_span(const std::vector<Mat>& span, const Tolerance& tol) {
    AlgebraBasis out;
    if (span.empty()) return out;
    out.hilbert_dim = static_cast<int>(span[0].rows());
    out.basis = span_basis(span, tol);
    out.unital = out.membership_residual(identity(out.hilbert_dim)) < tol.rel;
    return out;
}

AlgebraBasis commutant_of(const std::vector<Mat>& ops, int n, const Tolerance& tol) {
    if (ops.empty()) {
        Mat full = identity(n * n);
        return from_columns(full, n);
    }
    Mat g = ad_gram(ops, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const RVec& ev = es.eigenvalues();
    double top = std::max(std::abs(ev(ev.size() - 1)), 1e-300);
    int k = 0;
    while (k < ev.size() && ev(k) <= tol.rank_cut * top) ++k;
    return from_columns(es.eigenvectors().leftCols(k), n);
}

AlgebraBasis commutant(const AlgebraBasis& alg, const Tolerance& tol) {
    return commutant_of(alg.basis, alg.hilbert_dim, tol);
}

std::vector<Mat> center(const AlgebraBasis& alg, const Tolerance& tol) {
    const int k = alg.size();
    const int n = alg.hilbert_dim;
    if (k == 0) return {};
    Mat sys(static_cast<Eigen::Index>(k) * n * n, k);
    for (int c = 0; c < k; ++c) {
        for (int j = 0; j < k; ++j)
            sys.block(static_cast<Eigen::Index>(j) * n * n, c, n * n, 1) =
                vec(comm(alg.basis[static_cast<std::size_t>(c)], alg.basis[static_cast<std::size_t>(j)]));
    }
    Mat ns = null_space(sys, std::sqrt(tol.rank_cut));
    std::vector<Mat> out;
    for (Eigen::Index c = 0; c < ns.cols(); ++c) out.push_back(alg.element(ns.col(c)));
    return out;
}

std::vector<Mat> intersect(const AlgebraBasis& a, const std::vector<Mat>& b, const Tolerance& tol) {
    if (b.empty() || a.size() == 0) return {};
    auto bb = span_basis(b, tol);
    Mat cols(static_cast<Eigen::Index>(a.hilbert_dim) * a.hilbert_dim, static_cast<Eigen::Index>(bb.size()));
    for (std::size_t l = 0; l < bb.size(); ++l) cols.col(static_cast<Eigen::Index>(l)) = vec(bb[l] - a.project(bb[l]));
    Mat ns = null_space(cols, std::sqrt(tol.rank_cut));
    if (cols.norm() == 0.0) ns = identity(static_cast<int>(bb.size()));
    std::vector<Mat> out;
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
        Mat x = Mat::Zero(a.hilbert_dim, a.hilbert_dim);
        for (std::size_t l = 0; l < bb.size(); ++l) x += ns(static_cast<Eigen::Index>(l), c) * bb[l];
        out.push_back(x);
    }
    return out;
}

GradedSplit graded_split(const AlgebraBasis& alg, const Mat& eps, const Tolerance& tol) {
    const int n = alg.hilbert_dim;
    if (eps.rows() != n || eps.cols() != n) throw NcgError("graded_split: grading has wrong shape");
    if (herm_defect(eps) > tol.rel || operator_norm(eps * eps - identity(n)) > tol.rel)
        throw NcgError("graded_split: grading is not a self-adjoint involution");
    const int k = alg.size();
    Mat g(k, k);
    for (int j = 0; j < k; ++j) {
        Mat c = eps * alg.basis[static_cast<std::size_t>(j)] * eps;
        if (alg.membership_residual(c) > tol.rel)
            throw NcgError("graded_split: conjugation by the grading leaves the algebra");
        g.col(j) = alg.coefficients(c);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(g));
    GradedSplit out;
    for (int j = 0; j < k; ++j) {
        Mat x = alg.element(es.eigenvectors().col(j));
        (es.eigenvalues()(j) > 0 ? out.even : out.odd).push_back(x);
    }
    return out;
}

double closure_defect(const AlgebraBasis& alg) {
    double worst = 0.0;
    for (const Mat& x : alg.basis) {
        worst = std::max(worst, alg.membership_residual(x.adjoint()));
        for (const Mat& y : alg.basis) worst = std::max(worst, alg.membership_residual(x * y));
    }
    return worst;
}

double span_containment(const AlgebraBasis& a, const std::vector<Mat>& b) {
    double worst = 0.0;
    for (const Mat& x : b) worst = std::max(worst, a.membership_residual(x));
    return worst;
}

Seminorms seminorm_diagnostics(const AlgebraBasis& alg, const Mat& dirac) {
    Seminorms s;
    for (const Mat& b : alg.basis) {
        s.q0 = std::max(s.q0, operator_norm(b));
        s.q1 = std::max(s.q1, operator_norm(comm(dirac, b)));
    }
    return s;
}

}  // namespace ncg
