#include "ncg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ncg {

bool is_square(const Mat& m) { return m.rows() == m.cols(); }

bool all_finite(const Mat& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double herm_defect(const Mat& m) { return operator_norm(m - m.adjoint()); }

EigResult herm_eig(const Mat& m, const Tolerance& tol) {
    if (!is_square(m)) throw NcgError("herm_eig: matrix is not square");
    double nm = operator_norm(m);
    if (herm_defect(m) > tol.rel * std::max(nm, 1e-300) && herm_defect(m) > 0.0)
        throw NcgError("herm_eig: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m));
    return {es.eigenvalues(), es.eigenvectors()};
}

Vec vec(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unvec(const Vec& v, int rows, int cols) { return Eigen::Map<const Mat>(v.data(), rows, cols); }

Mat range_basis(const Mat& m, double cut) {
    if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return Mat(m.rows(), 0);
    int r = 0;
    while (r < s.size() && s(r) > cut * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

int numerical_rank(const Mat& m, double cut) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const RVec& s = svd.singularValues();
    if (s(0) == 0.0) return 0;
    int r = 0;
    while (r < s.size() && s(r) > cut * s(0)) ++r;
    return r;
}

Mat null_space(const Mat& m, double cut) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0) return identity(static_cast<int>(n));
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    if (smax == 0.0) return identity(static_cast<int>(n));
    int r = 0;
    while (r < s.size() && s(r) > cut * smax) ++r;
    return svd.matrixV().rightCols(n - r);
}

std::vector<Mat> span_basis(const std::vector<Mat>& mats, const Tolerance& tol) {
    if (mats.empty()) return {};
    const auto rows = mats[0].rows(), cols = mats[0].cols();
    Mat stack(rows * cols, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t k = 0; k < mats.size(); ++k) {
        if (mats[k].rows() != rows || mats[k].cols() != cols)
            throw NcgError("span_basis: shape mismatch");
        stack.col(static_cast<Eigen::Index>(k)) = vec(mats[k]);
    }
    Mat u = range_basis(stack, tol.rank_cut);
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index k = 0; k < u.cols(); ++k)
        out.push_back(unvec(u.col(k), static_cast<int>(rows), static_cast<int>(cols)));
    return out;
}

Mat identity(int n) { return Mat::Identity(n, n); }

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }
Mat anticomm(const Mat& a, const Mat& b) { return a * b + b * a; }

Mat direct_sum(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double rel_residual(const Mat& r, double scale) { return operator_norm(r) / std::max(1.0, scale); }

Mat psd_sqrt(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m));
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat psd_inv_sqrt(const Mat& m, double cut) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m));
    const RVec& ev = es.eigenvalues();
    double top = std::max(std::abs(ev.maxCoeff()), 1e-300);
    RVec inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) <= cut * top) throw NcgError("psd_inv_sqrt: matrix is not positive definite");
        inv(i) = 1.0 / std::sqrt(ev(i));
    }
    return es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const Mat& herm) {
    if (herm.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(herm), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Mat random_matrix(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
    return m;
}

Mat random_hermitian(int n, Rng& rng) { return hermitian_part(random_matrix(n, n, rng)); }

Mat random_unitary(int n, Rng& rng) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        cplx d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

Vec random_vector(int n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

}  // namespace ncg
