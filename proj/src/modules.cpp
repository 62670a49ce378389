#include "ncg/modules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ncg {

namespace {

Mat block_of(const Mat& m, int i, int j, int d) { return m.block(i * d, j * d, d, d); }

void require_blocks_in(const AlgebraBasis& base, const Mat& m, int size, const Tolerance& tol, const char* what) {
    const int d = base.hilbert_dim;
    if (m.rows() != size * d || m.cols() != size * d) throw NcgError(std::string("module: wrong shape for ") + what);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (base.membership_residual(block_of(m, i, j, d)) > tol.rel)
                throw NcgError(std::string("module: ") + what + " has a block outside the base algebra");
}

Vec basis_vec(int n, int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
}

int rank_of_coeffs(const std::vector<Vec>& cols, const Tolerance& tol) {
    if (cols.empty()) return 0;
    Mat m(cols[0].size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
    return numerical_rank(m, tol.rank_cut);
}

}  // namespace

void validate_module(const ProjectiveModule& mod, const Tolerance& tol) {
    require_blocks_in(mod.base, mod.q, mod.m, tol, "q");
    require_blocks_in(mod.base, mod.r, mod.m, tol, "r");
    const double nq = std::max(1.0, operator_norm(mod.q));
    if (operator_norm(mod.q * mod.q - mod.q) > tol.rel * nq || herm_defect(mod.q) > tol.rel * nq)
        throw NcgError("module: q is not a self-adjoint idempotent");
    const double nr = std::max(1.0, operator_norm(mod.r));
    if (herm_defect(mod.r) > tol.rel * nr) throw NcgError("module: metric r is not self-adjoint");
    if (operator_norm(mod.q * mod.r - mod.r) > tol.rel * nr || operator_norm(mod.r * mod.q - mod.r) > tol.rel * nr)
        throw NcgError("module: metric r is not compressed by q");
    Mat shifted = mod.r + identity(static_cast<int>(mod.q.rows())) - mod.q;
    if (min_eigenvalue(shifted) <= tol.rank_cut) throw NcgError("module: r + (1 - q) is not positive invertible");
}

Mat pairing_eval(const ProjectiveModule& mod, const Mat& e, const Mat& f, const Tolerance& tol) {
    const double ne = std::max(1.0, e.norm()), nf = std::max(1.0, f.norm());
    if (mod.side == Side::right) {
        if ((mod.q * e - e).norm() > tol.rel * ne || (mod.q * f - f).norm() > tol.rel * nf)
            throw NcgError("pairing_eval: element not in the range of q");
        return e.adjoint() * mod.r * f;
    }
    if ((e * mod.q - e).norm() > tol.rel * ne || (f * mod.q - f).norm() > tol.rel * nf)
        throw NcgError("pairing_eval: element not in the range of q");
    return e * mod.r * f.adjoint();
}

Mat module_action(const ProjectiveModule& mod, const Mat& e, const Mat& a) {
    return mod.side == Side::right ? Mat(e * a) : Mat(a * e);
}

ProjectiveModule conjugate_module(const ProjectiveModule& mod) {
    ProjectiveModule out = mod;
    out.side = mod.side == Side::right ? Side::left : Side::right;
    return out;
}

Mat conjugate_element(const ProjectiveModule&, const Mat& e) { return e.adjoint(); }

L2Space l2_space(const ProjectiveModule& mod, const Mat& rho, const Tolerance& tol) {
    const int d = mod.block();
    if (rho.rows() != d || rho.cols() != d) throw NcgError("l2_space: state has wrong shape");
    if (herm_defect(rho) > tol.rel * std::max(1.0, operator_norm(rho)) ||
        min_eigenvalue(rho) <= tol.rank_cut * std::max(1.0, operator_norm(rho)))
        throw NcgError("l2_space: state is not faithful");
    // spanning set g_i * b_k of the module as a vector space
    std::vector<Mat> span;
    for (int i = 0; i < mod.m; ++i) {
        Mat gi = mod.side == Side::right ? Mat(mod.q.block(0, i * d, mod.m * d, d))
                                         : Mat(mod.q.block(i * d, 0, d, mod.m * d));
        for (const Mat& b : mod.base.basis) span.push_back(module_action(mod, gi, b));
    }
    const auto k = static_cast<Eigen::Index>(span.size());
    Mat gram(k, k);
    for (Eigen::Index s = 0; s < k; ++s)
        for (Eigen::Index t = 0; t < k; ++t)
            gram(s, t) = (rho * pairing_eval(mod, span[static_cast<std::size_t>(s)],
                                             span[static_cast<std::size_t>(t)], tol)).trace();
    L2Space out;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram));
    const RVec& ev = es.eigenvalues();
    const double top = std::max(ev.size() ? ev(ev.size() - 1) : 0.0, 1e-300);
    if (ev.size() && ev(0) < -tol.rel * top) throw NcgError("l2_space: Gram matrix is not positive");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > tol.rank_cut * top) keep.push_back(i);
    out.rank = static_cast<int>(keep.size());
    out.orthonormalizer = Mat(k, out.rank);
    for (int c = 0; c < out.rank; ++c)
        out.orthonormalizer.col(c) = es.eigenvectors().col(keep[static_cast<std::size_t>(c)]) /
                                     std::sqrt(ev(keep[static_cast<std::size_t>(c)]));
    // faithfulness: Gram rank must equal the vector-space dimension of the module
    std::vector<Vec> cols;
    for (const Mat& s : span) cols.push_back(vec(s));
    if (out.rank != static_cast<int>(rank_of_coeffs(cols, tol)))
        throw NcgError("l2_space: Gram kernel larger than the module kernel");
    out.gram = gram;
    return out;
}

LeftPairing LeftPairing::make(const AlgebraBasis& alg, const Mat& rho) {
    LeftPairing lp;
    lp.alg = alg;
    lp.rho = rho;
    const int k = alg.size();
    Mat g(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            g(a, b) = (rho * alg.basis[static_cast<std::size_t>(a)] * alg.basis[static_cast<std::size_t>(b)]).trace();
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    if (k == 0 || s(k - 1) <= 1e-12 * s(0)) throw NcgError("left pairing: state is not faithful on the algebra");
    lp.gram_inv = svd.solve(identity(k));
    return lp;
}

Mat LeftPairing::operator()(const Vec& xi, const Vec& eta) const {
    const int k = alg.size();
    Vec rhs(k);
    for (int a = 0; a < k; ++a) rhs(a) = eta.dot(alg.basis[static_cast<std::size_t>(a)] * xi);
    return alg.element(gram_inv * rhs);
}

Mat LeftPairing::theta(const Vec& x, const Vec& y) const {
    const int k = alg.size();
    const auto n = x.size();
    Mat bx(n, k), by(n, k);
    for (int a = 0; a < k; ++a) {
        bx.col(a) = alg.basis[static_cast<std::size_t>(a)] * x;
        by.col(a) = alg.basis[static_cast<std::size_t>(a)].adjoint() * y;
    }
    return (bx * gram_inv) * by.adjoint();
}

Mat RightPairing::operator()(const Vec& xi, const Vec& eta) const {
    const auto n = xi.size();
    Mat e = Mat::Zero(n, n);
    for (const Mat& b : alg.basis) e += (b * xi).dot(eta) * b;
    return e * weight;
}

Mat RightPairing::theta(const Vec& x, const Vec& y) const {
    const auto n = x.size();
    const int k = alg.size();
    Mat u(n, k), v(n, k);
    Vec wx = weight * x;
    for (int a = 0; a < k; ++a) {
        u.col(a) = alg.basis[static_cast<std::size_t>(a)] * wx;
        v.col(a) = alg.basis[static_cast<std::size_t>(a)] * y;
    }
    return u * v.adjoint();
}

RightPairingFit fit_right_pairing(const LeftPairing& left, const AlgebraBasis& right_alg, const Tolerance& tol) {
    const int n = left.alg.hilbert_dim;
    std::vector<Mat> zs = center(right_alg, tol);
    if (zs.empty()) zs.push_back(identity(n));
    RightPairing unit{right_alg, identity(n)};
    Rng rng(0x5eed);
    const int samples = 6;
    const auto nz = static_cast<Eigen::Index>(zs.size());
    Mat sys(static_cast<Eigen::Index>(samples) * n, nz);
    Vec rhs(static_cast<Eigen::Index>(samples) * n);
    for (int s = 0; s < samples; ++s) {
        Vec e = random_vector(n, rng), f = random_vector(n, rng), g = random_vector(n, rng);
        rhs.segment(static_cast<Eigen::Index>(s) * n, n) = left(e, f) * g;
        Mat ef = unit(f, g);
        for (Eigen::Index z = 0; z < nz; ++z) sys.block(static_cast<Eigen::Index>(s) * n, z, n, 1) = ef * zs[static_cast<std::size_t>(z)] * e;
    }
    Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec c = svd.solve(rhs);
    RightPairingFit fit;
    Mat w = Mat::Zero(n, n);
    for (Eigen::Index z = 0; z < nz; ++z) w += c(z) * zs[static_cast<std::size_t>(z)];
    w = hermitian_part(w);
    fit.pairing = RightPairing{right_alg, w};
    fit.residual = (sys * c - rhs).norm() / std::max(1.0, rhs.norm());
    fit.solution_dim = static_cast<int>(nz) - numerical_rank(sys, tol.rank_cut);
    const double top = std::max(operator_norm(w), 1e-300);
    fit.positive = operator_norm(w) > 0.0 && min_eigenvalue(w) > tol.rank_cut * top;
    return fit;
}

CheckReport morita_check(const EquivBimodule& bi, const Tolerance& tol) {
    CheckReport rep;
    const int n = bi.carrier_dim;
    const LeftPairing& L = bi.left;
    const RightPairing& P = bi.right;
    std::vector<Vec> e;
    for (int i = 0; i < n; ++i) e.push_back(basis_vec(n, i));

    double act = 0.0;
    for (const Mat& b : bi.left_gens)
        for (const Mat& a : bi.right_gens) act = std::max(act, rel_residual(comm(b, a), operator_norm(a) * operator_norm(b)));
    rep.add("actions_commute", act, tol.rel);

    double r1 = 0.0;
    for (const Mat& a : bi.right_gens) {
        const double s = std::max(1.0, operator_norm(a));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r1 = std::max(r1, operator_norm(L(a * e[i], e[j]) - L(e[i], a.adjoint() * e[j])) / s);
    }
    rep.add("left_pairing_adjoint", r1, tol.rel, "<e.a|f> = <e|f.a*>");

    double r2 = 0.0;
    for (const Mat& b : bi.left_gens) {
        const double s = std::max(1.0, operator_norm(b));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r2 = std::max(r2, operator_norm(P(b * e[i], e[j]) - P(e[i], b.adjoint() * e[j])) / s);
    }
    rep.add("right_pairing_adjoint", r2, tol.rel, "(b.e|f) = (e|b*.f)");

    // <e_i|e_j> e_k = e_i (e_j|e_k): column k of L_ij against column i of P_jk
    double r3 = 0.0;
    std::vector<Vec> lcoef, rcoef;
    for (int j = 0; j < n; ++j) {
        std::vector<Mat> pj, lj;
        for (int k = 0; k < n; ++k) pj.push_back(P(e[j], e[k]));
        for (int i = 0; i < n; ++i) lj.push_back(L(e[i], e[j]));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                r3 = std::max(r3, (lj[static_cast<std::size_t>(i)].col(k) - pj[static_cast<std::size_t>(k)].col(i)).norm());
        for (int i = 0; i < n; ++i) {
            lcoef.push_back(L.alg.coefficients(lj[static_cast<std::size_t>(i)]));
            rcoef.push_back(P.alg.coefficients(pj[static_cast<std::size_t>(i)]));
        }
    }
    rep.add("compatibility", r3, tol.rel, "<e|f>g = e(f|g)");

    const int lrank = static_cast<int>(rank_of_coeffs(lcoef, tol));
    const int rrank = static_cast<int>(rank_of_coeffs(rcoef, tol));
    rep.add_flag("full_left", lrank == L.alg.size(), static_cast<double>(L.alg.size() - lrank), 0.0,
                 "rank " + std::to_string(lrank) + " of " + std::to_string(L.alg.size()));
    rep.add_flag("full_right", rrank == P.alg.size(), static_cast<double>(P.alg.size() - rrank), 0.0,
                 "rank " + std::to_string(rrank) + " of " + std::to_string(P.alg.size()));

    Rng rng(0xc0ffee);
    std::vector<Vec> probes = e;
    for (int s = 0; s < 8; ++s) probes.push_back(random_vector(n, rng));
    double neg = 0.0;
    for (const Vec& v : probes) {
        Mat lv = L(v, v), pv = P(v, v);
        const double sl = std::max(1.0, operator_norm(lv)), sp = std::max(1.0, operator_norm(pv));
        neg = std::max({neg, herm_defect(lv) / sl, herm_defect(pv) / sp});
        neg = std::max({neg, -min_eigenvalue(lv) / sl, -min_eigenvalue(pv) / sp});
    }
    rep.add("positivity", neg, tol.rel);
    return rep;
}

std::vector<Vec> tight_frame(int dim, const std::vector<Mat>& action, const ThetaFn& theta,
                             const std::vector<Vec>& candidates, const Tolerance& tol) {
    Mat span(dim, 0);
    std::vector<Vec> gens;
    for (const Vec& v : candidates) {
        if (span.cols() == dim) break;
        Mat orbit(dim, static_cast<Eigen::Index>(action.size()));
        for (std::size_t k = 0; k < action.size(); ++k) orbit.col(static_cast<Eigen::Index>(k)) = action[k] * v;
        if (span.cols()) orbit -= span * (span.adjoint() * orbit);
        if (orbit.norm() < 1e-8) continue;
        Mat fresh = range_basis(orbit, 1e-8);
        if (fresh.cols() == 0 || operator_norm(orbit) < 1e-8) continue;
        Mat next(dim, span.cols() + fresh.cols());
        next << span, fresh;
        span = range_basis(next, tol.rank_cut);
        gens.push_back(v);
    }
    if (span.cols() < dim) throw NcgError("tight_frame: candidates do not generate the module");
    Mat th = Mat::Zero(dim, dim);
    for (const Vec& g : gens) th += theta(g, g);
    Mat inv = psd_inv_sqrt(th, tol.rank_cut);
    std::vector<Vec> out;
    for (const Vec& g : gens) out.push_back(inv * g);
    return out;
}

double frame_defect(int dim, const ThetaFn& theta, const std::vector<Vec>& x, const std::vector<Vec>& y) {
    Mat s = Mat::Zero(dim, dim);
    for (std::size_t j = 0; j < x.size(); ++j) s += theta(x[j], y[j]);
    return operator_norm(s - identity(dim));
}

std::optional<std::vector<Vec>> orthonormal_module_basis(const RightPairing& pair, int dim,
                                                         const std::vector<Mat>& parity, Rng& rng,
                                                         const Tolerance& tol) {
    std::vector<Mat> pieces = parity;
    if (pieces.empty()) pieces.push_back(identity(dim));
    ThetaFn th = [&](const Vec& a, const Vec& b) { return pair.theta(a, b); };
    std::vector<Vec> xs;
    Mat covered = Mat::Zero(dim, dim);
    for (const Mat& proj : pieces) {
        for (int step = 0; step <= dim; ++step) {
            if (operator_norm((covered - identity(dim)) * proj) < 1e-8) break;
            if (step == dim) return std::nullopt;
            Vec g = proj * random_vector(dim, rng);
            for (int pass = 0; pass < 2; ++pass)
                for (const Vec& x : xs) g -= pair(x, g) * x;
            Mat val = hermitian_part(pair(g, g));
            Eigen::SelfAdjointEigenSolver<Mat> es(val);
            const RVec& ev = es.eigenvalues();
            if (ev(ev.size() - 1) <= 0.0 || ev(0) <= 1e-6 * ev(ev.size() - 1)) return std::nullopt;
            RVec inv = ev.cwiseSqrt().cwiseInverse();
            Vec x = es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint() * g;
            covered += th(x, x);
            xs.push_back(x);
        }
    }
    if (frame_defect(dim, th, xs, xs) > std::max(1e-8, tol.rel)) return std::nullopt;
    return xs;
}

FramePresentation frame_presentation(const RightPairing& pair, const std::vector<Vec>& x, const std::vector<Vec>& y,
                                     const Tolerance& tol) {
    if (x.size() != y.size() || x.empty()) throw NcgError("frame_presentation: frame lists differ in length");
    const int n = static_cast<int>(x[0].size());
    const int m = static_cast<int>(x.size());
    ThetaFn th = [&](const Vec& a, const Vec& b) { return pair.theta(a, b); };
    FramePresentation out;
    out.frame_residual = frame_defect(n, th, x, y);
    if (out.frame_residual > tol.rel * 10)
        throw NcgError("frame_presentation: sum of Theta is not the identity (residual " +
                       std::to_string(out.frame_residual) + ")");
    out.q = Mat(m * n, m * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.q.block(i * n, j * n, n, n) = pair(y[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]).transpose();
    out.idempotent_residual = operator_norm(out.q * out.q - out.q);
    // coords -> element -> coords must reproduce q * coords
    Rng rng(0xf4a3e);
    Mat c(m * n, n);
    for (int i = 0; i < m; ++i) c.block(i * n, 0, n, n) = pair.alg.element(random_vector(pair.alg.size(), rng)).transpose();
    Vec elt = Vec::Zero(n);
    Mat back(m * n, n);
    for (int i = 0; i < m; ++i) elt += c.block(i * n, 0, n, n).transpose() * x[static_cast<std::size_t>(i)];
    for (int k = 0; k < m; ++k) back.block(k * n, 0, n, n) = pair(y[static_cast<std::size_t>(k)], elt).transpose();
    out.iso_residual = std::max(out.frame_residual, operator_norm(back - out.q * c) / std::max(1.0, operator_norm(c)));
    return out;
}

double linear_operator_bound(const Mat& T, const std::vector<Vec>& frame, const RightPairing& pair,
                             const std::vector<Mat>& right_gens, const Tolerance& tol) {
    for (const Mat& r : right_gens)
        if (rel_residual(comm(T, r), operator_norm(T) * operator_norm(r)) > tol.rel)
            throw NcgError("linear_operator_bound: operator is not module-linear");
    double sum = 0.0;
    std::vector<Vec> tf;
    for (const Vec& v : frame) tf.push_back(T * v);
    for (std::size_t r = 0; r < frame.size(); ++r)
        for (std::size_t s = 0; s < frame.size(); ++s)
            sum += operator_norm(pair(tf[r], tf[s]) * pair(frame[s], frame[r]));
    return std::sqrt(sum);
}

OperatorWeight weight_from_pairing(const AlgebraBasis& big, const AlgebraBasis& sub, const MatPairing& pairing,
                                   const Tolerance& tol) {
    const int n = big.hilbert_dim;
    if (span_containment(big, sub.basis) > tol.rel || big.membership_residual(identity(n)) > tol.rel ||
        sub.membership_residual(identity(n)) > tol.rel)
        throw NcgError("weight_from_pairing: subalgebra is not a unital subalgebra sharing the unit");
    OperatorWeight w;
    Mat one = identity(n);
    w.apply = [pairing, one](const Mat& x) { return pairing(x, one); };
    for (std::size_t i = 0; i < sub.basis.size(); ++i)
        for (std::size_t j = 0; j < sub.basis.size(); ++j)
            for (std::size_t k = 0; k < big.basis.size(); ++k) {
                const Mat& a = sub.basis[i];
                const Mat& b = sub.basis[j];
                const Mat& x = big.basis[k];
                double r = rel_residual(w.apply(a * x * b) - a * w.apply(x) * b,
                                        operator_norm(a) * operator_norm(x) * operator_norm(b));
                w.bimodule_residual = std::max(w.bimodule_residual, r);
                if (r > tol.rel)
                    throw NcgError("weight_from_pairing: bimodule property fails at (a,w,b) = (" + std::to_string(i) +
                                   "," + std::to_string(k) + "," + std::to_string(j) + "), residual " +
                                   std::to_string(r));
            }
    w.min_positivity = std::numeric_limits<double>::infinity();
    for (const Mat& x : big.basis) {
        Mat v = w.apply(x.adjoint() * x);
        const double nv = operator_norm(v);
        if (herm_defect(v) > tol.rel * std::max(1.0, nv) || min_eigenvalue(v) < -tol.rel * std::max(1.0, nv) ||
            nv <= tol.rank_cut)
            throw NcgError("weight_from_pairing: weight is not faithful and positive");
        w.min_positivity = std::min(w.min_positivity, nv);
    }
    return w;
}

MatPairing pairing_from_weight(const std::function<Mat(const Mat&)>& weight) {
    return [weight](const Mat& u, const Mat& v) { return weight(u * v.adjoint()); };
}

MoritaDecomposition pre_morita_decompose(const EquivBimodule& bi, const Tolerance& tol) {
    const int n = bi.carrier_dim;
    std::vector<Vec> cand{Vec::Ones(n)};
    for (int i = 0; i < n; ++i) cand.push_back(basis_vec(n, i));
    const LeftPairing& L = bi.left;
    const RightPairing& P = bi.right;
    std::vector<Vec> y = tight_frame(n, L.alg.basis, [&](const Vec& a, const Vec& b) { return L.theta(a, b); }, cand, tol);
    std::vector<Vec> x = tight_frame(n, P.alg.basis, [&](const Vec& a, const Vec& b) { return P.theta(a, b); }, cand, tol);
    MoritaDecomposition out;
    out.n = static_cast<int>(y.size());
    out.m = static_cast<int>(x.size());
    out.p = Mat(out.n * n, out.n * n);
    for (int k = 0; k < out.n; ++k)
        for (int l = 0; l < out.n; ++l)
            out.p.block(k * n, l * n, n, n) = L(y[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(l)]);
    FramePresentation fp = frame_presentation(P, x, x, tol);
    out.q = fp.q;

    auto right_map = [&](const Mat& b) {
        Mat out_b(out.m * n, out.m * n);
        for (int i = 0; i < out.m; ++i)
            for (int j = 0; j < out.m; ++j)
                out_b.block(i * n, j * n, n, n) = P(x[static_cast<std::size_t>(i)], b * x[static_cast<std::size_t>(j)]).transpose();
        return out_b;
    };
    auto left_map = [&](const Mat& r) {
        Mat out_r(out.n * n, out.n * n);
        for (int k = 0; k < out.n; ++k)
            for (int l = 0; l < out.n; ++l)
                out_r.block(k * n, l * n, n, n) = L(r * y[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(l)]);
        return out_r;
    };
    std::vector<Vec> rimg, limg;
    for (const Mat& b1 : L.alg.basis) {
        Mat f1 = right_map(b1);
        rimg.push_back(vec(f1));
        for (const Mat& b2 : L.alg.basis)
            out.right_iso_residual = std::max(out.right_iso_residual, operator_norm(right_map(b1 * b2) - f1 * right_map(b2)));
    }
    for (const Mat& r1 : P.alg.basis) {
        Mat g1 = left_map(r1);
        limg.push_back(vec(g1));
        for (const Mat& r2 : P.alg.basis)
            out.left_iso_residual = std::max(out.left_iso_residual, operator_norm(left_map(r2 * r1) - g1 * left_map(r2)));
    }
    out.right_image_rank = static_cast<int>(rank_of_coeffs(rimg, tol));
    out.left_image_rank = static_cast<int>(rank_of_coeffs(limg, tol));
    if (out.right_image_rank != L.alg.size() || out.left_image_rank != P.alg.size())
        throw NcgError("pre_morita_decompose: pairings are not full");
    return out;
}

}  // namespace ncg
