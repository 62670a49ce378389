#include "ncg/kasparov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat grading_or_one(const SpectralTripleData& t) { return t.grading ? *t.grading : identity(t.hilbert_dim); }

std::vector<int> parities(const BimoduleConnection& conn) {
    if (conn.parity.empty()) return std::vector<int>(static_cast<std::size_t>(conn.size()), 1);
    if (static_cast<int>(conn.parity.size()) != conn.size()) throw NcgError("connection: parity list has the wrong size");
    return conn.parity;
}

Mat sign_diag(const std::vector<int>& par) {
    Mat s = Mat::Zero(static_cast<Eigen::Index>(par.size()), static_cast<Eigen::Index>(par.size()));
    for (std::size_t i = 0; i < par.size(); ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = par[i];
    return s;
}

Mat assemble_potential(const SpectralTripleData& t, const BimoduleConnection& conn) {
    const int n = conn.size(), N = t.hilbert_dim;
    std::vector<int> par = parities(conn);
    Mat eps = grading_or_one(t);
    Mat a = Mat::Zero(n * N, n * N);
    if (conn.potential.empty()) return a;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.block(j * N, i * N, N, N) = static_cast<double>(par[static_cast<std::size_t>(j)]) * eps *
                                          conn.potential[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
}

// R_b for the entry (i, j) of the module projector
Mat q_entry(const BimoduleConnection& conn, int i, int j) {
    const int N = conn.module.block();
    return conn.module.q.block(i * N, j * N, N, N).transpose();
}

}  // namespace

Mat iota(const Mat& right_op) { return right_op.transpose(); }

ProjectiveModule right_module_over(const SpectralTripleData& t, const Mat& q_iota, const Tolerance& tol) {
    AlgebraBasis b = right_algebra_of(t, tol);
    std::vector<Mat> tb;
    for (const Mat& x : b.basis) tb.push_back(iota(x));
    ProjectiveModule mod;
    mod.base = algebra_from_span(tb, tol);
    const int N = t.hilbert_dim;
    if (q_iota.rows() % N != 0 || q_iota.rows() != q_iota.cols()) throw NcgError("module: q has the wrong shape");
    mod.m = static_cast<int>(q_iota.rows() / N);
    mod.q = q_iota;
    mod.r = q_iota;
    mod.side = Side::left;
    validate_module(mod, tol);
    return mod;
}

std::vector<Mat> one_form_span(const SpectralTripleData& t, const Tolerance& tol) {
    AlgebraBasis b = right_algebra_of(t, tol);
    Mat ed = grading_or_one(t) * t.dirac;
    std::vector<Mat> forms;
    for (const Mat& b1 : b.basis) {
        Mat c = comm(ed, b1);
        for (const Mat& b0 : b.basis) forms.push_back(c * b0);
    }
    return span_basis(forms, tol);
}

BimoduleConnection grassmann_connection(const ProjectiveModule& mod) {
    BimoduleConnection c;
    c.module = mod;
    const int N = mod.block();
    c.potential.assign(static_cast<std::size_t>(mod.m), std::vector<Mat>(static_cast<std::size_t>(mod.m), Mat::Zero(N, N)));
    return c;
}

void validate_connection(const SpectralTripleData& t, const BimoduleConnection& conn, const Tolerance& tol) {
    const int n = conn.size(), N = t.hilbert_dim;
    if (conn.module.block() != N) throw NcgError("connection: module block size differs from the Hilbert space");
    if (conn.potential.empty()) return;
    if (static_cast<int>(conn.potential.size()) != n) throw NcgError("connection: potential has the wrong size");
    bool any = false;
    for (const auto& row : conn.potential) {
        if (static_cast<int>(row.size()) != n) throw NcgError("connection: potential has the wrong size");
        for (const Mat& p : row) {
            if (p.rows() != N || p.cols() != N) throw NcgError("connection: potential entry has the wrong shape");
            any = any || p.norm() > 0.0;
        }
    }
    if (!any) return;
    std::vector<Mat> span = one_form_span(t, tol);
    AlgebraBasis sp;
    sp.hilbert_dim = N;
    sp.basis = span;
    for (const auto& row : conn.potential)
        for (const Mat& p : row)
            if (sp.membership_residual(p) > tol.rel)
                throw NcgError("connection: potential entry is not a represented one-form (residual " +
                               std::to_string(sp.membership_residual(p)) + ")");
    Mat a = assemble_potential(t, conn);
    if (herm_defect(a) > tol.rel * std::max(1.0, operator_norm(a)))
        throw NcgError("connection: assembled potential is not selfadjoint");
}

Twisted twisted_operator(const SpectralTripleData& t, const BimoduleConnection& conn, const Tolerance& tol) {
    check_shapes(t);
    validate_module(conn.module, tol);
    validate_connection(t, conn, tol);
    if (t.right_action) {
        CheckReport fo = check_first_order(t, tol);
        if (!fo.ok()) throw NcgError("twisted_operator: first-order condition fails");
    }
    Twisted tw;
    tw.q_op = conn.module.q.transpose();
    tw.d_n = kron(sign_diag(parities(conn)), t.dirac);
    tw.a_hat = assemble_potential(t, conn);
    Mat qdq = tw.q_op * tw.d_n * tw.q_op;
    tw.d_hat = qdq + tw.q_op * tw.a_hat * tw.q_op;
    tw.range = range_basis(tw.q_op, tol.rank_cut);
    const double nd = operator_norm(tw.d_n);
    tw.selfadjoint = herm_defect(qdq) / std::max(1.0, nd);
    Mat dq = comm(tw.d_n, tw.q_op);
    tw.square_identity = rel_residual(qdq * qdq - tw.q_op * dq * dq - tw.q_op * tw.d_n * tw.d_n * tw.q_op, nd * nd);
    return tw;
}

Mat decomposition_T(const Mat& dirac, const Mat& eps, const RightPairing& pair, const std::vector<Vec>& frame) {
    Mat ed = eps * dirac;
    Mat T = Mat::Zero(dirac.rows(), dirac.cols());
    for (const Vec& x : frame) T += pair.theta(ed * x, x);
    return T;
}

std::vector<Vec> module_frame(const SpectralTripleData& t, const RightPairing& pair, std::uint64_t seed,
                              const Tolerance& tol) {
    const int N = t.hilbert_dim;
    std::vector<Mat> pieces;
    if (t.grading) {
        pieces.push_back(0.5 * (identity(N) + *t.grading));
        pieces.push_back(0.5 * (identity(N) - *t.grading));
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        if (auto xs = orthonormal_module_basis(pair, N, pieces, rng, tol)) return *xs;
    }
    std::vector<Vec> cand;
    for (const Mat& p : pieces.empty() ? std::vector<Mat>{identity(N)} : pieces)
        for (int i = 0; i < N; ++i) cand.push_back(p.col(i));
    ThetaFn th = [&](const Vec& a, const Vec& b) { return pair.theta(a, b); };
    return tight_frame(N, t.right_action ? *t.right_action : std::vector<Mat>{}, th, cand, tol);
}

Vec direct_connection_eval(const SpectralTripleData& t, const BimoduleConnection& conn, const RightPairing& pair,
                           const std::vector<Vec>& frame, const Vec& xi, const std::vector<Mat>& e) {
    const int n = conn.size(), N = t.hilbert_dim;
    if (static_cast<int>(e.size()) != n) throw NcgError("direct_connection_eval: element has the wrong length");
    std::vector<int> par = parities(conn);
    Mat eps = grading_or_one(t);
    Mat ed = eps * t.dirac;
    Mat T = decomposition_T(t.dirac, eps, pair, frame);
    // (gamma o grad_H) xi = sum_k [eps D, (x_k|xi)^op] x_k
    Vec gh = Vec::Zero(N);
    for (const Vec& x : frame) gh += comm(ed, pair(x, xi)) * x;
    Vec out(n * N);
    Vec pot = Vec::Zero(n * N);
    for (int j = 0; j < n; ++j) {
        Vec c = e[static_cast<std::size_t>(j)] * (eps * gh) + e[static_cast<std::size_t>(j)] * (eps * (T * xi));
        for (int i = 0; i < n; ++i) c += eps * (q_entry(conn, i, j) * (comm(ed, e[static_cast<std::size_t>(i)]) * xi));
        out.segment(j * N, N) = static_cast<double>(par[static_cast<std::size_t>(j)]) * c;
        if (!conn.potential.empty()) {
            Vec a = Vec::Zero(N);
            for (int i = 0; i < n; ++i)
                a += conn.potential[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * (e[static_cast<std::size_t>(i)] * xi);
            pot.segment(j * N, N) = static_cast<double>(par[static_cast<std::size_t>(j)]) * (eps * a);
        }
    }
    // the potential of a connection on B^n q is compressed by q
    Mat q_op = conn.module.q.transpose();
    return out + q_op * pot;
}

ProductTriple product_triple(const SpectralTripleData& t, const BimoduleConnection& conn,
                             const std::vector<Mat>& right_c, const Tolerance& tol) {
    ProductTriple out;
    out.twisted = twisted_operator(t, conn, tol);
    const Twisted& tw = out.twisted;
    const int n = conn.size();
    const Mat& V = tw.range;
    const Mat sd = sign_diag(parities(conn));
    SpectralTripleData& r = out.triple;
    r.hilbert_dim = static_cast<int>(V.cols());
    r.dirac = hermitian_part(V.adjoint() * tw.d_hat * V);
    r.p = t.p;
    double lin = 0.0, fo = 0.0;
    for (const Mat& a : t.algebra) {
        Mat an = kron(identity(n), a);
        r.algebra.push_back(V.adjoint() * an * V);
        Mat lhs = V.adjoint() * comm(tw.d_hat, an) * V;
        Mat rhs = V.adjoint() * kron(sd, comm(t.dirac, a)) * V;
        lin = std::max(lin, rel_residual(lhs - rhs, operator_norm(rhs)));
        for (const Mat& c : right_c) {
            Mat cc = V.adjoint() * c * V;
            fo = std::max(fo, rel_residual(comm(lhs, cc), operator_norm(lhs) * operator_norm(cc)));
        }
    }
    if (t.grading) r.grading = V.adjoint() * kron(sd, *t.grading) * V;
    if (!right_c.empty()) {
        std::vector<Mat> rc;
        for (const Mat& c : right_c) rc.push_back(V.adjoint() * c * V);
        r.right_action = rc;
    }
    out.report.add("selfadjoint", tw.selfadjoint, tol.rel, "q^op D_n q^op");
    out.report.add("square_identity", tw.square_identity, tol.rel);
    out.report.add("dirac_commutators", lin, tol.rel, "[D^, a] = [D,a] (x) eps'");
    if (right_c.empty()) out.report.skip("first_order_right", "no right action supplied");
    else out.report.add("first_order_right", fo, tol.rel);
    out.report.add("summability", 0.0, tol.rel,
                   "finite dimension: compression and bounded perturbation keep every summability class");
    return out;
}

CheckReport connection_condition_check(const SpectralTripleData& t, const BimoduleConnection& conn, const Twisted& tw,
                                       bool inject_sign, const Tolerance& tol) {
    CheckReport rep;
    const int n = conn.size(), N = t.hilbert_dim;
    const std::vector<int> par = parities(conn);
    const Mat& D = t.dirac;
    const Mat& Q = tw.q_op;
    const double nd = std::max(operator_norm(tw.d_hat), operator_norm(D));
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        Mat te(n * N, N);
        std::vector<Mat> ek;
        for (int j = 0; j < n; ++j) {
            ek.push_back(q_entry(conn, k, j));
            te.block(j * N, 0, N, N) = ek.back();
        }
        Mat te_star = te.adjoint();
        if (inject_sign) te_star = -te_star;
        Mat upper = tw.d_hat * te - te * D;
        Mat lower = (D * te_star - te_star * tw.d_hat) * Q;
        // predicted pair
        Mat comm_col(n * N, N);
        Mat comm_row = Mat::Zero(N, n * N);
        for (int i = 0; i < n; ++i) {
            const Mat& e = ek[static_cast<std::size_t>(i)];
            comm_col.block(i * N, 0, N, N) = static_cast<double>(par[static_cast<std::size_t>(i)]) * D * e - e * D;
            comm_row.block(0, i * N, N, N) = comm(D, e.adjoint());
        }
        Mat R = Q * comm_col + Q * tw.a_hat * Q * te;
        Mat S = (comm_row - te.adjoint() * tw.a_hat) * Q;
        const double scale = nd * std::max(1.0, operator_norm(te));
        const double res = std::max(rel_residual(upper - R, scale), rel_residual(lower - S, scale));
        rep.add("frame[" + std::to_string(k) + "]", res, tol.rel);
        worst = std::max(worst, res);
    }
    rep.add("max_residual", worst, tol.rel, inject_sign ? "sign error injected in T_e*" : "");
    return rep;
}

ConnectionDecomposition connection_decomposition(const SpectralTripleData& t, const Tolerance& tol, std::uint64_t seed) {
    if (!t.right_action) throw NcgError("connection_decomposition: no right action");
    CheckReport fo = check_first_order(t, tol);
    if (!fo.ok()) throw NcgError("connection_decomposition: graded first-order condition fails");
    SpincData sd = spinc_bimodule(t, tol);
    if (sd.fit.residual > tol.rel || !sd.fit.positive)
        throw NcgError("connection_decomposition: no positive right pairing compatible with the Clifford pairing");
    ConnectionDecomposition out;
    const RightPairing& pair = sd.fit.pairing;
    out.frame = module_frame(t, pair, seed, tol);
    Mat eps = grading_or_one(t);
    out.T = decomposition_T(t.dirac, eps, pair, out.frame);
    ThetaFn th = [&](const Vec& a, const Vec& b) { return pair.theta(a, b); };
    out.report.add("frame", frame_defect(t.hilbert_dim, th, out.frame, out.frame), tol.rel,
                   std::to_string(out.frame.size()) + " frame vectors");
    double lin = 0.0;
    const double nt = operator_norm(out.T);
    for (const Mat& b : sd.right_alg.basis) lin = std::max(lin, rel_residual(comm(out.T, b), nt * operator_norm(b)));
    out.report.add("T_module_linear", lin, tol.rel, "[T, b^op]");
    out.report.add("T_norm", nt, kInf, "diagnostic");
    return out;
}

int index_pairing(const SpectralTripleData& t, const Mat& proj, const Tolerance& tol) {
    if (!t.grading) throw NcgError("index_pairing: needs a grading");
    const int N = t.hilbert_dim;
    if (proj.rows() != N || proj.cols() != N) throw NcgError("index_pairing: projector has the wrong shape");
    const double np = std::max(1.0, operator_norm(proj));
    if (herm_defect(proj) > tol.rel * np || operator_norm(proj * proj - proj) > tol.rel * np)
        throw NcgError("index_pairing: input is not a projector");
    const Mat& g = *t.grading;
    if (operator_norm(comm(proj, g)) > tol.rel * np) throw NcgError("index_pairing: projector does not commute with the grading");
    Mat V = range_basis(proj, tol.rank_cut);
    if (V.cols() == 0) return 0;
    EigResult ge = herm_eig(hermitian_part(V.adjoint() * g * V), tol);
    std::vector<Eigen::Index> plus, minus;
    for (Eigen::Index i = 0; i < ge.values.size(); ++i) (ge.values(i) > 0 ? plus : minus).push_back(i);
    Mat vp(V.rows(), static_cast<Eigen::Index>(plus.size())), vm(V.rows(), static_cast<Eigen::Index>(minus.size()));
    for (std::size_t i = 0; i < plus.size(); ++i) vp.col(static_cast<Eigen::Index>(i)) = V * ge.vectors.col(plus[i]);
    for (std::size_t i = 0; i < minus.size(); ++i) vm.col(static_cast<Eigen::Index>(i)) = V * ge.vectors.col(minus[i]);
    const int np_ = static_cast<int>(plus.size()), nm = static_cast<int>(minus.size());
    int r = 0;
    if (np_ > 0 && nm > 0) r = numerical_rank(vm.adjoint() * t.dirac * vp, tol.rank_cut);
    return (np_ - r) - (nm - r);
}

PairingMatrix poincare_pairing_matrix(const SpectralTripleData& t, const std::vector<Mat>& left_projs,
                                      const std::vector<Mat>& right_projs, const Tolerance& tol) {
    PairingMatrix out;
    out.m = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(left_projs.size()), static_cast<Eigen::Index>(right_projs.size()));
    for (std::size_t i = 0; i < left_projs.size(); ++i)
        for (std::size_t j = 0; j < right_projs.size(); ++j) {
            const Mat& p = left_projs[i];
            const Mat& q = right_projs[j];
            if (operator_norm(comm(p, q)) > tol.rel * std::max(1.0, operator_norm(p) * operator_norm(q)))
                throw NcgError("poincare_pairing_matrix: projectors do not commute");
            out.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = index_pairing(t, p * q, tol);
        }
    if (out.m.rows() == out.m.cols() && out.m.rows() > 0) {
        out.det = std::llround(out.m.cast<double>().determinant());
        out.unimodular = std::llabs(out.det) == 1;
    }
    return out;
}

}  // namespace ncg
