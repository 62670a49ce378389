#include "ncg/tomita.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat pinv(const Mat& m, double cut) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    RVec inv = RVec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut * s(0)) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

TomitaResult tomita_J(const SpectralTripleData& t, const Vec& phi, const Tolerance& tol) {
    SpectralTripleData probe = t;
    probe.phi = phi;
    if (!probe.grading) probe.grading = identity(t.hilbert_dim);
    CheckReport pre = check_riemannian(probe, tol);
    for (const char* id : {"cyclic", "separating", "state_tracial"})
        if (!pre.passed(id)) {
            const CheckEntry* e = pre.find(id);
            throw NcgError(std::string("tomita_J: ") + id + " fails (residual " +
                           std::to_string(e ? e->residual : 0.0) + ")");
        }
    const int n = t.hilbert_dim;
    AlgebraBasis C = build_cda(t, tol).basis;
    const int k = C.size();
    Mat W(n, k), Ws(n, k);
    for (int i = 0; i < k; ++i) {
        W.col(i) = C.basis[static_cast<std::size_t>(i)] * phi;
        Ws.col(i) = C.basis[static_cast<std::size_t>(i)].adjoint() * phi;
    }
    TomitaResult out;
    out.J.kernel = Ws * pinv(W.conjugate(), tol.rank_cut);
    const Mat& K = out.J.kernel;
    out.report.add("antiunitary", operator_norm(K * K.adjoint() - identity(n)), tol.rel);
    out.report.add("j_squared", operator_norm(K * K.conjugate() - identity(n)), tol.rel);
    out.report.add("j_fixes_phi", (out.J.apply(phi) - phi).norm() / std::max(1.0, phi.norm()), tol.rel);
    double cm = 0.0;
    for (const Mat& w : C.basis) {
        Mat jw = out.J.conjugate(w);
        for (const Mat& v : C.basis) cm = std::max(cm, rel_residual(comm(jw, v), operator_norm(w) * operator_norm(v)));
    }
    out.report.add("commutant", cm, tol.rel, "J C_D(A) J commutes with C_D(A)");
    return out;
}

Mat opposite_action(const Antiunitary& J, const Mat& a) { return J.conjugate(a.adjoint()); }

CycleGrading grading_from_cycle(const SpectralTripleData& t, const Mat& C, const Antiunitary& J,
                                const std::optional<Mat>& eps, const Tolerance& tol) {
    const int n = t.hilbert_dim;
    if (C.rows() != n || C.cols() != n) throw NcgError("grading_from_cycle: C has the wrong shape");
    if (herm_defect(C) > tol.rel || operator_norm(C * C - identity(n)) > tol.rel)
        throw NcgError("grading_from_cycle: C is not a selfadjoint involution");
    CycleGrading out;
    Mat jcj = J.conjugate(C);
    const double nd = operator_norm(t.dirac);
    if (t.p % 2 == 0) {
        Mat e = C * jcj;
        out.report.add("eps_squared", operator_norm(e * e - identity(n)), tol.rel);
        out.report.add("eps_selfadjoint", herm_defect(e), tol.rel);
        out.report.add("j_commutes_eps", operator_norm(J.conjugate(e) - e), tol.rel);
        out.report.add("eps_odd_dirac", rel_residual(anticomm(e, t.dirac), nd), tol.rel);
        double ea = 0.0;
        for (const Mat& a : t.algebra) {
            const double na = operator_norm(a);
            ea = std::max(ea, rel_residual(comm(e, a), na));
            ea = std::max(ea, rel_residual(comm(e, opposite_action(J, a)), na));
        }
        out.report.add("eps_even_bimodule", ea, tol.rel, "[eps, a] and [eps, a^op]");
        out.epsilon = e;
    } else {
        out.report.add("C_equals_JCJ", operator_norm(C - jcj), tol.rel);
        if (eps) out.report.add("eps_odd_C", operator_norm(anticomm(*eps, C)), tol.rel);
        else out.report.skip("eps_odd_C", "no grading supplied");
        out.p_plus = 0.5 * (identity(n) + C);
        out.p_minus = 0.5 * (identity(n) - C);
        const Mat& pp = out.p_plus;
        const Mat& pm = out.p_minus;
        double proj = std::max({operator_norm(pp + pm - identity(n)), operator_norm(pp * pp - pp),
                                operator_norm(pm * pm - pm), operator_norm(pp * pm)});
        out.report.add("complementary_projectors", proj, tol.rel);
        double pa = 0.0;
        for (const Mat& a : t.algebra) {
            const double na = operator_norm(a);
            pa = std::max(pa, rel_residual(comm(pp, a), na));
            pa = std::max(pa, rel_residual(comm(pp, opposite_action(J, a)), na));
        }
        out.report.add("projectors_commute", pa, tol.rel, "[P+, a] and [P+, a^op]");
    }
    return out;
}

DTilde build_dtilde(const Mat& dirac, const Antiunitary& J, const Mat& eps) {
    DTilde out;
    out.d_prime = J.conjugate(dirac);
    out.d_tilde = I_unit * out.d_prime * eps;
    out.d_tilde_herm_defect = herm_defect(out.d_tilde);
    return out;
}

CheckReport check_fundamental_class(const SpectralTripleData& t, const Antiunitary& J, const Mat& eps,
                                    const Tolerance& tol) {
    CheckReport rep;
    const Mat& D = t.dirac;
    DTilde dt = build_dtilde(D, J, eps);
    const Mat& Dt = dt.d_tilde;
    rep.add("dtilde_selfadjoint", dt.d_tilde_herm_defect, kInf, "diagnostic");
    const double ndt = operator_norm(Dt);
    auto op = [&](const Mat& x) { return J.conjugate(x.adjoint()); };

    double anti = 0.0, lin = 0.0;
    for (const Mat& a : t.algebra) {
        Mat da = comm(D, a);
        for (const Mat& b : t.algebra) {
            Mat dtb = comm(Dt, op(b));
            const double s = operator_norm(da) * operator_norm(dtb);
            anti = std::max(anti, rel_residual(anticomm(da, dtb), s));
            Mat Tb = anticomm(D, dtb);
            lin = std::max(lin, rel_residual(comm(Tb, a), operator_norm(Tb) * operator_norm(a)));
        }
    }
    rep.add("anticommutation", anti, tol.rel, "[D,a][D~,b^op] + [D~,b^op][D,a]");
    rep.add("T_b_linear", lin, tol.rel, "[D[D~,b^op] + [D~,b^op]D, a]");

    // alpha(x^op) = x^op (-i eps) on x = [D,a]; *-preservation
    double star = 0.0;
    const Mat mi_eps = -I_unit * eps;
    for (const Mat& a : t.algebra) {
        Mat y = op(comm(D, a));
        Mat alpha_y = y * mi_eps;
        Mat alpha_ystar = -op(comm(D, a.adjoint())) * mi_eps;  // y* = -[D,a*]^op
        star = std::max(star, rel_residual(alpha_ystar - alpha_y.adjoint(), operator_norm(y)));
    }
    rep.add("alpha_star", star, tol.rel, "alpha(y*) = alpha(y)*");

    EigResult eig = herm_eig(hermitian_part(D), tol);
    RVec f(eig.values.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = eig.values(i) / std::sqrt(1.0 + eig.values(i) * eig.values(i));
    Mat F = eig.vectors * f.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    rep.add("F_odd", operator_norm(anticomm(F, eps)), tol.rel, "F_D eps + eps F_D");

    double gmax = 0.0, ident = 0.0;
    for (const Mat& a : t.algebra) {
        gmax = std::max(gmax, operator_norm(comm(F, a)));
        Mat dta = comm(Dt, op(a));
        Mat lhs = anticomm(F, dta);
        gmax = std::max(gmax, operator_norm(lhs));
        Mat dao = op(comm(D, a));
        Mat rhs = -I_unit * (F * dao - dao * F) * eps;
        ident = std::max(ident, rel_residual(lhs - rhs, operator_norm(dao) * std::max(1.0, ndt)));
    }
    rep.add("F_commutators", gmax, kInf, "largest |[F_D, y]|, compact at finite dimension");
    rep.add("F_identity", ident, tol.rel, "[F_D, [D~,a^op]] = -i(F_D[D,a]^op - [D,a]^op F_D) eps");
    return rep;
}

}  // namespace ncg
