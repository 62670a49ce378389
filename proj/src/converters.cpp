#include "ncg/converters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_ok(const CheckReport& rep, const std::string& what) {
    for (const CheckEntry& e : rep.entries)
        if (e.status == Status::fail)
            throw NcgError(what + ": " + e.id + " fails (residual " + std::to_string(e.residual) + ")");
}

Mat pinv(const Mat& m, double cut) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    RVec inv = RVec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(0) > 0 && s(i) > cut * s(0)) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

Vec stack(const std::vector<Vec>& parts) {
    Eigen::Index len = 0;
    for (const Vec& v : parts) len += v.size();
    Vec out(len);
    Eigen::Index at = 0;
    for (const Vec& v : parts) {
        out.segment(at, v.size()) = v;
        at += v.size();
    }
    return out;
}

// Density of the vector state of phi restricted to the algebra (trace-orthonormal basis).
Mat vector_state_density(const AlgebraBasis& alg, const Vec& phi) {
    Mat rho = Mat::Zero(alg.hilbert_dim, alg.hilbert_dim);
    for (const Mat& b : alg.basis) rho += (b * phi).dot(phi) * b;
    return hermitian_part(rho);
}

HochschildChain map_chain(const HochschildChain& c, const std::function<Mat(const Mat&)>& f) {
    HochschildChain out = c;
    for (auto& term : out.terms)
        for (Mat& leg : term) leg = f(leg);
    return out;
}

std::vector<Mat> clifford_generators(const SpectralTripleData& t) {
    std::vector<Mat> g = t.algebra;
    for (const Mat& a : t.algebra) g.push_back(comm(t.dirac, a));
    return g;
}

std::vector<Mat> grading_pieces(const Mat& C) {
    const int n = static_cast<int>(C.rows());
    std::vector<Mat> out;
    for (double s : {1.0, -1.0}) {
        Mat p = 0.5 * (identity(n) + s * C);
        if (p.norm() > 1e-8) out.push_back(p);
    }
    return out;
}

// x -> (x (x) eta-flat) in H^m, before compression
Vec tensor_flat(const RightPairing& pair, const std::vector<Vec>& frame, const Vec& xi, const Vec& eta) {
    std::vector<Vec> parts;
    for (const Vec& x : frame) parts.push_back(pair(eta, x) * xi);
    return stack(parts);
}

}  // namespace

ConversionResult spinc_to_riemannian(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol,
                                     std::uint64_t seed) {
    check_shapes(t);
    if (!t.cycle) throw NcgError("spinc_to_riemannian: no orientation cycle");
    if (!t.right_action) throw NcgError("spinc_to_riemannian: no right action");
    require_ok(check_orientability(t, mode, tol), "spinc_to_riemannian: orientability");
    require_ok(check_spinc(t, tol), "spinc_to_riemannian: spin^c");
    const int N = t.hilbert_dim;
    const Mat C = pi_D(t.dirac, *t.cycle);
    SpincData sd = spinc_bimodule(t, tol);
    const RightPairing& pair = sd.fit.pairing;

    std::vector<Vec> frame;
    std::string frame_kind = "orthonormal";
    {
        std::vector<Mat> pieces = grading_pieces(C);
        bool found = false;
        for (int attempt = 0; attempt < 4 && !found; ++attempt) {
            Rng rng(seed + static_cast<std::uint64_t>(attempt));
            if (auto xs = orthonormal_module_basis(pair, N, pieces, rng, tol)) {
                frame = *xs;
                found = true;
            }
        }
        if (!found) {
            std::vector<Vec> cand;
            for (const Mat& p : pieces)
                for (int i = 0; i < N; ++i) cand.push_back(p.col(i));
            ThetaFn th = [&](const Vec& a, const Vec& b) { return pair.theta(a, b); };
            frame = tight_frame(N, sd.right_alg.basis, th, cand, tol);
            frame_kind = "tight";
        }
    }
    const int m = static_cast<int>(frame.size());
    FramePresentation fp = frame_presentation(pair, frame, frame, tol);
    BimoduleConnection conn = grassmann_connection(right_module_over(t, fp.q, tol));
    Twisted tw = twisted_operator(t, conn, tol);
    Mat V = operator_norm(tw.q_op - identity(m * N)) <= tol.rel ? identity(m * N) : tw.range;
    auto lift = [&](const Mat& x) -> Mat { return V.adjoint() * kron(identity(m), x) * V; };

    ConversionResult res;
    res.witness.frame = frame;
    SpectralTripleData& out = res.output;
    out.hilbert_dim = static_cast<int>(V.cols());
    for (const Mat& a : t.algebra) out.algebra.push_back(lift(a));
    out.dirac = hermitian_part(V.adjoint() * tw.d_hat * V);
    out.p = t.p;
    Vec phi = V.adjoint() * stack(frame);
    Mat chat = lift(C);
    out.cycle = map_chain(*t.cycle, lift);
    out.phi = phi;
    AlgebraBasis cda = build_cda(out, tol).basis;
    out.state = vector_state_density(cda, phi);

    CheckReport& rep = res.report;
    rep.add("frame", fp.frame_residual, tol.rel, frame_kind + " frame of size " + std::to_string(m));
    rep.add("connection", 0.0, tol.rel, "Grassmann connection of the frame presentation");
    {
        Mat orbit(out.hilbert_dim, cda.size());
        for (int k = 0; k < cda.size(); ++k) orbit.col(k) = cda.basis[static_cast<std::size_t>(k)] * phi;
        const int r = numerical_rank(orbit, tol.rank_cut);
        rep.add_flag("lambda_rank", r == cda.size() && r == out.hilbert_dim, std::abs(r - out.hilbert_dim), 0.0,
                     "rank " + std::to_string(r) + ", dim C = " + std::to_string(cda.size()) + ", dim H = " +
                         std::to_string(out.hilbert_dim));
    }
    // sigma_Phi(Theta_{r,s}) = psi((s|r)), psi(b) = Tr(weight^{-1} b)
    {
        Mat winv = psd_inv_sqrt(pair.weight, tol.rank_cut);
        winv = winv * winv;
        std::vector<Vec> probes = frame;
        Rng rng(seed ^ 0x51a);
        for (int k = 0; k < 3; ++k) probes.push_back(random_vector(N, rng));
        double sig = 0.0, tr = 0.0;
        for (const Vec& r : probes)
            for (const Vec& s : probes) {
                cplx lhs = phi.dot(lift(pair.theta(r, s)) * phi);
                cplx rhs = (winv * pair(s, r)).trace();
                sig = std::max(sig, std::abs(lhs - rhs) / std::max(1.0, r.norm() * s.norm()));
            }
        for (const Mat& w : sd.cda.basis)
            tr = std::max(tr, std::abs(phi.dot(lift(w) * phi) - w.trace()) / std::max(1.0, operator_norm(w)));
        rep.add("sigma_phi", sig, tol.rel, "sigma_Phi(Theta_{r,s}) = psi((s|r))");
        rep.add("trace_bookkeeping", tr, tol.rel, "<Phi|(w (x) 1) Phi> = Tr(w) on C_D(A)");
    }

    TomitaResult tj = tomita_J(out, phi, tol);
    rep.merge(tj.report, "tomita.");
    {
        Rng rng(seed ^ 0x5a9);
        double sw = 0.0;
        for (int k = 0; k < 4; ++k) {
            Vec xi = random_vector(N, rng), eta = random_vector(N, rng);
            Vec a = V.adjoint() * tensor_flat(pair, frame, xi, eta);
            Vec b = V.adjoint() * tensor_flat(pair, frame, eta, xi);
            sw = std::max(sw, (tj.J.apply(a) - b).norm() / std::max(1.0, xi.norm() * eta.norm()));
        }
        rep.add("j_is_swap", sw, tol.rel, "J(xi (x) eta-flat) = eta (x) xi-flat");
    }

    if (t.p % 2 == 0) {
        CycleGrading cg = grading_from_cycle(out, chat, tj.J, std::nullopt, tol);
        rep.merge(cg.report, "grading.");
        out.grading = *cg.epsilon;
        std::vector<Mat> ra;
        for (const Mat& a : out.algebra) ra.push_back(opposite_action(tj.J, a));
        out.right_action = ra;
        res.witness.c_hat = chat;
        res.witness.j_kernel = tj.J.kernel;
        res.witness.epsilon = out.grading;
    } else {
        // doubled: (H' (+) H', diag(D^, -D^), Phi (+) Phi, C^' = diag(C^, -C^), J (+) J)
        SpectralTripleData dbl;
        dbl.hilbert_dim = 2 * out.hilbert_dim;
        for (const Mat& a : out.algebra) dbl.algebra.push_back(direct_sum(a, a));
        dbl.dirac = direct_sum(out.dirac, -out.dirac);
        dbl.p = out.p;
        Mat c2 = direct_sum(chat, -chat);
        Mat k2 = direct_sum(tj.J.kernel, tj.J.kernel);
        Antiunitary j2{k2};
        Vec phi2(dbl.hilbert_dim);
        phi2 << phi, phi;
        dbl.phi = phi2;
        if (t.cycle->degree == 0 && t.cycle->generalized) dbl.cycle = HochschildChain{0, {{c2}}, true, false};
        else dbl.cycle = map_chain(*out.cycle, [](const Mat& x) { return direct_sum(x, x); });
        AlgebraBasis cda2 = build_cda(dbl, tol).basis;
        dbl.state = vector_state_density(cda2, phi2);
        Mat eps2 = c2 * j2.conjugate(c2);
        dbl.grading = eps2;
        std::vector<Mat> ra;
        for (const Mat& a : dbl.algebra) ra.push_back(j2.conjugate(a.adjoint()));
        dbl.right_action = ra;
        rep.add("eps_squared", operator_norm(eps2 * eps2 - identity(dbl.hilbert_dim)), tol.rel, "odd p, doubled");
        rep.add("eps_odd_dirac", rel_residual(anticomm(eps2, dbl.dirac), operator_norm(dbl.dirac)), tol.rel,
                "odd p, doubled");
        res.witness.c_hat = c2;
        res.witness.j_kernel = k2;
        res.witness.epsilon = eps2;
        out = dbl;
        phi = phi2;
    }
    res.witness.phi = phi;
    res.witness.intertwiner = V;
    RiemannianData rd;
    CheckReport riem = check_riemannian(out, tol, &rd);
    rep.add("z_is_one", rel_residual(rd.z - identity(out.hilbert_dim)), tol.rel);
    rep.merge(full_suite(out, mode, tol, Suite::riemannian), "suite.");
    return res;
}

ConversionResult riemannian_to_spinc(const SpectralTripleData& t, const EquivBimodule& E, OrientationMode mode,
                                     const Tolerance& tol, const std::vector<Vec>* frame_hint) {
    check_shapes(t);
    if (!t.phi || !t.grading || !t.cycle) throw NcgError("riemannian_to_spinc: needs phi, grading and an orientation cycle");
    require_ok(check_riemannian(t, tol), "riemannian_to_spinc: riemannian");
    require_ok(check_orientability(t, mode, tol), "riemannian_to_spinc: orientability");
    require_ok(morita_check(E, tol), "riemannian_to_spinc: bimodule");
    const Mat C = pi_D(t.dirac, *t.cycle);
    const int N = t.hilbert_dim;
    const bool odd = t.p % 2 == 1;
    ConversionResult res;
    CheckReport& rep = res.report;

    // the C-side space: H (even) or H+ = range of (1 + C)/2 (odd)
    Mat Vp = identity(N);
    Vec phi = *t.phi;
    if (odd) {
        const Mat& eps = *t.grading;
        Mat pp = 0.5 * (identity(N) + C), pm = 0.5 * (identity(N) - C);
        rep.add("eps_swaps", operator_norm(eps * pp * eps - pm), tol.rel, "eps P+ eps = P-");
        Vp = range_basis(pp, tol.rank_cut);
        Mat W(N, 2 * Vp.cols());
        W << Vp, eps * Vp;
        Mat split = W.adjoint() * t.dirac * W;
        Mat dp = Vp.adjoint() * t.dirac * Vp;
        rep.add("dirac_splits", rel_residual(split - direct_sum(dp, -dp), operator_norm(t.dirac)), tol.rel,
                "D = diag(D', -D') in the basis (H+, eps H+)");
        phi = std::sqrt(2.0) * (Vp.adjoint() * phi);
    }
    auto comp = [&](const Mat& x) -> Mat { return Vp.adjoint() * x * Vp; };
    const int NR = static_cast<int>(Vp.cols());
    const int NE = E.carrier_dim;
    std::vector<Mat> gR;
    for (const Mat& g : clifford_generators(t)) gR.push_back(comp(g));
    const std::vector<Mat>& gE = E.left_gens;
    if (gR.size() != gE.size()) throw NcgError("riemannian_to_spinc: generator lists of C_D(A) and the bimodule differ");
    std::vector<Mat> diag;
    for (std::size_t i = 0; i < gR.size(); ++i) diag.push_back(direct_sum(gR[i], gE[i]));
    AlgebraBasis big = generate_algebra(diag, true, tol, NR + NE);
    AlgebraBasis aR = generate_algebra(gR, true, tol, NR), aE = generate_algebra(gE, true, tol, NE);
    if (big.size() != aR.size() || big.size() != aE.size())
        throw NcgError("riemannian_to_spinc: generator correspondence is not an isomorphism (dims " +
                       std::to_string(aR.size()) + ", " + std::to_string(aE.size()) + ", joint " +
                       std::to_string(big.size()) + ")");
    const int k = big.size();
    Mat ME(static_cast<Eigen::Index>(NE) * NE, k), MR(static_cast<Eigen::Index>(NR) * NR, k);
    for (int i = 0; i < k; ++i) {
        const Mat& b = big.basis[static_cast<std::size_t>(i)];
        ME.col(i) = vec(b.bottomRightCorner(NE, NE));
        MR.col(i) = vec(b.topLeftCorner(NR, NR));
    }
    Mat lift_map = MR * pinv(ME, tol.rank_cut);
    auto pi_inv = [&](const Mat& y) -> Mat { return unvec(lift_map * vec(y), NR, NR); };

    // the left state of E has to be the vector state of phi
    double state_gap = 0.0;
    for (const Mat& b : aE.basis)
        state_gap = std::max(state_gap, std::abs((E.left.rho * b).trace() - phi.dot(pi_inv(b) * phi)));
    rep.add("state_match", state_gap, tol.rel, "Tr(rho_E y) = <phi, y phi>");

    // left frame of E over C
    ThetaFn th = [&](const Vec& a, const Vec& b) { return E.left.theta(a, b); };
    std::vector<Vec> y;
    if (frame_hint && !frame_hint->empty()) {
        const auto& x = *frame_hint;
        const int m = static_cast<int>(x.size());
        Mat cols(static_cast<Eigen::Index>(NE) * NE, m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) cols.col(i * m + j) = vec(th(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]));
        Vec lam = pinv(cols, tol.rank_cut) * vec(identity(NE));
        Mat L(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) L(i, j) = lam(i * m + j);
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(L));
        for (int c = 0; c < m; ++c) {
            const double mu = es.eigenvalues()(c);
            if (mu <= tol.rank_cut * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) continue;
            Vec v = Vec::Zero(NE);
            for (int i = 0; i < m; ++i) v += es.eigenvectors()(i, c) * x[static_cast<std::size_t>(i)];
            y.push_back(std::sqrt(mu) * v);
        }
    }
    if (y.empty() || frame_defect(NE, th, y, y) > tol.rel) {
        std::vector<Vec> cand;
        for (int i = 0; i < NE; ++i) {
            Vec v = Vec::Zero(NE);
            v(i) = 1.0;
            cand.push_back(v);
        }
        y = tight_frame(NE, aE.basis, th, cand, tol);
    }
    rep.add("left_frame", frame_defect(NE, th, y, y), tol.rel, std::to_string(y.size()) + " vectors");
    const int mp = static_cast<int>(y.size());

    Mat VB(static_cast<Eigen::Index>(mp) * NR, NE);
    for (int c = 0; c < NE; ++c) {
        Vec e = Vec::Zero(NE);
        e(c) = 1.0;
        for (int kk = 0; kk < mp; ++kk) VB.block(static_cast<Eigen::Index>(kk) * NR, c, NR, 1) = pi_inv(E.left(e, y[static_cast<std::size_t>(kk)])) * phi;
    }
    const double iso = operator_norm(VB.adjoint() * VB - identity(NE));
    rep.add("isometry", iso, tol.rel, "H (x)_C E -> E");
    auto transport = [&](const Mat& x) -> Mat { return VB.adjoint() * kron(identity(mp), comp(x)) * VB; };

    SpectralTripleData& out = res.output;
    out.hilbert_dim = NE;
    for (const Mat& a : t.algebra) out.algebra.push_back(transport(a));
    out.dirac = hermitian_part(transport(t.dirac));
    out.p = t.p;
    out.right_action = E.right_gens;
    out.state = E.left.rho;
    double act = 0.0;
    for (std::size_t i = 0; i < t.algebra.size(); ++i)
        act = std::max(act, rel_residual(out.algebra[i] - E.left_gens[i], operator_norm(E.left_gens[i])));
    rep.add("left_action", act, tol.rel, "transported a = a acting on E");
    if (!odd) {
        Mat chat = transport(C);
        out.grading = chat;
        out.cycle = map_chain(*t.cycle, transport);
        rep.add("C_hat_odd", rel_residual(anticomm(chat, out.dirac), operator_norm(out.dirac)), tol.rel, "C^ D^ = -D^ C^");
        res.witness.c_hat = chat;
    } else {
        out.cycle = HochschildChain{0, {{identity(NE)}}, true, false};
    }
    res.witness.intertwiner = VB;
    res.witness.frame = y;
    rep.merge(full_suite(out, mode, tol, Suite::spinc), "suite.");
    return res;
}

Intertwiner find_intertwiner(const std::vector<Mat>& g1, const std::vector<Mat>& g2, const Mat& d1, const Mat& d2,
                             const Tolerance& tol) {
    if (g1.size() != g2.size()) throw NcgError("find_intertwiner: generator lists differ in length");
    const int n = static_cast<int>(d1.rows());
    if (d2.rows() != n) throw NcgError("find_intertwiner: dimensions differ");
    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
    Mat I = identity(n);
    // vec(U g1 - g2 U) = (g1^T (x) 1 - 1 (x) g2) vec(U)
    Mat sys(nn * static_cast<Eigen::Index>(g1.size()), nn);
    for (std::size_t i = 0; i < g1.size(); ++i)
        sys.middleRows(static_cast<Eigen::Index>(i) * nn, nn) = kron(g1[i].transpose(), I) - kron(I, g2[i]);
    Intertwiner out;
    Mat Z1 = g1.empty() ? identity(static_cast<int>(nn)) : null_space(sys, tol.rank_cut);
    out.action_family_dim = static_cast<int>(Z1.cols());
    if (Z1.cols() == 0) {
        out.U = Mat::Zero(n, n);
        out.action_residual = out.dirac_residual = kInf;
        return out;
    }
    Mat md = (kron(d1.transpose(), I) - kron(I, d2)) * Z1;
    Mat Z2 = null_space(md, tol.rank_cut * 1e2);
    out.dirac_family_dim = static_cast<int>(Z2.cols());
    Vec u;
    if (Z2.cols() > 0) {
        Mat Z = Z1 * Z2;
        u = Z * (Z.adjoint() * vec(I));
        if (u.norm() < 1e-6) u = Z.col(0);
    } else {
        Eigen::JacobiSVD<Mat> svd(md, Eigen::ComputeFullV);
        u = Z1 * svd.matrixV().col(svd.matrixV().cols() - 1);
    }
    Mat U = unvec(u, n, n);
    Eigen::JacobiSVD<Mat> pol(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.U = pol.matrixU() * pol.matrixV().adjoint();
    double ar = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i)
        ar = std::max(ar, rel_residual(out.U * g1[i] - g2[i] * out.U, operator_norm(g1[i])));
    out.action_residual = ar;
    out.dirac_residual = rel_residual(out.U * d1 - d2 * out.U, operator_norm(d1));
    return out;
}

CheckReport compare_triples(const SpectralTripleData& t, const SpectralTripleData& s, const Tolerance& tol, Mat* U) {
    CheckReport rep;
    if (s.hilbert_dim != t.hilbert_dim) {
        rep.add_flag("dimensions", false, std::abs(s.hilbert_dim - t.hilbert_dim), 0.0,
                     "original " + std::to_string(t.hilbert_dim) + ", recovered " + std::to_string(s.hilbert_dim));
        return rep;
    }
    if (s.algebra.size() != t.algebra.size()) {
        rep.add_flag("generators", false, 1.0, 0.0, "algebra generator lists differ in length");
        return rep;
    }
    std::vector<Mat> g1 = t.algebra, g2 = s.algebra;
    if (t.right_action && s.right_action && t.right_action->size() == s.right_action->size()) {
        g1.insert(g1.end(), t.right_action->begin(), t.right_action->end());
        g2.insert(g2.end(), s.right_action->begin(), s.right_action->end());
    }
    Intertwiner it = find_intertwiner(g1, g2, t.dirac, s.dirac, tol);
    if (U) *U = it.U;
    const std::string fam = "action family dim " + std::to_string(it.action_family_dim) + ", D-matched dim " +
                            std::to_string(it.dirac_family_dim);
    rep.add_flag("intertwiner_exists", it.action_family_dim > 0, it.action_family_dim, 0.0, fam);
    rep.add("intertwiner_dirac", it.dirac_residual, 1e-8, "|U D1 - D2 U|");
    rep.add("intertwiner_action", it.action_residual, 1e-10, "|U a1 - a2 U|");
    rep.add("intertwiner_unitary", operator_norm(it.U * it.U.adjoint() - identity(t.hilbert_dim)), tol.rel);
    if (t.grading && s.grading)
        rep.add("intertwiner_grading", operator_norm(it.U * *t.grading - *s.grading * it.U), kInf, "diagnostic");
    return rep;
}

RoundTrip round_trip_check(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol, std::uint64_t seed) {
    RoundTrip rt;
    rt.riemannian = spinc_to_riemannian(t, mode, tol, seed);
    SpincData sd = spinc_bimodule(t, tol);
    rt.recovered = riemannian_to_spinc(rt.riemannian.output, sd.bimodule, mode, tol, &rt.riemannian.witness.frame);
    rt.report = compare_triples(t, rt.recovered.output, tol, &rt.U);
    rt.report.merge(rt.recovered.report, "recovered.");
    return rt;
}

Doubled double_odd_triple(const SpectralTripleData& t, const Tolerance& tol) {
    check_shapes(t);
    if (t.grading) throw NcgError("double_odd_triple: input already carries a grading");
    const int n = t.hilbert_dim;
    Doubled out;
    SpectralTripleData& d = out.triple;
    d.hilbert_dim = 2 * n;
    for (const Mat& a : t.algebra) d.algebra.push_back(direct_sum(a, a));
    if (t.right_action) {
        std::vector<Mat> r;
        for (const Mat& b : *t.right_action) r.push_back(direct_sum(b, b));
        d.right_action = r;
    }
    d.dirac = direct_sum(t.dirac, -t.dirac);
    Mat sw(2, 2), cl(2, 2);
    sw << 0, 1, 1, 0;
    cl << 0, -I_unit, I_unit, 0;
    d.grading = kron(sw, identity(n));
    out.cliff = kron(cl, identity(n));
    d.p = t.p;
    if (t.state) d.state = direct_sum(*t.state, *t.state);
    const Mat& G = *d.grading;
    const Mat& c = out.cliff;
    CheckReport& rep = out.report;
    rep.add("gamma_involution", operator_norm(G * G - identity(2 * n)), tol.rel);
    rep.add("gamma_odd_dirac", rel_residual(anticomm(G, d.dirac), operator_norm(d.dirac)), tol.rel);
    rep.add("cliff_odd", operator_norm(G * c * G + c), tol.rel);
    rep.add("cliff_dirac", rel_residual(anticomm(c, d.dirac), operator_norm(d.dirac)), tol.rel, "c D' + D' c");
    double ca = 0.0, ga = 0.0;
    for (const Mat& a : d.algebra) {
        ca = std::max(ca, rel_residual(comm(c, a), operator_norm(a)));
        ga = std::max(ga, rel_residual(comm(G, a), operator_norm(a)));
    }
    rep.add("cliff_algebra", ca, tol.rel);
    rep.add("gamma_even_algebra", ga, tol.rel);
    rep.add("first_summand", operator_norm(d.dirac.topLeftCorner(n, n) - t.dirac), 0.0, "compression returns D");
    return out;
}

CheckReport appendix_equivalence_check(const SpectralTripleData& t, int samples, const Tolerance&) {
    check_shapes(t);
    CheckReport rep;
    const int n = t.hilbert_dim;
    const Mat& D = t.dirac;
    const Mat Z = Mat::Zero(n, n), I = identity(n);
    auto blocks = [&](const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
        Mat m(2 * n, 2 * n);
        m << a, b, c, d;
        return m;
    };
    Mat d2 = blocks(Z, -I_unit * D, I_unit * D, Z);
    Mat g2 = blocks(I, Z, Z, -I);
    Mat U = blocks(I, Z, Z, I_unit * I);
    Mat d3 = blocks(Z, -D, -D, Z);
    Mat d1 = blocks(D, Z, Z, -D);
    Mat g1 = blocks(Z, I, I, Z);
    rep.add("unitary_conjugation", operator_norm(U * d2 * U.adjoint() - d3), 0.0, "U D'' U* = D'''");
    rep.add("connes_grading", operator_norm(anticomm(g2, d2)), 0.0);
    double worst = 0.0, e0 = 0.0, e1 = 0.0;
    const double nd = std::max(1.0, operator_norm(D));
    const int s = std::max(samples, 2);
    for (int k = 0; k < s; ++k) {
        const double th = (std::numbers::pi / 2.0) * k / (s - 1);
        // exact at the endpoints
        const double c = k == 0 ? 1.0 : (k == s - 1 ? 0.0 : std::cos(th));
        const double sn = k == 0 ? 0.0 : (k == s - 1 ? 1.0 : std::sin(th));
        Mat dt = blocks(sn * D, -c * D, -c * D, -sn * D);
        Mat gt = blocks(c * I, sn * I, sn * I, -c * I);
        worst = std::max({worst, operator_norm(gt * gt - identity(2 * n)), herm_defect(gt),
                          operator_norm(anticomm(gt, dt)) / nd, herm_defect(dt) / nd});
        if (k == 0) e0 = std::max(operator_norm(dt - d3), operator_norm(gt - g2));
        if (k == s - 1) e1 = std::max(operator_norm(dt - d1), operator_norm(gt - g1));
    }
    rep.add("homotopy", worst, 1e-12, std::to_string(s) + " samples on [0, pi/2]");
    rep.add("endpoint_start", e0, 0.0, "(D_0, G_0) = (D''', G'')");
    rep.add("endpoint_end", e1, 0.0, "(D_pi/2, G_pi/2) = (D', G')");
    return rep;
}

}  // namespace ncg
