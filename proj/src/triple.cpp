#include "ncg/triple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void need_square(const Mat& m, int n, const char* what) {
    if (m.rows() != n || m.cols() != n) throw NcgError(std::string("triple: ") + what + " has the wrong shape");
}

Vec unit_vec(int n, int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
}

bool is_odd(const Mat& x, const Mat& grading, double tol) {
    return operator_norm(grading * x * grading + x) <= tol * std::max(1.0, operator_norm(x));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void check_shapes(const SpectralTripleData& t) {
    const int n = t.hilbert_dim;
    if (n <= 0) throw NcgError("triple: hilbert_dim must be positive");
    need_square(t.dirac, n, "dirac");
    for (const Mat& a : t.algebra) need_square(a, n, "algebra generator");
    if (t.grading) need_square(*t.grading, n, "grading");
    if (t.right_action)
        for (const Mat& b : *t.right_action) need_square(b, n, "right action generator");
    if (t.state) need_square(*t.state, n, "state");
    if (t.phi && t.phi->size() != n) throw NcgError("triple: phi has the wrong length");
    if (t.cycle)
        for (const auto& term : t.cycle->terms) {
            if (static_cast<int>(term.size()) != t.cycle->degree + 1)
                throw NcgError("triple: cycle term has the wrong number of legs");
            for (const Mat& leg : term) need_square(leg, n, "cycle leg");
        }
    if (t.p < 0) throw NcgError("triple: p must be nonnegative");
}

AlgebraBasis algebra_of(const SpectralTripleData& t, const Tolerance& tol) {
    return generate_algebra(t.algebra, true, tol, t.hilbert_dim);
}

AlgebraBasis right_algebra_of(const SpectralTripleData& t, const Tolerance& tol) {
    if (!t.right_action) throw NcgError("triple: no right action");
    return generate_algebra(*t.right_action, true, tol, t.hilbert_dim);
}

CheckReport validate_triple(const SpectralTripleData& t, const Tolerance& tol) {
    check_shapes(t);
    CheckReport rep;
    const double nd = operator_norm(t.dirac);
    const double dh = herm_defect(t.dirac) / std::max(1.0, nd);
    if (dh > tol.rel) throw NcgError("triple: Dirac operator is not self-adjoint (defect " + fmt(dh) + ")");
    rep.add("dirac_selfadjoint", dh, tol.rel);
    AlgebraBasis alg = algebra_of(t, tol);
    rep.add("algebra_closure", closure_defect(alg), tol.rel, "dim " + std::to_string(alg.size()));
    if (t.grading) {
        const Mat& g = *t.grading;
        const int n = t.hilbert_dim;
        rep.add("grading_selfadjoint", herm_defect(g), tol.rel);
        rep.add("grading_involution", operator_norm(g * g - identity(n)), tol.rel);
        rep.add("grading_odd_dirac", rel_residual(anticomm(g, t.dirac), nd), tol.rel);
        double ga = 0.0;
        for (const Mat& a : t.algebra) ga = std::max(ga, rel_residual(comm(g, a), operator_norm(a)));
        rep.add("grading_even_algebra", ga, tol.rel);
    } else {
        rep.skip("grading", "no grading supplied");
    }
    EigResult eig = herm_eig(hermitian_part(t.dirac), tol);
    Mat absd = eig.vectors * eig.values.cwiseAbs().cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    for (std::size_t k = 0; k < t.algebra.size(); ++k) {
        const Mat& a = t.algebra[k];
        double c1 = operator_norm(comm(t.dirac, a));
        double c2 = operator_norm(comm(absd, a));
        rep.add("commutator_norms[" + std::to_string(k) + "]", c1, kInf, "|[D,a]|=" + fmt(c1) + " |[|D|,a]|=" + fmt(c2));
    }
    return rep;
}

CliffordAlgebra build_cda(const SpectralTripleData& t, const Tolerance& tol) {
    std::vector<Mat> gens = t.algebra;
    for (const Mat& a : t.algebra) gens.push_back(comm(t.dirac, a));
    CliffordAlgebra out;
    out.basis = generate_algebra(gens, true, tol, t.hilbert_dim);
    out.parity.assign(static_cast<std::size_t>(out.basis.size()), 0);
    if (t.grading) {
        const Mat& g = *t.grading;
        for (int k = 0; k < out.basis.size(); ++k) {
            const Mat& b = out.basis.basis[static_cast<std::size_t>(k)];
            Mat c = g * b * g;
            if ((c - b).norm() <= tol.rel) out.parity[static_cast<std::size_t>(k)] = 1;
            else if ((c + b).norm() <= tol.rel) out.parity[static_cast<std::size_t>(k)] = -1;
        }
    }
    return out;
}

Mat pi_D(const Mat& dirac, const HochschildChain& c) {
    Mat out = Mat::Zero(dirac.rows(), dirac.cols());
    for (const auto& term : c.terms) {
        if (static_cast<int>(term.size()) != c.degree + 1) throw NcgError("pi_D: chain degree does not match its legs");
        Mat prod = term[0];
        for (std::size_t l = 1; l < term.size(); ++l) prod = prod * comm(dirac, term[l]);
        out += prod;
    }
    return out;
}

HochschildChain hochschild_boundary(const HochschildChain& c) {
    HochschildChain out;
    out.generalized = c.generalized;
    if (c.degree == 0) {
        out.degree = 0;
        out.degenerate = true;
        return out;
    }
    const int p = c.degree;
    out.degree = p - 1;
    for (const auto& term : c.terms) {
        for (int i = 0; i < p; ++i) {
            std::vector<Mat> legs;
            for (int l = 0; l < i; ++l) legs.push_back(term[static_cast<std::size_t>(l)]);
            legs.push_back(term[static_cast<std::size_t>(i)] * term[static_cast<std::size_t>(i + 1)]);
            for (int l = i + 2; l <= p; ++l) legs.push_back(term[static_cast<std::size_t>(l)]);
            if (i % 2) legs[0] = -legs[0];
            out.terms.push_back(std::move(legs));
        }
        std::vector<Mat> legs;
        legs.push_back(term[static_cast<std::size_t>(p)] * term[0]);
        for (int l = 1; l < p; ++l) legs.push_back(term[static_cast<std::size_t>(l)]);
        if (p % 2) legs[0] = -legs[0];
        out.terms.push_back(std::move(legs));
    }
    return out;
}

double chain_norm(const HochschildChain& c) {
    if (c.terms.empty()) return 0.0;
    const std::size_t legs = c.terms[0].size();
    std::vector<Mat> bases(legs);
    for (std::size_t l = 0; l < legs; ++l) {
        const Mat& first = c.terms[0][l];
        Mat stack(first.size(), static_cast<Eigen::Index>(c.terms.size()));
        for (std::size_t t = 0; t < c.terms.size(); ++t) stack.col(static_cast<Eigen::Index>(t)) = vec(c.terms[t][l]);
        bases[l] = range_basis(stack, 1e-14);
        if (bases[l].cols() == 0) return 0.0;
    }
    Eigen::Index total = 1;
    for (const Mat& b : bases) total *= b.cols();
    Vec acc = Vec::Zero(total);
    for (const auto& term : c.terms) {
        Vec v = bases[0].adjoint() * vec(term[0]);
        for (std::size_t l = 1; l < legs; ++l) {
            Vec w = bases[l].adjoint() * vec(term[l]);
            Vec nv(v.size() * w.size());
            for (Eigen::Index i = 0; i < v.size(); ++i) nv.segment(i * w.size(), w.size()) = v(i) * w;
            v = nv;
        }
        acc += v;
    }
    return acc.norm();
}

namespace {

// (a0 da1 .. dap) * x as a sum of forms
std::vector<std::vector<Mat>> right_multiply(const std::vector<Mat>& term, const Mat& x) {
    if (term.size() == 1) return {{term[0] * x}};
    std::vector<std::vector<Mat>> out;
    std::vector<Mat> head(term.begin(), term.end() - 1);
    std::vector<Mat> first = head;
    first.push_back(term.back() * x);
    out.push_back(first);
    for (auto t : right_multiply(head, term.back())) {
        t[0] = -t[0];
        t.push_back(x);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

HochschildChain form_product(const HochschildChain& a, const HochschildChain& b) {
    HochschildChain out;
    out.degree = a.degree + b.degree;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms)
            for (auto piece : right_multiply(s, t[0])) {
                for (std::size_t l = 1; l < t.size(); ++l) piece.push_back(t[l]);
                out.terms.push_back(std::move(piece));
            }
    return out;
}

CheckReport check_orientability(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol) {
    CheckReport rep;
    if (!t.cycle) {
        rep.skip("orientation", "no orientation cycle");
        return rep;
    }
    check_shapes(t);
    const HochschildChain& c = *t.cycle;
    const int n = t.hilbert_dim;
    // a generalized cycle may be handed over as its degree-0 representative C itself
    const bool deg_ok = c.degree == t.p || (mode == OrientationMode::generalized && c.generalized && c.degree == 0);
    rep.add_flag("cycle_degree", deg_ok, std::abs(c.degree - t.p), 0.0,
                 "cycle degree " + std::to_string(c.degree) + ", declared p " + std::to_string(t.p));
    AlgebraBasis alg = algebra_of(t, tol);
    double legs = 0.0, first = 0.0;
    for (const auto& term : c.terms) {
        for (std::size_t l = 1; l < term.size(); ++l) legs = std::max(legs, alg.membership_residual(term[l]));
        first = std::max(first, alg.membership_residual(term[0]));
    }
    rep.add("legs_in_algebra", legs, tol.rel);
    if (mode == OrientationMode::strict || !c.generalized) {
        rep.add("first_leg_in_algebra", first, tol.rel,
                c.generalized ? "generalized cycle checked in strict mode" : "");
    } else {
        double cm = 0.0;
        for (const auto& term : c.terms) {
            const double s = operator_norm(term[0]);
            for (const Mat& a : t.algebra) cm = std::max(cm, rel_residual(comm(term[0], a), s * operator_norm(a)));
            if (t.right_action)
                for (const Mat& b : *t.right_action) cm = std::max(cm, rel_residual(comm(term[0], b), s * operator_norm(b)));
        }
        rep.add("first_leg_commutes", cm, tol.rel, "generalized cycle");
    }
    if (c.degree == 0) {
        rep.add("hochschild_cycle", 0.0, tol.rel, "0-chains are cycles");
    } else {
        const double nc = std::max(1.0, chain_norm(c));
        rep.add("hochschild_cycle", chain_norm(hochschild_boundary(c)) / nc, tol.rel);
    }
    Mat C = pi_D(t.dirac, c);
    const double ncop = operator_norm(C);
    const double nd = operator_norm(t.dirac);
    rep.add("C_selfadjoint", herm_defect(C) / std::max(1.0, ncop), tol.rel);
    rep.add("C_squares_to_one", rel_residual(C * C - identity(n), ncop * ncop), tol.rel);
    const double sign = (t.p % 2 == 0) ? -1.0 : 1.0;  // (-1)^{p-1}
    rep.add("C_dirac_sign_rule", rel_residual(C * t.dirac - sign * t.dirac * C, ncop * nd), tol.rel,
            t.p % 2 == 0 ? "CD + DC" : "CD - DC");
    double ca = 0.0;
    for (const Mat& a : t.algebra) ca = std::max(ca, rel_residual(comm(C, a), ncop * operator_norm(a)));
    rep.add("C_commutes_algebra", ca, tol.rel);
    return rep;
}

OrientationFit fit_orientation_cycle(const SpectralTripleData& t, int p, int term_budget, const Tolerance& tol,
                                     const std::optional<Mat>& target) {
    check_shapes(t);
    Mat C;
    if (target) C = *target;
    else if (t.grading) C = *t.grading;
    else throw NcgError("fit_orientation_cycle: no target operator and no grading");
    AlgebraBasis alg = algebra_of(t, tol);
    const int k = alg.size();
    long long unknowns = 1;
    for (int l = 0; l <= p; ++l) unknowns *= k;
    if (unknowns > term_budget) throw NcgError("fit_orientation_cycle: chain space exceeds the term budget");
    const auto nu = static_cast<Eigen::Index>(unknowns);
    auto legs_of = [&](long long idx) {
        std::vector<Mat> legs(static_cast<std::size_t>(p + 1));
        for (int l = p; l >= 0; --l) {
            legs[static_cast<std::size_t>(l)] = alg.basis[static_cast<std::size_t>(idx % k)];
            idx /= k;
        }
        return legs;
    };
    const double nC = std::max(1.0, C.norm());
    Mat M(C.size(), nu);
    for (Eigen::Index u = 0; u < nu; ++u) {
        HochschildChain one{p, {legs_of(u)}};
        M.col(u) = vec(pi_D(t.dirac, one));
    }
    Mat Z = identity(static_cast<int>(nu));
    if (p >= 1) {
        // b(c) in coordinates of A^{(x)p}
        long long rows = 1;
        for (int l = 0; l < p; ++l) rows *= k;
        Mat B = Mat::Zero(static_cast<Eigen::Index>(rows), nu);
        for (Eigen::Index u = 0; u < nu; ++u) {
            HochschildChain bd = hochschild_boundary(HochschildChain{p, {legs_of(u)}});
            for (const auto& term : bd.terms) {
                Vec v = alg.coefficients(term[0]);
                for (std::size_t l = 1; l < term.size(); ++l) {
                    Vec w = alg.coefficients(term[l]);
                    Vec nv(v.size() * w.size());
                    for (Eigen::Index i = 0; i < v.size(); ++i) nv.segment(i * w.size(), w.size()) = v(i) * w;
                    v = nv;
                }
                B.col(u) += v;
            }
        }
        Z = null_space(B, tol.rank_cut);
    }
    OrientationFit fit;
    if (Z.cols() == 0) {
        fit.residual = C.norm() / nC;
        return fit;
    }
    Mat MZ = M * Z;
    Eigen::JacobiSVD<Mat> svd(MZ, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec y = svd.solve(vec(C));
    Vec coef = Z * y;
    fit.chain.degree = p;
    for (Eigen::Index u = 0; u < nu; ++u) {
        if (std::abs(coef(u)) < 1e-14) continue;
        auto legs = legs_of(u);
        legs[0] = coef(u) * legs[0];
        fit.chain.terms.push_back(std::move(legs));
    }
    fit.residual = (pi_D(t.dirac, fit.chain) - C).norm() / nC;
    fit.feasible = fit.residual <= tol.rel;
    return fit;
}

CheckReport check_first_order(const SpectralTripleData& t, const Tolerance& tol) {
    CheckReport rep;
    if (!t.right_action) {
        rep.skip("first_order", "no right action");
        return rep;
    }
    check_shapes(t);
    double r0 = 0.0, r1 = 0.0;
    for (const Mat& a : t.algebra) {
        Mat da = comm(t.dirac, a);
        for (const Mat& b : *t.right_action) {
            const double nb = operator_norm(b);
            r0 = std::max(r0, rel_residual(comm(a, b), operator_norm(a) * nb));
            bool graded = t.grading && is_odd(b, *t.grading, tol.rel);
            Mat c = graded ? anticomm(da, b) : comm(da, b);
            r1 = std::max(r1, rel_residual(c, operator_norm(da) * nb));
        }
    }
    rep.add("order_zero", r0, tol.rel, "[a, b^op]");
    rep.add("first_order", r1, tol.rel, "[[D,a], b^op]");
    return rep;
}

LeftPairing clifford_pairing(const SpectralTripleData& t, const AlgebraBasis& cda) {
    return LeftPairing::make(cda, t.rho());
}

CheckReport check_finiteness(const SpectralTripleData& t, const Tolerance& tol) {
    check_shapes(t);
    CheckReport rep;
    const int n = t.hilbert_dim;
    const Mat rho = t.rho();
    CliffordAlgebra cda = build_cda(t, tol);
    const AlgebraBasis& C = cda.basis;
    const int k = C.size();

    Mat g(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            g(a, b) = (rho * C.basis[static_cast<std::size_t>(a)].adjoint() * C.basis[static_cast<std::size_t>(b)]).trace();
    const double gmin = min_eigenvalue(g);
    const double gmax = std::max(operator_norm(g), 1e-300);
    rep.add_flag("state_faithful", herm_defect(g) <= tol.rel * gmax && gmin > tol.rank_cut * gmax, gmin / gmax,
                 tol.rank_cut, "min of Tr(rho w*w) over the unit sphere of C_D(A), relative");
    if (!rep.ok()) return rep;

    LeftPairing L = clifford_pairing(t, C);
    std::vector<Vec> cand;
    for (int i = 0; i < n; ++i) cand.push_back(unit_vec(n, i));
    ThetaFn th = [&](const Vec& x, const Vec& y) { return L.theta(x, y); };
    std::vector<Vec> frame = tight_frame(n, C.basis, th, cand, tol);
    rep.add("frame", frame_defect(n, th, frame, frame), tol.rel,
            "projector size " + std::to_string(frame.size()) + " over C_D(A) of dim " + std::to_string(k));

    double sp = 0.0;
    const double scale = std::max(1.0, operator_norm(rho));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec ei = unit_vec(n, i), ej = unit_vec(n, j);
            cplx lhs = ej.dot(ei);
            cplx rhs = (rho * L(ei, ej)).trace();
            sp = std::max(sp, std::abs(lhs - rhs) / scale);
        }
    rep.add("scalar_product", sp, tol.rel, "<eta|xi> = psi(<xi|eta>_C)");
    return rep;
}

SpincData spinc_bimodule(const SpectralTripleData& t, const Tolerance& tol) {
    SpincData d;
    d.cda = build_cda(t, tol).basis;
    d.right_alg = right_algebra_of(t, tol);
    LeftPairing L = clifford_pairing(t, d.cda);
    d.fit = fit_right_pairing(L, d.right_alg, tol);
    d.bimodule.carrier_dim = t.hilbert_dim;
    d.bimodule.left_gens = t.algebra;
    for (const Mat& a : t.algebra) d.bimodule.left_gens.push_back(comm(t.dirac, a));
    d.bimodule.right_gens = *t.right_action;
    d.bimodule.left = L;
    d.bimodule.right = d.fit.pairing;
    return d;
}

CheckReport check_spinc(const SpectralTripleData& t, const Tolerance& tol) {
    CheckReport rep;
    if (!t.right_action) {
        rep.skip("spinc", "no right action");
        return rep;
    }
    check_shapes(t);
    SpincData d = spinc_bimodule(t, tol);
    AlgebraBasis comm_c = commutant(d.cda, tol);
    const double c1 = span_containment(comm_c, d.right_alg.basis);
    const double c2 = span_containment(d.right_alg, comm_c.basis);
    const bool same = comm_c.size() == d.right_alg.size() && c1 <= tol.rel && c2 <= tol.rel;
    rep.add_flag("commutant_is_right_algebra", same, std::max(c1, c2), tol.rel,
                 "dim commutant(C_D(A)) = " + std::to_string(comm_c.size()) + ", dim right algebra = " +
                     std::to_string(d.right_alg.size()));
    std::string wdet = "solution dim " + std::to_string(d.fit.solution_dim);
    if (d.right_alg.size() > 0) {
        Mat w = d.fit.pairing.weight;
        const double s = w.trace().real() / t.hilbert_dim;
        if (operator_norm(w - s * identity(t.hilbert_dim)) <= tol.rel * std::max(1.0, std::abs(s)))
            wdet += ", scalar weight " + fmt(s);
    }
    rep.add_flag("right_pairing_fit", d.fit.positive && d.fit.residual <= tol.rel, d.fit.residual, tol.rel, wdet);
    rep.merge(morita_check(d.bimodule, tol), "morita.");
    return rep;
}

CheckReport check_riemannian(const SpectralTripleData& t, const Tolerance& tol, RiemannianData* out) {
    CheckReport rep;
    if (!t.phi || !t.grading) {
        rep.skip("riemannian", "needs phi and grading");
        return rep;
    }
    check_shapes(t);
    const int n = t.hilbert_dim;
    const Vec& phi = *t.phi;
    const Mat& eps = *t.grading;
    const Mat rho = t.rho();
    AlgebraBasis C = build_cda(t, tol).basis;
    const int k = C.size();
    Mat orbit(n, k);
    for (int a = 0; a < k; ++a) orbit.col(a) = C.basis[static_cast<std::size_t>(a)] * phi;
    const int rank = numerical_rank(orbit, tol.rank_cut);
    RiemannianData data;
    data.cyclic_rank = rank;
    data.separating_rank = rank;
    rep.add_flag("cyclic", rank == n, n - rank, 0.0, "rank " + std::to_string(rank) + " of " + std::to_string(n));
    rep.add_flag("separating", rank == k, k - rank, 0.0,
                 "rank " + std::to_string(rank) + " of dim C_D(A) " + std::to_string(k));

    std::vector<Mat> zs = center(C, tol);
    const auto nz = static_cast<Eigen::Index>(zs.size());
    Mat sys(static_cast<Eigen::Index>(k) * k, nz);
    Vec rhs(static_cast<Eigen::Index>(k) * k);
    for (int w = 0; w < k; ++w)
        for (int v = 0; v < k; ++v) {
            const Mat& W = C.basis[static_cast<std::size_t>(w)];
            const Mat& V = C.basis[static_cast<std::size_t>(v)];
            const Eigen::Index row = static_cast<Eigen::Index>(w) * k + v;
            rhs(row) = orbit.col(v).dot(orbit.col(w));
            for (Eigen::Index s = 0; s < nz; ++s) sys(row, s) = (rho * W * zs[static_cast<std::size_t>(s)] * V.adjoint()).trace();
        }
    Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec c = svd.solve(rhs);
    data.z = Mat::Zero(n, n);
    for (Eigen::Index s = 0; s < nz; ++s) data.z += c(s) * zs[static_cast<std::size_t>(s)];
    Mat ns = null_space(sys, tol.rank_cut);
    if (nz > 0 && numerical_rank(sys, tol.rank_cut) < nz)
        for (Eigen::Index j = 0; j < ns.cols(); ++j) data.z_solutions.push_back(ns.col(j));
    const double zres = (sys * c - rhs).norm() / std::max(1.0, rhs.norm());
    rep.add("z_solves_pairing", zres, tol.rel,
            "center dim " + std::to_string(nz) + ", ambiguity dim " + std::to_string(data.z_solutions.size()));
    const double zn = std::max(operator_norm(data.z), 1e-300);
    const double zmin = min_eigenvalue(hermitian_part(data.z));
    rep.add_flag("z_positive", herm_defect(data.z) <= tol.rel * zn && zmin > tol.rank_cut * zn, zmin, tol.rank_cut,
                 "min eigenvalue of z");

    const double np = std::max(1.0, phi.norm());
    rep.add("grading_fixes_phi", (eps * phi - phi).norm() / np, tol.rel);
    rep.add("grading_odd_dirac", rel_residual(anticomm(eps, t.dirac), operator_norm(t.dirac)), tol.rel);
    double ea = 0.0;
    for (const Mat& a : t.algebra) ea = std::max(ea, rel_residual(comm(eps, a), operator_norm(a)));
    rep.add("grading_even_algebra", ea, tol.rel);

    double tr = 0.0;
    for (int w = 0; w < k; ++w)
        for (int v = 0; v < k; ++v) {
            const Mat& W = C.basis[static_cast<std::size_t>(w)];
            const Mat& V = C.basis[static_cast<std::size_t>(v)];
            cplx d = phi.dot(W * (V * phi)) - phi.dot(V * (W * phi));
            tr = std::max(tr, std::abs(d) / std::max(1.0, operator_norm(W) * operator_norm(V) * phi.squaredNorm()));
        }
    rep.add("state_tracial", tr, tol.rel, "<Phi|wv Phi> = <Phi|vw Phi>");
    if (out) *out = data;
    return rep;
}

CheckReport check_extras(const SpectralTripleData& t, const Tolerance& tol, const Mat* j_kernel) {
    check_shapes(t);
    CheckReport rep;
    const int n = t.hilbert_dim;
    // closedness diagnostic
    if (t.grading && !t.algebra.empty()) {
        EigResult eig = herm_eig(hermitian_part(t.dirac), tol);
        RVec w(eig.values.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::pow(1.0 + eig.values(i) * eig.values(i), -0.5 * t.p);
        Mat weight = eig.vectors * w.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
        double worst = 0.0;
        const std::size_t g = t.algebra.size();
        for (std::size_t s = 0; s < std::min<std::size_t>(g, 4); ++s) {
            Mat prod = *t.grading;
            for (int l = 0; l < t.p; ++l) prod = prod * comm(t.dirac, t.algebra[(s + static_cast<std::size_t>(l)) % g]);
            prod = prod * t.algebra[s] * weight;
            worst = std::max(worst, std::abs(prod.trace()));
        }
        rep.add("closedness", worst, kInf, "max |Tr(Gamma [D,a1]..[D,ap] b (1+D^2)^{-p/2})|, diagnostic");
    } else {
        rep.skip("closedness", "needs grading and algebra");
    }
    // connectivity: kernel of a -> [D,a] as orthogonal projectors
    AlgebraBasis alg = algebra_of(t, tol);
    const int k = alg.size();
    Mat map(static_cast<Eigen::Index>(n) * n, k);
    for (int a = 0; a < k; ++a) map.col(a) = vec(comm(t.dirac, alg.basis[static_cast<std::size_t>(a)]));
    Mat ker = null_space(map, std::sqrt(tol.rank_cut));
    std::vector<Mat> kel;
    for (Eigen::Index j = 0; j < ker.cols(); ++j) kel.push_back(alg.element(ker.col(j)));
    AlgebraBasis kalg = generate_algebra(kel, true, tol, n);
    std::vector<Mat> kc = center(kalg, tol);
    Rng rng(0xabc);
    Mat h = Mat::Zero(n, n);
    for (const Mat& z : kc) h += rng.normal() * hermitian_part(z) + rng.normal() * hermitian_part(I_unit * z);
    EigResult he = herm_eig(hermitian_part(h), tol);
    std::vector<Mat> projs;
    const double hs = std::max(1.0, operator_norm(h));
    for (Eigen::Index i = 0; i < he.values.size();) {
        Eigen::Index j = i;
        while (j < he.values.size() && he.values(j) - he.values(i) <= 1e-7 * hs) ++j;
        Mat v = he.vectors.middleCols(i, j - i);
        projs.push_back(v * v.adjoint());
        i = j;
    }
    Mat sum = Mat::Zero(n, n);
    double orth = 0.0;
    for (std::size_t a = 0; a < projs.size(); ++a) {
        sum += projs[a];
        for (std::size_t b = a + 1; b < projs.size(); ++b) orth = std::max(orth, operator_norm(projs[a] * projs[b]));
    }
    rep.add("connectivity", std::max(orth, operator_norm(sum - identity(n))), tol.rel,
            std::to_string(projs.size()) + " orthogonal projector(s) in the kernel of a -> [D,a]");
    // reality
    if (j_kernel) {
        const Mat& K = *j_kernel;
        auto conj_by_j = [&](const Mat& x) -> Mat { return K * x.conjugate() * K.adjoint(); };
        const double j2 = (K * K.conjugate() - identity(n)).norm() < (K * K.conjugate() + identity(n)).norm() ? 1.0 : -1.0;
        Mat jd = conj_by_j(t.dirac);
        const double sd = (jd - t.dirac).norm() <= (jd + t.dirac).norm() ? 1.0 : -1.0;
        std::string signs = std::string("J^2 ") + (j2 > 0 ? "+" : "-") + ", JD " + (sd > 0 ? "+" : "-") + " DJ";
        double sign_res = std::max(operator_norm(K * K.conjugate() - j2 * identity(n)), rel_residual(jd - sd * t.dirac, operator_norm(t.dirac)));
        if (t.grading) {
            Mat jg = conj_by_j(*t.grading);
            const double sg = (jg - *t.grading).norm() <= (jg + *t.grading).norm() ? 1.0 : -1.0;
            signs += std::string(", JGamma ") + (sg > 0 ? "+" : "-") + " GammaJ";
            sign_res = std::max(sign_res, operator_norm(jg - sg * *t.grading));
        }
        rep.add("reality_signs", sign_res, tol.rel, signs);
        if (t.right_action && t.right_action->size() == t.algebra.size()) {
            double op = 0.0;
            for (std::size_t i = 0; i < t.algebra.size(); ++i)
                op = std::max(op, rel_residual(conj_by_j(t.algebra[i].adjoint()) - (*t.right_action)[i],
                                               operator_norm(t.algebra[i])));
            rep.add("reality_opposite", op, tol.rel, "J a* J^-1 = a^op");
        }
    } else {
        rep.skip("reality", "no J supplied");
    }
    return rep;
}

std::vector<double> zeta_diagnostic(const SpectralTripleData& t, const std::vector<double>& s_values) {
    check_shapes(t);
    EigResult eig = herm_eig(hermitian_part(t.dirac));
    std::vector<double> out;
    for (double s : s_values) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i) sum += std::pow(1.0 + eig.values(i) * eig.values(i), -0.5 * s);
        out.push_back(sum);
    }
    return out;
}

CheckReport full_suite(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol, Suite suite) {
    CheckReport rep;
    rep.merge(validate_triple(t, tol), "validity.");
    rep.merge(check_orientability(t, mode, tol), "orientability.");
    rep.merge(check_first_order(t, tol), "first_order.");
    rep.merge(check_finiteness(t, tol), "finiteness.");
    if (suite == Suite::automatic) suite = t.phi ? Suite::riemannian : Suite::spinc;
    if (suite == Suite::spinc || suite == Suite::all) rep.merge(check_spinc(t, tol), "spinc.");
    if (suite == Suite::riemannian || suite == Suite::all) rep.merge(check_riemannian(t, tol), "riemannian.");
    rep.merge(check_extras(t, tol), "extras.");
    return rep;
}

}  // namespace ncg
