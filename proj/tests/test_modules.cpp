#include "doctest.h"
#include "ncg/examples.hpp"
#include "ncg/kasparov.hpp"
#include "ncg/modules.hpp"

using namespace ncg;

namespace {

ProjectiveModule scalar_module(int m, const Mat& q, const Mat& r) {
    ProjectiveModule mod;
    mod.base = generate_algebra({}, true, {}, 1);
    mod.m = m;
    mod.q = q;
    mod.r = r;
    mod.side = Side::right;
    return mod;
}

Mat col2(cplx a, cplx b) {
    Mat e(2, 1);
    e << a, b;
    return e;
}

// C^2 as M_2 - C bimodule: <x|y> = x y*, (x|y) = x* y
EquivBimodule column_bimodule() {
    EquivBimodule bi;
    bi.carrier_dim = 2;
    AlgebraBasis m2 = generate_algebra({pauli(1), pauli(3)}, true);
    bi.left_gens = {pauli(1), pauli(3)};
    bi.right_gens = {identity(2)};
    bi.left = LeftPairing::make(m2, identity(2));
    bi.right = RightPairing{generate_algebra({}, true, {}, 2), 2.0 * identity(2)};
    return bi;
}

// M_n as M_n - M_n bimodule, left and right multiplication on vec
EquivBimodule matrix_bimodule(int n) {
    EquivBimodule bi;
    bi.carrier_dim = n * n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bi.left_gens.push_back(left_mult(matrix_unit(n, i, j), n, 1));
            bi.right_gens.push_back(right_mult(matrix_unit(n, i, j), n, 1));
        }
    bi.left = LeftPairing::make(generate_algebra(bi.left_gens, true), identity(n * n) / static_cast<double>(n));
    bi.right = RightPairing{generate_algebra(bi.right_gens, true), static_cast<double>(n) * identity(n * n)};
    return bi;
}

}  // namespace

TEST_CASE("pairing_eval on scalar modules") {
    auto mod = scalar_module(2, identity(2), identity(2));
    validate_module(mod);
    CHECK(std::abs(pairing_eval(mod, col2(1, 0), col2(1, 0))(0, 0) - 1.0) < 1e-15);
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = 2;
    r(1, 1) = 3;
    mod.r = r;
    CHECK(std::abs(pairing_eval(mod, col2(0, 1), col2(0, 1))(0, 0) - 3.0) < 1e-15);

    Rng rng(1);
    Mat h = random_matrix(2, 2, rng);
    mod.r = h * h.adjoint() + identity(2);
    for (int k = 0; k < 5; ++k) {
        Mat e = random_matrix(2, 1, rng), f = random_matrix(2, 1, rng);
        CHECK(pairing_eval(mod, e, e)(0, 0).real() >= -1e-9);
        CHECK(std::abs(pairing_eval(mod, e, f)(0, 0) - std::conj(pairing_eval(mod, f, e)(0, 0))) < 1e-12);
    }
}

TEST_CASE("pairing_eval rejects elements outside q") {
    Mat q = Mat::Zero(2, 2);
    q(0, 0) = 1;
    auto mod = scalar_module(2, q, q);
    validate_module(mod);
    CHECK_THROWS_AS(pairing_eval(mod, col2(0, 1), col2(1, 0)), NcgError);
}

TEST_CASE("module validation") {
    Mat q = Mat::Zero(2, 2);
    q(0, 0) = 1;
    q(0, 1) = 1;  // idempotent but not self-adjoint
    CHECK_THROWS_AS(validate_module(scalar_module(2, q, identity(2))), NcgError);
    Mat r = Mat::Zero(2, 2);  // r + 1 - q singular
    CHECK_THROWS_AS(validate_module(scalar_module(2, identity(2), r)), NcgError);
}

TEST_CASE("l2_space Gram matrices") {
    auto mod = scalar_module(2, identity(2), identity(2));
    Mat one = identity(1);
    auto l2 = l2_space(mod, one);
    CHECK(l2.rank == 2);
    CHECK(operator_norm(l2.gram - identity(2)) < 1e-14);
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = 2;
    r(1, 1) = 3;
    mod.r = r;
    l2 = l2_space(mod, one);
    CHECK(operator_norm(l2.gram - r) < 1e-14);
    CHECK_THROWS_AS(l2_space(mod, Mat::Zero(1, 1)), NcgError);
}

TEST_CASE("l2_space over M_2 with a non-faithful state fails") {
    ProjectiveModule mod;
    mod.base = generate_algebra({pauli(1), pauli(3)}, true);
    mod.m = 1;
    mod.q = identity(2);
    mod.r = identity(2);
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 1.0;
    CHECK_THROWS_AS(l2_space(mod, rho), NcgError);
    rho(1, 1) = 0.5;
    CHECK(l2_space(mod, rho).rank == 4);
}

TEST_CASE("conjugate module") {
    Rng rng(2);
    Mat h = random_matrix(2, 2, rng);
    auto mod = scalar_module(2, identity(2), h * h.adjoint() + identity(2));
    auto cm = conjugate_module(mod);
    CHECK(cm.side == Side::left);
    CHECK(conjugate_module(cm).side == Side::right);
    CHECK(operator_norm(conjugate_module(cm).r - mod.r) < 1e-12);
    Mat e = random_matrix(2, 1, rng), f = random_matrix(2, 1, rng);
    // <e^flat|f^flat> = (e|f)
    Mat lhs = pairing_eval(cm, conjugate_element(mod, e), conjugate_element(mod, f));
    CHECK(std::abs(lhs(0, 0) - pairing_eval(mod, e, f)(0, 0)) < 1e-12);
    // double conjugation of an element
    CHECK((conjugate_element(cm, conjugate_element(mod, e)) - e).norm() < 1e-12);

    // a.(e^flat) = (e.a*)^flat over M_2
    ProjectiveModule m2;
    m2.base = generate_algebra({pauli(1), pauli(3)}, true);
    m2.m = 1;
    m2.q = identity(2);
    m2.r = identity(2);
    auto c2 = conjugate_module(m2);
    Mat a = random_matrix(2, 2, rng), x = random_matrix(2, 2, rng);
    Mat lhs2 = module_action(c2, conjugate_element(m2, x), a);
    Mat rhs2 = conjugate_element(m2, module_action(m2, x, a.adjoint()));
    CHECK(operator_norm(lhs2 - rhs2) < 1e-10);
}

TEST_CASE("morita_check on standard equivalences") {
    CHECK(morita_check(column_bimodule()).ok());
    for (int n : {2, 3}) {
        auto rep = morita_check(matrix_bimodule(n));
        CHECK_MESSAGE(rep.ok(), rep.text());
    }
    auto bad = column_bimodule();
    bad.right.weight = -bad.right.weight;
    auto rep = morita_check(bad);
    REQUIRE(rep.find("compatibility"));
    CHECK(rep.find("compatibility")->residual >= 1.0);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("fitted right pairing matches the standard normalisation") {
    auto bi = matrix_bimodule(2);
    auto fit = fit_right_pairing(bi.left, bi.right.alg);
    CHECK(fit.residual < 1e-10);
    CHECK(fit.positive);
    CHECK(fit.solution_dim == 0);
    CHECK(operator_norm(fit.pairing.weight - bi.right.weight) < 1e-10);
}

TEST_CASE("frame_presentation") {
    RightPairing scalars{generate_algebra({}, true, {}, 2), 2.0 * identity(2)};
    // (x|y) = x* y: the standard basis is orthonormal
    std::vector<Vec> onb = {Vec::Unit(2, 0), Vec::Unit(2, 1)};
    auto fp = frame_presentation(scalars, onb, onb);
    // blocks are 2x2 copies of the scalar value
    Mat q_scalar(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) q_scalar(i, j) = fp.q(2 * i, 2 * j);
    CHECK(operator_norm(q_scalar - identity(2)) < 1e-14);
    CHECK(fp.idempotent_residual < 1e-14);

    RightPairing one_dim{generate_algebra({}, true, {}, 1), identity(1)};
    std::vector<Vec> single = {Vec::Ones(1)};
    auto f1 = frame_presentation(one_dim, single, single);
    CHECK(std::abs(f1.q(0, 0) - 1.0) < 1e-14);

    // a single vector of C^2 over C cannot be a frame
    std::vector<Vec> e1 = {Vec::Unit(2, 0)};
    CHECK_THROWS_AS(frame_presentation(scalars, e1, e1), NcgError);

    // random frame of M_2 over M_2 (right multiplication)
    auto bi = matrix_bimodule(2);
    ThetaFn th = [&](const Vec& a, const Vec& b) { return bi.right.theta(a, b); };
    Rng rng(3);
    std::vector<Vec> cand;
    for (int k = 0; k < 4; ++k) cand.push_back(random_vector(4, rng));
    auto frame = tight_frame(4, bi.right_gens, th, cand);
    CHECK(frame_defect(4, th, frame, frame) < 1e-10);
    auto fr = frame_presentation(bi.right, frame, frame);
    CHECK(fr.idempotent_residual < 1e-10);
    CHECK(fr.iso_residual < 1e-10);
}

TEST_CASE("orthonormal module basis") {
    auto bi = matrix_bimodule(3);
    Rng rng(4);
    auto xs = orthonormal_module_basis(bi.right, 9, {}, rng);
    REQUIRE(xs.has_value());
    for (std::size_t i = 0; i < xs->size(); ++i)
        for (std::size_t j = 0; j < xs->size(); ++j) {
            Mat v = bi.right((*xs)[i], (*xs)[j]);
            CHECK(operator_norm(v - (i == j ? identity(9) : Mat::Zero(9, 9))) < 1e-9);
        }
}

TEST_CASE("linear_operator_bound") {
    auto bi = matrix_bimodule(2);
    Rng rng(5);
    auto xs = orthonormal_module_basis(bi.right, 4, {}, rng);
    REQUIRE(xs.has_value());
    CHECK(linear_operator_bound(Mat::Zero(4, 4), *xs, bi.right, bi.right_gens) == 0.0);

    RightPairing scalars{generate_algebra({}, true, {}, 2), 2.0 * identity(2)};
    std::vector<Vec> onb = {Vec::Unit(2, 0), Vec::Unit(2, 1)};
    const double b = linear_operator_bound(identity(2), onb, scalars, {identity(2)});
    CHECK(b == doctest::Approx(std::sqrt(2.0)));

    int violations = 0;
    for (int k = 0; k < 30; ++k) {
        Mat T = left_mult(random_matrix(2, 2, rng), 2, 1);
        if (linear_operator_bound(T, *xs, bi.right, bi.right_gens) < operator_norm(T) - 1e-9) ++violations;
    }
    CHECK(violations == 0);
    CHECK_THROWS_AS(linear_operator_bound(right_mult(pauli(1), 2, 1), *xs, bi.right, bi.right_gens), NcgError);
}

TEST_CASE("weight_from_pairing") {
    // C = M_2 (x) M_2 on C^4, A = 1 (x) M_2; the partial trace over the first factor
    std::vector<Mat> cg, ag;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cg.push_back(kron(matrix_unit(2, i, j), identity(2)));
            cg.push_back(kron(identity(2), matrix_unit(2, i, j)));
            ag.push_back(kron(identity(2), matrix_unit(2, i, j)));
        }
    AlgebraBasis big = generate_algebra(cg, true), sub = generate_algebra(ag, true);
    auto ptrace = [](const Mat& x) {
        Mat out = Mat::Zero(2, 2);
        for (int k = 0; k < 2; ++k) out += x.block(2 * k, 2 * k, 2, 2);
        return kron(identity(2), out);
    };
    MatPairing pairing = [&](const Mat& u, const Mat& v) { return ptrace(u * v.adjoint()); };
    auto w = weight_from_pairing(big, sub, pairing);
    CHECK(w.bimodule_residual < 1e-10);
    CHECK(w.min_positivity > 0.0);
    MatPairing back = pairing_from_weight(w.apply);
    Rng rng(6);
    for (int k = 0; k < 4; ++k) {
        Mat u = big.element(random_vector(big.size(), rng)), v = big.element(random_vector(big.size(), rng));
        CHECK(operator_norm(back(u, v) - pairing(u, v)) < 1e-10);
    }

    // same algebra, pairing u v*: the weight is evaluation at 1
    auto w2 = weight_from_pairing(sub, sub, [](const Mat& u, const Mat& v) { return Mat(u * v.adjoint()); });
    Mat x = sub.element(random_vector(sub.size(), rng));
    CHECK(operator_norm(w2.apply(x) - x) < 1e-12);

    // conjugation by a non-central unitary breaks the bimodule property
    Mat u = kron(identity(2), (pauli(1) + pauli(3)) / std::sqrt(2.0)) * kron(pauli(3), identity(2));
    MatPairing twisted = [&](const Mat& a, const Mat& b) { return Mat(u * ptrace(a * b.adjoint()) * u.adjoint()); };
    CHECK_THROWS_AS(weight_from_pairing(big, sub, twisted), NcgError);
}

TEST_CASE("pre_morita_decompose") {
    auto col = pre_morita_decompose(column_bimodule());
    CHECK(col.left_iso_residual < 1e-10);
    CHECK(col.right_iso_residual < 1e-10);
    for (int n : {2, 3}) {
        auto d = pre_morita_decompose(matrix_bimodule(n));
        CHECK(d.left_iso_residual < 1e-10);
        CHECK(d.right_iso_residual < 1e-10);
        CHECK(d.left_image_rank == n * n);
        CHECK(d.right_image_rank == n * n);
    }
    // A over A, A = C^2 diagonal
    EquivBimodule bi;
    bi.carrier_dim = 2;
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    bi.left_gens = {p0, p1};
    bi.right_gens = {p0, p1};
    AlgebraBasis diag = generate_algebra({p0, p1}, true);
    bi.left = LeftPairing::make(diag, identity(2));
    bi.right = RightPairing{diag, identity(2)};
    REQUIRE(morita_check(bi).ok());
    auto d = pre_morita_decompose(bi);
    CHECK(d.m == 1);
    CHECK(d.n == 1);
    CHECK(operator_norm(d.p - identity(2)) < 1e-10);
    CHECK(operator_norm(d.q - identity(2)) < 1e-10);
}
