#include "doctest.h"
#include "ncg/converters.hpp"
#include "ncg/examples.hpp"
#include "ncg/tomita.hpp"

#include <cmath>

using namespace ncg;

namespace {

const ConversionResult& thm_a_output() {
    static const ConversionResult r = spinc_to_riemannian(matrix_geometry(2, 7), OrientationMode::generalized);
    return r;
}

}  // namespace

TEST_CASE("tomita J on the trivial example is complex conjugation") {
    auto tp = trivial_points(3);
    auto res = tomita_J(tp, *tp.phi);
    CHECK_MESSAGE(res.report.ok(), res.report.text());
    CHECK(operator_norm(res.J.kernel - identity(3)) < 1e-12);
}

TEST_CASE("tomita J rejects a non-tracial vector") {
    // A = M_2 on C^2 (x) C^2 by left multiplication; Phi = vec(diag(0.9, 0.1)^{1/2}) is cyclic and separating
    SpectralTripleData t;
    t.hilbert_dim = 4;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) t.algebra.push_back(left_mult(matrix_unit(2, i, j), 2, 1));
    t.dirac = Mat::Zero(4, 4);
    Mat w = Mat::Zero(2, 2);
    w(0, 0) = std::sqrt(0.9);
    w(1, 1) = std::sqrt(0.1);
    CHECK_THROWS_AS(tomita_J(t, vec(w)), NcgError);
    CHECK_NOTHROW(tomita_J(t, vec(identity(2)) / std::sqrt(2.0)));
}

TEST_CASE("tomita J on the converted matrix geometry") {
    const auto& out = thm_a_output();
    REQUIRE(out.witness.phi);
    auto res = tomita_J(out.output, *out.witness.phi);
    CHECK_MESSAGE(res.report.ok(), res.report.text());
    REQUIRE(out.report.find("j_is_swap"));
    CHECK(out.report.passed("j_is_swap"));
}

TEST_CASE("opposite action") {
    auto tp = trivial_points(3);
    auto J = tomita_J(tp, *tp.phi).J;
    CHECK(operator_norm(opposite_action(J, identity(3)) - identity(3)) < 1e-12);
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = cplx(1, 2);
    a(2, 2) = cplx(0, -1);
    // J a* J with J = conj is the transpose, so diagonal elements are fixed
    CHECK(operator_norm(opposite_action(J, a) - a.transpose()) < 1e-12);

    const auto& out = thm_a_output();
    auto Jm = tomita_J(out.output, *out.witness.phi).J;
    AlgebraBasis alg = algebra_of(out.output);
    Rng rng(3);
    for (int k = 0; k < 5; ++k) {
        Mat x = alg.element(random_vector(alg.size(), rng)), y = alg.element(random_vector(alg.size(), rng));
        Mat lhs = opposite_action(Jm, x * y);
        Mat rhs = opposite_action(Jm, y) * opposite_action(Jm, x);
        CHECK(operator_norm(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("grading from cycle") {
    auto tp = trivial_points(3);
    Antiunitary conj{identity(3)};
    auto g = grading_from_cycle(tp, identity(3), conj);
    REQUIRE(g.epsilon);
    CHECK(operator_norm(*g.epsilon - identity(3)) < 1e-12);

    const auto& out = thm_a_output();
    REQUIRE(out.witness.epsilon);
    CHECK(rel_residual(anticomm(*out.witness.epsilon, out.output.dirac), operator_norm(out.output.dirac)) < 1e-9);
}

TEST_CASE("grading from cycle, odd fixture") {
    auto t = odd_matrix_geometry(2, 7);
    REQUIRE(t.phi);
    auto J = tomita_J(t, *t.phi).J;
    Mat C = pi_D(t.dirac, *t.cycle);
    auto g = grading_from_cycle(t, C, J);
    const int n = t.hilbert_dim;
    CHECK(operator_norm(g.p_plus + g.p_minus - identity(n)) < 1e-12);
    CHECK(operator_norm(g.p_plus * g.p_plus - g.p_plus) < 1e-12);
    CHECK(operator_norm(g.p_minus * g.p_minus - g.p_minus) < 1e-12);
    for (const Mat& a : t.algebra) {
        CHECK(operator_norm(comm(g.p_plus, a)) < 1e-12);
        CHECK(operator_norm(comm(g.p_plus, opposite_action(J, a))) < 1e-12);
    }
}

TEST_CASE("build_dtilde") {
    auto tp = trivial_points(3);
    Antiunitary conj{identity(3)};
    auto d0 = build_dtilde(tp.dirac, conj, identity(3));
    CHECK(operator_norm(d0.d_prime) == 0.0);
    CHECK(operator_norm(d0.d_tilde) == 0.0);

    // commutative, real D: D' = D and D~ = i D eps
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = 1.5;
    D(1, 1) = -0.5;
    Mat eps = pauli(3);
    auto d1 = build_dtilde(D, Antiunitary{identity(2)}, eps);
    CHECK(operator_norm(d1.d_prime - D) < 1e-14);
    CHECK(operator_norm(d1.d_tilde - I_unit * D * eps) < 1e-14);
}

TEST_CASE("fundamental class") {
    auto tp = trivial_points(3);
    auto zero = check_fundamental_class(tp, Antiunitary{identity(3)}, identity(3));
    CHECK(zero.ok());
    CHECK(zero.max_residual() == 0.0);

    const auto& out = thm_a_output();
    Antiunitary J{*out.witness.j_kernel};
    auto rep = check_fundamental_class(out.output, J, *out.witness.epsilon);
    CHECK_MESSAGE(rep.ok(), rep.text());
    for (const auto& e : rep.entries)
        if (std::isfinite(e.tolerance)) CHECK(e.residual < 1e-10);

    // flip eps on a single eigenvector
    Mat eps = *out.witness.epsilon;
    auto eig = herm_eig(eps);
    Mat flip = identity(eps.rows());
    const int cols = static_cast<int>(eig.vectors.cols());
    Vec v = eig.vectors.col(cols - 1);
    flip -= 2.0 * v * v.adjoint();
    auto broken = check_fundamental_class(out.output, J, Mat(flip * eps));
    CHECK_FALSE(broken.ok());
    const CheckEntry* ac = broken.find("anticommutation");
    REQUIRE(ac);
    CHECK(ac->residual > 0.1);
}
