#include "doctest.h"
#include "fixtures.hpp"

using namespace ncg;
using namespace ncg::testing;

namespace {

struct MgSetup {
    SpectralTripleData mg;
    SpincData sd;
    std::vector<Vec> frame;
    std::vector<Mat> forms;
};

const MgSetup& setup() {
    static const MgSetup s = [] {
        MgSetup out;
        out.mg = matrix_geometry(2, 1);
        out.sd = spinc_bimodule(out.mg);
        out.frame = module_frame(out.mg, out.sd.fit.pairing, 17);
        out.forms = one_form_span(out.mg);
        return out;
    }();
    return s;
}

}  // namespace

TEST_CASE("grassmann connection has zero potential") {
    const auto& s = setup();
    const int N = s.mg.hilbert_dim;
    Mat q = Mat::Zero(2 * N, 2 * N);
    q.topLeftCorner(N, N) = identity(N);
    auto conn = grassmann_connection(right_module_over(s.mg, q));
    for (const auto& row : conn.potential)
        for (const Mat& p : row) CHECK(p.norm() == 0.0);
    CHECK_NOTHROW(validate_connection(s.mg, conn));
}

TEST_CASE("twisted operator on free modules") {
    const auto& s = setup();
    const int N = s.mg.hilbert_dim;
    auto tw1 = twisted_operator(s.mg, grassmann_connection(right_module_over(s.mg, identity(N))));
    CHECK(operator_norm(tw1.d_hat - s.mg.dirac) == 0.0);

    auto tw2 = twisted_operator(s.mg, grassmann_connection(right_module_over(s.mg, identity(2 * N))));
    CHECK(operator_norm(tw2.d_hat - kron(identity(2), s.mg.dirac)) == 0.0);
}

TEST_CASE("twisted operator matches the direct connection evaluation") {
    const auto& s = setup();
    Rng rng(5);
    for (int it = 0; it < 6; ++it) {
        const int m = 1 + it % 3;
        auto inst = random_kasparov_instance(s.mg, 2, m, 1 + it % (2 * m), s.forms, rng);
        auto tw = twisted_operator(s.mg, inst.conn);
        CHECK(tw.selfadjoint < 1e-12);
        CHECK(tw.square_identity < 1e-12);
        for (int k = 0; k < 2; ++k) {
            auto st = random_simple_tensor(inst, 2, s.mg.hilbert_dim, rng);
            CHECK(direct_mismatch(s.mg, inst, tw, s.sd.fit.pairing, s.frame, st) < 1e-10);
        }
    }
}

TEST_CASE("connection validation errors") {
    const auto& s = setup();
    const int N = s.mg.hilbert_dim;
    auto conn = grassmann_connection(right_module_over(s.mg, identity(N)));
    conn.potential[0][0] = left_mult(matrix_unit(2, 0, 0), 2, 2);  // an algebra element, not a one-form
    CHECK_THROWS_AS(twisted_operator(s.mg, conn), NcgError);
    CHECK_THROWS_AS(product_triple(s.mg, conn), NcgError);

    Mat notproj = identity(N);
    notproj(0, 0) = 2.0;
    CHECK_THROWS(right_module_over(s.mg, notproj));
}

TEST_CASE("product triple") {
    const auto& s = setup();
    const int N = s.mg.hilbert_dim;
    auto same = product_triple(s.mg, grassmann_connection(right_module_over(s.mg, identity(N))));
    CHECK(same.report.ok());
    const Mat& V = same.twisted.range;
    CHECK(operator_norm(V * same.triple.dirac * V.adjoint() - s.mg.dirac) < 1e-12);

    // rank-1 projector in M_2 acting on the right
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 0.5;
    p(0, 1) = 0.5;
    p(1, 0) = 0.5;
    p(1, 1) = 0.5;
    auto rank1 = product_triple(s.mg, grassmann_connection(right_module_over(s.mg, iota(right_mult(p, 2, 2)))));
    const CheckEntry* dc = rank1.report.find("dirac_commutators");
    REQUIRE(dc);
    CHECK(dc->residual < 1e-10);
    CHECK(rank1.triple.hilbert_dim == N / 2);
}

TEST_CASE("connection condition") {
    const auto& s = setup();
    const int N = s.mg.hilbert_dim;
    auto triv = grassmann_connection(right_module_over(s.mg, identity(N)));
    auto tw = twisted_operator(s.mg, triv);
    CHECK(connection_condition_check(s.mg, triv, tw).max_residual() < 1e-12);

    Rng rng(8);
    auto inst = random_kasparov_instance(s.mg, 2, 2, 2, s.forms, rng);
    auto tw2 = twisted_operator(s.mg, inst.conn);
    CHECK(connection_condition_check(s.mg, inst.conn, tw2).max_residual() < 1e-9);
    CHECK(connection_condition_check(s.mg, inst.conn, tw2, true).max_residual() > 0.1);
}

TEST_CASE("connection decomposition") {
    const auto& s = setup();
    auto dec = connection_decomposition(s.mg);
    CHECK_MESSAGE(dec.report.ok(), dec.report.text());
    const CheckEntry* lin = dec.report.find("T_module_linear");
    REQUIRE(lin);
    CHECK(lin->residual < 1e-10);

    const Mat eps = *s.mg.grading;
    const auto& pair = s.sd.fit.pairing;
    // a B-linear perturbation M is recovered as eps M
    Rng rng(4);
    Mat M = left_mult(random_hermitian(2, rng), 2, 2) * kron(identity(4), pauli(1));
    Mat T0 = decomposition_T(s.mg.dirac, eps, pair, dec.frame);
    Mat T1 = decomposition_T(s.mg.dirac + M, eps, pair, dec.frame);
    CHECK(operator_norm(T1 - T0 - eps * M) < 1e-10);
    // removing eps T leaves the Grassmann part only
    Mat pure = s.mg.dirac - eps * T0;
    CHECK(operator_norm(decomposition_T(pure, eps, pair, dec.frame)) < 1e-10);
}

TEST_CASE("operator bound over the module frame") {
    const auto& s = setup();
    Rng rng(12);
    int violations = 0;
    for (int k = 0; k < 20; ++k) {
        Mat T = left_mult(random_matrix(2, 2, rng), 2, 2) * kron(identity(4), random_matrix(2, 2, rng));
        double b = linear_operator_bound(T, s.frame, s.sd.fit.pairing, s.sd.right_alg.basis);
        if (b < operator_norm(T) - 1e-9) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("index pairing") {
    SpectralTripleData t;
    t.hilbert_dim = 5;
    t.dirac = Mat::Zero(5, 5);
    t.algebra = {identity(5)};
    Mat g = identity(5);
    g(3, 3) = -1;
    g(4, 4) = -1;
    t.grading = g;
    CHECK(index_pairing(t, identity(5)) == 1);
    CHECK(index_pairing(t, Mat::Zero(5, 5)) == 0);
    CHECK_THROWS_AS(index_pairing(t, 2.0 * identity(5)), NcgError);

    // rank-1 projector of A on the matrix geometry against a brute-force kernel count
    const auto& s = setup();
    Mat p = left_mult(matrix_unit(2, 0, 0), 2, 2);
    const Mat& G = *s.mg.grading;
    Mat pp = p * (identity(8) + G) / 2.0, pm = p * (identity(8) - G) / 2.0;
    Mat vp = range_basis(pp, 1e-10), vm = range_basis(pm, 1e-10);
    Mat block = vm.adjoint() * s.mg.dirac * vp;
    const int kp = static_cast<int>(vp.cols()) - numerical_rank(block, 1e-10);
    const int km = static_cast<int>(vm.cols()) - numerical_rank(block, 1e-10);
    CHECK(index_pairing(s.mg, p) == kp - km);
}

TEST_CASE("poincare pairing matrix") {
    auto tp = trivial_points(3);
    auto pm = poincare_pairing_matrix(tp, tp.algebra, *tp.right_action);
    CHECK(pm.unimodular);
    CHECK(std::llabs(pm.det) == 1);
    for (int i = 0; i < 3; ++i) {
        int nonzero = 0;
        for (int j = 0; j < 3; ++j)
            if (pm.m(i, j) != 0) {
                ++nonzero;
                CHECK(std::abs(pm.m(i, j)) == 1);
            }
        CHECK(nonzero == 1);
    }

    // p = q = 1 on a grading-balanced space
    SpectralTripleData bal;
    bal.hilbert_dim = 2;
    bal.dirac = Mat::Zero(2, 2);
    bal.algebra = {identity(2)};
    bal.grading = pauli(3);
    auto one = poincare_pairing_matrix(bal, {identity(2)}, {identity(2)});
    CHECK(one.m(0, 0) == 0);
    CHECK_FALSE(one.unimodular);

    SpectralTripleData nc = bal;
    nc.grading = identity(2);
    Mat e = matrix_unit(2, 0, 0), f = (identity(2) + pauli(1)) / 2.0;
    CHECK_THROWS_AS(poincare_pairing_matrix(nc, {e}, {f}), NcgError);
}
