#include "doctest.h"
#include "ncg/examples.hpp"
#include "ncg/triple.hpp"

#include <cmath>

using namespace ncg;

namespace {

bool entry_passes(const CheckReport& r, const std::string& id) {
    const CheckEntry* e = r.find(id);
    return e && e->status == Status::pass;
}

bool some_entry_fails(const CheckReport& r, const std::string& needle) {
    for (const auto& e : r.entries)
        if (e.status == Status::fail && e.id.find(needle) != std::string::npos) return true;
    return false;
}

HochschildChain chain(int degree, std::vector<std::vector<Mat>> terms) {
    HochschildChain c;
    c.degree = degree;
    c.terms = std::move(terms);
    return c;
}

}  // namespace

TEST_CASE("validate_triple") {
    auto tp = trivial_points(3);
    CHECK(validate_triple(tp).ok());

    auto two = two_point(1.0);
    auto rep = validate_triple(two);
    CHECK_MESSAGE(rep.ok(), rep.text());
    CHECK(operator_norm(comm(two.dirac, matrix_unit(2, 0, 0))) == doctest::Approx(1.0));

    two.dirac(0, 1) = 2.0;
    CHECK_THROWS_AS(validate_triple(two), NcgError);
}

TEST_CASE("build_cda dimensions") {
    auto tp = trivial_points(3);
    CHECK(build_cda(tp).basis.size() == 3);
    CHECK(build_cda(two_point(1.0)).basis.size() == 4);
    CHECK(build_cda(matrix_geometry(2, 7)).basis.size() == 16);
}

TEST_CASE("pi_D examples") {
    auto two = two_point(1.0);
    CHECK(operator_norm(pi_D(two.dirac, chain(0, {{pauli(3)}})) - pauli(3)) < 1e-15);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 1) = 1.0;
    Mat got = pi_D(two.dirac, chain(1, {{matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}}));
    CHECK(operator_norm(got - expect) < 1e-15);
    CHECK(operator_norm(pi_D(two.dirac, chain(1, {}))) == 0.0);
}

TEST_CASE("hochschild boundary") {
    Rng rng(11);
    Mat a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
    auto ba = hochschild_boundary(chain(1, {{a, a}}));
    CHECK(chain_norm(ba) < 1e-12);
    auto bab = hochschild_boundary(chain(1, {{a, b}}));
    CHECK(bab.degree == 0);
    Mat sum = Mat::Zero(3, 3);
    for (const auto& term : bab.terms) sum += term[0];
    CHECK(operator_norm(sum - (a * b - b * a)) < 1e-12);

    for (int k = 0; k < 10; ++k) {
        HochschildChain c = chain(2, {});
        for (int t = 0; t < 3; ++t)
            c.terms.push_back({random_matrix(3, 3, rng), random_matrix(3, 3, rng), random_matrix(3, 3, rng)});
        CHECK(chain_norm(hochschild_boundary(hochschild_boundary(c))) < 1e-12);
    }
}

TEST_CASE("orientability") {
    CHECK(check_orientability(two_point(1.0), OrientationMode::strict).ok());
    CHECK(check_orientability(trivial_points(2), OrientationMode::strict).ok());
    auto mg = matrix_geometry(2, 7);
    CHECK_FALSE(check_orientability(mg, OrientationMode::strict).ok());
    auto gen = check_orientability(mg, OrientationMode::generalized);
    CHECK_MESSAGE(gen.ok(), gen.text());
}

TEST_CASE("fit_orientation_cycle") {
    auto two = two_point(1.0);
    auto fit = fit_orientation_cycle(two, 0, 4);
    CHECK(fit.feasible);
    CHECK(fit.residual < 1e-12);
    CHECK(operator_norm(pi_D(two.dirac, fit.chain) - pauli(3)) < 1e-12);

    auto tp = trivial_points(2);
    auto f0 = fit_orientation_cycle(tp, 0, 2, {}, identity(2));
    CHECK(f0.feasible);
    CHECK(f0.residual < 1e-14);

    auto mg = matrix_geometry(2, 7);
    auto bad = fit_orientation_cycle(mg, 0, 8, {}, *mg.grading);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.residual >= 1e-9);
}

TEST_CASE("first order") {
    auto mg = matrix_geometry(3, 2);
    auto rep = check_first_order(mg);
    CHECK(rep.ok());
    CHECK(rep.max_residual() < 1e-12);
    CHECK(check_first_order(trivial_points(3)).max_residual() == 0.0);

    // right action replaced by a noncommuting left multiplication
    auto broken = matrix_geometry(2, 7);
    broken.right_action = std::vector<Mat>{left_mult(matrix_unit(2, 0, 1), 2, 2)};
    auto bad = check_first_order(broken);
    CHECK_FALSE(bad.ok());
    CHECK(bad.max_residual() > 0.1);
}

TEST_CASE("finiteness") {
    auto tp = trivial_points(3);
    tp.phi.reset();
    CHECK(check_finiteness(tp).ok());
    auto mg = matrix_geometry(2, 7);
    auto rep = check_finiteness(mg);
    CHECK_MESSAGE(rep.ok(), rep.text());
    // the pairing is normalised by the state, so an overall scale is absorbed
    mg.state = 2.0 * identity(mg.hilbert_dim);
    CHECK(check_finiteness(mg).ok());
}

TEST_CASE("spin^c") {
    auto mg = matrix_geometry(2, 7);
    auto rep = check_spinc(mg);
    CHECK_MESSAGE(rep.ok(), rep.text());
    auto tp = trivial_points(3);
    CHECK(check_spinc(tp).ok());
    auto two = check_spinc(two_point(1.0));
    CHECK_FALSE(two.ok());
    CHECK(some_entry_fails(two, "commutant_is_right_algebra"));
}

TEST_CASE("riemannian on the trivial example") {
    const int N = 3;
    auto tp = trivial_points(N);
    RiemannianData data;
    auto rep = check_riemannian(tp, {}, &data);
    CHECK_MESSAGE(rep.ok(), rep.text());
    CHECK(operator_norm(data.z - identity(N) / static_cast<double>(N)) < 1e-10);
}

TEST_CASE("riemannian cyclicity failure") {
    auto mg = matrix_geometry(2, 7);
    Vec e1 = Vec::Zero(mg.hilbert_dim);
    e1(0) = 1.0;
    mg.phi = e1;
    auto rep = check_riemannian(mg);
    CHECK_FALSE(rep.ok());
    CHECK(some_entry_fails(rep, "cyclic"));
}

TEST_CASE("extras") {
    auto tp = trivial_points(3);
    Mat conj_kernel = identity(3);
    auto rep = check_extras(tp, {}, &conj_kernel);
    const CheckEntry* conn = rep.find("connectivity");
    REQUIRE(conn);
    CHECK(conn->details.find("3") != std::string::npos);
    const CheckEntry* signs = rep.find("reality_signs");
    REQUIRE(signs);
    CHECK(signs->status == Status::pass);
    CHECK(signs->details == "J^2 +, JD + DJ, JGamma + GammaJ");

    auto mg = check_extras(matrix_geometry(2, 7));
    const CheckEntry* c2 = mg.find("connectivity");
    REQUIRE(c2);
    CHECK(c2->status == Status::pass);
}

TEST_CASE("zeta diagnostic") {
    auto tp = trivial_points(4);
    auto z = zeta_diagnostic(tp, {0.5, 2.0, 5.0});
    for (double v : z) CHECK(v == doctest::Approx(4.0));
    SpectralTripleData t;
    t.hilbert_dim = 2;
    t.algebra = {identity(2)};
    t.dirac = pauli(3);
    CHECK(zeta_diagnostic(t, {2.0})[0] == doctest::Approx(1.0));

    Rng rng(9);
    t.hilbert_dim = 5;
    t.dirac = random_hermitian(5, rng);
    t.algebra = {identity(5)};
    auto eig = herm_eig(t.dirac);
    double oracle = 0.0;
    for (int i = 0; i < 5; ++i) oracle += std::pow(1.0 + eig.values(i) * eig.values(i), -1.5);
    CHECK(std::abs(zeta_diagnostic(t, {3.0})[0] - oracle) < 1e-12);
}

TEST_CASE("fixture suites") {
    auto rep = full_suite(trivial_points(3), OrientationMode::strict, {}, Suite::all);
    CHECK_MESSAGE(rep.ok(), rep.text());
    auto two = two_point(1.0);
    CHECK(validate_triple(two).ok());
    CHECK(check_orientability(two, OrientationMode::strict).ok());
    CHECK_FALSE(check_spinc(two).ok());
    auto mg = matrix_geometry(2, 7);
    CHECK(check_first_order(mg).ok());
    CHECK(check_finiteness(mg).ok());
    CHECK(check_spinc(mg).ok());
    CHECK(check_orientability(mg, OrientationMode::generalized).ok());
    CHECK(entry_passes(check_first_order(mg), "first_order"));
}

TEST_CASE("shape errors") {
    auto t = trivial_points(2);
    t.dirac = Mat::Zero(3, 3);
    CHECK_THROWS_AS(check_shapes(t), NcgError);
    CHECK_THROWS_AS(trivial_points(0), NcgError);
    CHECK_THROWS_AS(two_point(0.0), NcgError);
    CHECK_THROWS_AS(matrix_geometry(1, 7), NcgError);
}
