#include "ncg/examples.hpp"
#include "ncg/converters.hpp"

namespace ncg {

Mat matrix_unit(int n, int i, int j) {
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

Mat pauli(int which) {
    Mat m(2, 2);
    switch (which) {
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -I_unit, I_unit, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw NcgError("pauli: index must be 1, 2 or 3");
    }
    return m;
}

Mat left_mult(const Mat& a, int n, int k) { return kron(kron(identity(n), a), identity(k)); }

Mat right_mult(const Mat& b, int n, int k) { return kron(kron(b.transpose(), identity(n)), identity(k)); }

namespace {

Mat ad(const Mat& t) {
    const int n = static_cast<int>(t.rows());
    return kron(identity(n), t) - kron(t.transpose(), identity(n));
}

}  // namespace

SpectralTripleData trivial_points(int N) {
    if (N < 1) throw NcgError("trivial_points: N must be at least 1");
    SpectralTripleData t;
    t.hilbert_dim = N;
    for (int i = 0; i < N; ++i) t.algebra.push_back(matrix_unit(N, i, i));
    t.dirac = Mat::Zero(N, N);
    t.grading = identity(N);
    t.p = 0;
    t.right_action = t.algebra;
    t.cycle = HochschildChain{0, {{identity(N)}}, false, false};
    t.phi = Vec::Ones(N) / std::sqrt(static_cast<double>(N));
    return t;
}

SpectralTripleData two_point(cplx lambda) {
    if (lambda == cplx(0.0, 0.0)) throw NcgError("two_point: lambda must be nonzero");
    SpectralTripleData t;
    t.hilbert_dim = 2;
    t.algebra = {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
    t.dirac = Mat::Zero(2, 2);
    t.dirac(0, 1) = lambda;
    t.dirac(1, 0) = std::conj(lambda);
    t.grading = pauli(3);
    t.p = 0;
    t.right_action = t.algebra;
    t.cycle = HochschildChain{0, {{pauli(3)}}, false, false};
    return t;
}

namespace {

SpectralTripleData matrix_fixture(int n, std::uint64_t seed, Mat& t1, Mat& t2) {
    if (n < 2) throw NcgError("matrix_geometry: n must be at least 2");
    Rng rng(seed);
    t1 = random_hermitian(n, rng);
    t2 = random_hermitian(n, rng);
    SpectralTripleData t;
    t.hilbert_dim = 2 * n * n;
    std::vector<Mat> right;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat u = matrix_unit(n, i, j);
            t.algebra.push_back(left_mult(u, n, 2));
            right.push_back(right_mult(u, n, 2));
        }
    t.right_action = right;
    return t;
}

}  // namespace

SpectralTripleData matrix_geometry(int n, std::uint64_t seed) {
    Mat t1, t2;
    SpectralTripleData t = matrix_fixture(n, seed, t1, t2);
    t.dirac = kron(ad(t1), pauli(1)) + kron(ad(t2), pauli(2));
    Mat gamma = kron(identity(n * n), pauli(3));
    t.grading = gamma;
    t.p = 0;
    t.cycle = HochschildChain{0, {{gamma}}, true, false};
    return t;
}

SpectralTripleData odd_matrix_base(int n, std::uint64_t seed) {
    if (n < 2) throw NcgError("odd_matrix_base: n must be at least 2");
    Rng rng(seed);
    Mat T = random_hermitian(n, rng);
    SpectralTripleData t;
    t.hilbert_dim = n * n;
    std::vector<Mat> right;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat u = matrix_unit(n, i, j);
            t.algebra.push_back(left_mult(u, n, 1));
            right.push_back(right_mult(u, n, 1));
        }
    t.right_action = right;
    t.dirac = ad(T);
    t.p = 1;
    t.cycle = HochschildChain{0, {{identity(n * n)}}, true, false};
    return t;
}

SpectralTripleData odd_matrix_geometry(int n, std::uint64_t seed) {
    Rng rng(seed);
    Mat T = random_hermitian(n, rng);
    SpectralTripleData t;
    t.hilbert_dim = 2 * n * n;
    std::vector<Mat> right;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat u = matrix_unit(n, i, j);
            t.algebra.push_back(left_mult(u, n, 2));
            right.push_back(right_mult(u, n, 2));
        }
    t.right_action = right;
    t.dirac = kron(ad(T), pauli(3));
    t.grading = kron(identity(n * n), pauli(1));
    t.p = 1;
    t.cycle = HochschildChain{0, {{kron(identity(n * n), pauli(3))}}, true, false};
    // |phi|^2 = n^2, so the state restricted to C^2-even vectors is the trace on M_n
    t.phi = std::sqrt(0.5 * n) * kron(vec(identity(n)), Mat::Ones(2, 1)).col(0);
    return t;
}

SpectralTripleData build_example(const ExampleSpec& spec) {
    if (spec.kind == "trivial_points") return trivial_points(spec.size);
    if (spec.kind == "two_point") return two_point(spec.lambda);
    if (spec.kind == "matrix_geometry") return matrix_geometry(spec.size, spec.seed);
    if (spec.kind == "odd_matrix_base") return odd_matrix_base(spec.size, spec.seed);
    if (spec.kind == "odd_matrix_geometry") return odd_matrix_geometry(spec.size, spec.seed);
    if (spec.kind == "doubled") {
        ExampleSpec inner = spec;
        inner.kind = spec.base;
        SpectralTripleData base = build_example(inner);
        base.grading.reset();
        base.cycle.reset();
        base.phi.reset();
        return double_odd_triple(base).triple;
    }
    throw NcgError("build_example: unknown kind '" + spec.kind + "'");
}

}  // namespace ncg
