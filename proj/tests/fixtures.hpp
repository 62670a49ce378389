#pragma once

#include "ncg/converters.hpp"
#include "ncg/examples.hpp"

#include <algorithm>

namespace ncg::testing {

// Random projector module over the right M_n action of a matrix geometry, with a random
// compatible potential drawn from the one-form span.
struct KasparovInstance {
    Mat q;
    BimoduleConnection conn;
};

inline KasparovInstance random_kasparov_instance(const SpectralTripleData& mg, int n, int m, int rank,
                                                 const std::vector<Mat>& forms, Rng& rng) {
    const int N = mg.hilbert_dim;
    if (rank < 1 || rank > m * n) throw NcgError("random_kasparov_instance: rank out of range");
    EigResult ev = herm_eig(hermitian_part(random_matrix(m * n, m * n, rng)));
    Mat V = ev.vectors.leftCols(rank);
    Mat P = V * V.adjoint();
    KasparovInstance out;
    out.q = Mat(m * N, m * N);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.q.block(i * N, j * N, N, N) = iota(right_mult(P.block(i * n, j * n, n, n), n, 2));
    out.conn = grassmann_connection(right_module_over(mg, out.q));
    std::vector<std::vector<Mat>> raw(m, std::vector<Mat>(m, Mat::Zero(N, N)));
    for (auto& row : raw)
        for (auto& p : row)
            for (const Mat& f : forms) p += rng.cnormal() * f;
    const Mat& G = *mg.grading;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.conn.potential[i][j] = 0.5 * (raw[i][j] + G * raw[j][i].adjoint() * G);
    return out;
}

// Element e = (b_1..b_m) q as right-algebra operators, and phi(xi (x) e).
struct SimpleTensor {
    std::vector<Mat> e;
    Vec xi;
    Vec phi;
};

inline SimpleTensor random_simple_tensor(const KasparovInstance& inst, int n, int N, Rng& rng) {
    const int m = static_cast<int>(inst.q.rows()) / N;
    std::vector<Mat> b(m);
    for (auto& x : b) x = right_mult(random_matrix(n, n, rng), n, 2);
    SimpleTensor st;
    st.e.assign(m, Mat::Zero(N, N));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) st.e[j] += inst.q.block(i * N, j * N, N, N).transpose() * b[i];
    st.xi = random_vector(N, rng);
    st.phi = Vec(m * N);
    for (int j = 0; j < m; ++j) st.phi.segment(j * N, N) = st.e[j] * st.xi;
    return st;
}

inline double direct_mismatch(const SpectralTripleData& mg, const KasparovInstance& inst, const Twisted& tw,
                              const RightPairing& pair, const std::vector<Vec>& frame, const SimpleTensor& st) {
    Vec lhs = tw.d_hat * st.phi;
    Vec rhs = direct_connection_eval(mg, inst.conn, pair, frame, st.xi, st.e);
    return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

}  // namespace ncg::testing
