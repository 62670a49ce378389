#pragma once

#include "ncg/triple.hpp"

namespace ncg {

// Left module B^n q over the right algebra B of a triple. The module base is iota(B) = {R_b^T},
// so q^op acting on H^n is the full transpose of q.
struct BimoduleConnection {
    ProjectiveModule module;
    std::vector<std::vector<Mat>> potential;  // n x n operators on H, in the represented one-form span
    std::vector<int> parity;                  // eps' signs per entry of B^n, empty = all even

    int size() const { return module.m; }
};

// iota(b) = R_b^T
Mat iota(const Mat& right_op);
ProjectiveModule right_module_over(const SpectralTripleData& t, const Mat& q_iota, const Tolerance& tol = {});

// Orthonormal basis of span{[eps D, b1^op] b0^op}.
std::vector<Mat> one_form_span(const SpectralTripleData& t, const Tolerance& tol = {});
BimoduleConnection grassmann_connection(const ProjectiveModule& mod);
// Hard error on a potential outside the one-form span or violating selfadjointness of the assembled A-hat.
void validate_connection(const SpectralTripleData& t, const BimoduleConnection& conn, const Tolerance& tol = {});

struct Twisted {
    Mat q_op;     // projector on H^n
    Mat d_n;      // D (x) eps' 1_n
    Mat a_hat;    // (eps (x) eps') applied to the block potential
    Mat d_hat;    // q_op d_n q_op + q_op a_hat q_op
    Mat range;    // isometry onto H^n q
    double selfadjoint = 0.0;
    double square_identity = 0.0;
};
Twisted twisted_operator(const SpectralTripleData& t, const BimoduleConnection& conn, const Tolerance& tol = {});
// Evaluates D-hat on phi(xi (x) e) by the Leibniz rule and the potential, for e a row of n right-algebra operators.
// Uses D = eps(gamma o grad + T) for the Grassmann connection of (pair, frame) on H.
Vec direct_connection_eval(const SpectralTripleData& t, const BimoduleConnection& conn, const RightPairing& pair,
                           const std::vector<Vec>& frame, const Vec& xi, const std::vector<Mat>& e);

struct ProductTriple {
    SpectralTripleData triple;  // on the range of q_op, in the basis `twisted.range`
    Twisted twisted;
    CheckReport report;
};
// right_c: optional right action on H^n (already represented); compressed into the output.
ProductTriple product_triple(const SpectralTripleData& t, const BimoduleConnection& conn,
                             const std::vector<Mat>& right_c = {}, const Tolerance& tol = {});

// Frame e_k = rows of q (as right-algebra operators); inject_sign flips the potential term in the predicted pair.
CheckReport connection_condition_check(const SpectralTripleData& t, const BimoduleConnection& conn, const Twisted& tw,
                                       bool inject_sign = false, const Tolerance& tol = {});

struct ConnectionDecomposition {
    Mat T;                  // eps D - gamma o grad, for the Grassmann connection of the frame
    std::vector<Vec> frame;
    CheckReport report;
};
ConnectionDecomposition connection_decomposition(const SpectralTripleData& t, const Tolerance& tol = {},
                                                 std::uint64_t seed = 17);
// sum_j Theta_{eps D x_j, x_j}
Mat decomposition_T(const Mat& dirac, const Mat& eps, const RightPairing& pair, const std::vector<Vec>& frame);
// Module frame of H over its right algebra, homogeneous for the grading when there is one.
std::vector<Vec> module_frame(const SpectralTripleData& t, const RightPairing& pair, std::uint64_t seed,
                              const Tolerance& tol = {});

// dim ker D+ - dim ker D+^*, D compressed to the range of `proj`.
int index_pairing(const SpectralTripleData& t, const Mat& proj, const Tolerance& tol = {});

struct PairingMatrix {
    Eigen::MatrixXi m;
    long long det = 0;
    bool unimodular = false;
};
// right_projs are operators on H already (the opposite-algebra picture).
PairingMatrix poincare_pairing_matrix(const SpectralTripleData& t, const std::vector<Mat>& left_projs,
                                      const std::vector<Mat>& right_projs, const Tolerance& tol = {});

}  // namespace ncg
