#pragma once

#include "ncg/modules.hpp"
#include "ncg/report.hpp"
#include "ncg/star_algebra.hpp"

#include <optional>

namespace ncg {

struct HochschildChain {
    int degree = 0;
    std::vector<std::vector<Mat>> terms;  // each term has degree+1 legs
    bool generalized = false;
    bool degenerate = false;  // set by the boundary of a 0-chain
};

struct SpectralTripleData {
    int hilbert_dim = 0;
    std::vector<Mat> algebra;
    Mat dirac;
    std::optional<Mat> grading;
    int p = 0;
    std::optional<std::vector<Mat>> right_action;
    std::optional<HochschildChain> cycle;
    std::optional<Vec> phi;
    std::optional<Mat> state;  // density matrix; identity when absent

    Mat rho() const { return state ? *state : identity(hilbert_dim); }
};

enum class OrientationMode { strict, generalized };

void check_shapes(const SpectralTripleData& t);
CheckReport validate_triple(const SpectralTripleData& t, const Tolerance& tol = {});

struct CliffordAlgebra {
    AlgebraBasis basis;
    std::vector<int> parity;  // +1 even, -1 odd, 0 untagged (no grading or mixed)
};
CliffordAlgebra build_cda(const SpectralTripleData& t, const Tolerance& tol = {});
AlgebraBasis algebra_of(const SpectralTripleData& t, const Tolerance& tol = {});
AlgebraBasis right_algebra_of(const SpectralTripleData& t, const Tolerance& tol = {});

Mat pi_D(const Mat& dirac, const HochschildChain& c);
HochschildChain hochschild_boundary(const HochschildChain& c);
// Norm of the chain as an element of the tensor power (exact, via per-leg coordinates).
double chain_norm(const HochschildChain& c);
// Product in universal forms: (a0 da1..dap)(b0 db1..dbq).
HochschildChain form_product(const HochschildChain& a, const HochschildChain& b);

CheckReport check_orientability(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol = {});

struct OrientationFit {
    HochschildChain chain;
    double residual = 0.0;  // ||pi_D(c) - C|| / max(1, ||C||), Frobenius
    bool feasible = false;
};
OrientationFit fit_orientation_cycle(const SpectralTripleData& t, int p, int term_budget, const Tolerance& tol = {},
                                     const std::optional<Mat>& target = std::nullopt);

CheckReport check_first_order(const SpectralTripleData& t, const Tolerance& tol = {});

// The C-valued pairing used for finiteness and spin^c (normalised by the state).
LeftPairing clifford_pairing(const SpectralTripleData& t, const AlgebraBasis& cda);
CheckReport check_finiteness(const SpectralTripleData& t, const Tolerance& tol = {});

// Hilbert space as C_D(A)-A bimodule; right pairing weight fitted by compatibility.
struct SpincData {
    EquivBimodule bimodule;
    AlgebraBasis cda;
    AlgebraBasis right_alg;
    RightPairingFit fit;
};
SpincData spinc_bimodule(const SpectralTripleData& t, const Tolerance& tol = {});
CheckReport check_spinc(const SpectralTripleData& t, const Tolerance& tol = {});

struct RiemannianData {
    Mat z;
    std::vector<Vec> z_solutions;  // basis of the kernel directions in center coordinates
    int cyclic_rank = 0;
    int separating_rank = 0;
};
CheckReport check_riemannian(const SpectralTripleData& t, const Tolerance& tol = {}, RiemannianData* out = nullptr);

CheckReport check_extras(const SpectralTripleData& t, const Tolerance& tol = {}, const Mat* j_kernel = nullptr);

std::vector<double> zeta_diagnostic(const SpectralTripleData& t, const std::vector<double>& s_values);

// auto: riemannian when a vector phi is present, spin^c otherwise
enum class Suite { automatic, spinc, riemannian, all };
CheckReport full_suite(const SpectralTripleData& t, OrientationMode mode, const Tolerance& tol = {},
                       Suite suite = Suite::automatic);

}  // namespace ncg
