#pragma once

#include "ncg/report.hpp"
#include "ncg/star_algebra.hpp"

#include <functional>
#include <optional>

namespace ncg {

enum class Side { left, right };

// qA^m with pairing metric r; q and r are m x m blocks of base-algebra elements.
struct ProjectiveModule {
    AlgebraBasis base;
    int m = 0;
    Mat q;
    Mat r;
    Side side = Side::right;

    int block() const { return base.hilbert_dim; }
};

void validate_module(const ProjectiveModule& mod, const Tolerance& tol = {});
// Elements are block columns (right) or block rows (left) of base elements.
Mat pairing_eval(const ProjectiveModule& mod, const Mat& e, const Mat& f, const Tolerance& tol = {});
Mat module_action(const ProjectiveModule& mod, const Mat& e, const Mat& a);
ProjectiveModule conjugate_module(const ProjectiveModule& mod);
// Element e -> e^flat in the conjugate module.
Mat conjugate_element(const ProjectiveModule& mod, const Mat& e);

struct L2Space {
    Mat gram;
    Mat orthonormalizer;  // columns: orthonormal combinations of the generators q*delta_i
    int rank = 0;
};
L2Space l2_space(const ProjectiveModule& mod, const Mat& rho, const Tolerance& tol = {});

// <xi|eta>, valued in `alg` (operators on the carrier), linear in xi.
// Normalised so that Tr(rho <xi|eta>) = <eta, xi>.
struct LeftPairing {
    AlgebraBasis alg;
    Mat rho;
    Mat gram_inv;

    static LeftPairing make(const AlgebraBasis& alg, const Mat& rho);
    Mat operator()(const Vec& xi, const Vec& eta) const;
    // zeta -> <zeta|y> x
    Mat theta(const Vec& x, const Vec& y) const;
};

// (xi|eta), returned as the carrier operator implementing right multiplication by the value.
// Value = E(eta xi^*) * weight, E the trace projection onto `alg`, weight central in alg.
struct RightPairing {
    AlgebraBasis alg;
    Mat weight;

    Mat operator()(const Vec& xi, const Vec& eta) const;
    // zeta -> x . (y|zeta)
    Mat theta(const Vec& x, const Vec& y) const;
};

struct RightPairingFit {
    RightPairing pairing;
    double residual = 0.0;      // compatibility residual of the fit
    int solution_dim = 0;       // dimension of the affine family of central weights solving the fit
    bool positive = false;
};
// Fits the central weight so that <e|f> g = e (f|g) on the standard basis.
RightPairingFit fit_right_pairing(const LeftPairing& left, const AlgebraBasis& right_alg, const Tolerance& tol = {});

struct EquivBimodule {
    int carrier_dim = 0;
    std::vector<Mat> left_gens;
    std::vector<Mat> right_gens;  // carrier operators of the right action
    LeftPairing left;
    RightPairing right;
};

CheckReport morita_check(const EquivBimodule& bi, const Tolerance& tol = {});

using ThetaFn = std::function<Mat(const Vec&, const Vec&)>;

// Greedy generators among `candidates`, then x_j = Theta^{-1/2} g_j so that sum Theta_{x_j,x_j} = 1.
std::vector<Vec> tight_frame(int dim, const std::vector<Mat>& action, const ThetaFn& theta,
                             const std::vector<Vec>& candidates, const Tolerance& tol = {});
double frame_defect(int dim, const ThetaFn& theta, const std::vector<Vec>& x, const std::vector<Vec>& y);

// Gram-Schmidt over the right algebra inside each range of `parity` (or the whole carrier):
// (x_i|x_j) = delta_ij. Empty when some step meets a non-invertible pairing value.
std::optional<std::vector<Vec>> orthonormal_module_basis(const RightPairing& pair, int dim,
                                                         const std::vector<Mat>& parity, Rng& rng,
                                                         const Tolerance& tol = {});

struct FramePresentation {
    Mat q;  // blocks iota((y_i|x_j)), iota(a) = transpose of the carrier operator of a
    double frame_residual = 0.0;
    double idempotent_residual = 0.0;
    double iso_residual = 0.0;
};
FramePresentation frame_presentation(const RightPairing& pair, const std::vector<Vec>& x,
                                     const std::vector<Vec>& y, const Tolerance& tol = {});

double linear_operator_bound(const Mat& T, const std::vector<Vec>& frame, const RightPairing& pair,
                             const std::vector<Mat>& right_gens, const Tolerance& tol = {});

using MatPairing = std::function<Mat(const Mat&, const Mat&)>;
struct OperatorWeight {
    std::function<Mat(const Mat&)> apply;
    double bimodule_residual = 0.0;
    double min_positivity = 0.0;
};
OperatorWeight weight_from_pairing(const AlgebraBasis& big, const AlgebraBasis& sub, const MatPairing& pairing,
                                   const Tolerance& tol = {});
MatPairing pairing_from_weight(const std::function<Mat(const Mat&)>& weight);

struct MoritaDecomposition {
    Mat p;  // over the left algebra, n x n blocks
    Mat q;  // over the right algebra (iota picture), m x m blocks
    int n = 0;
    int m = 0;
    double left_iso_residual = 0.0;
    double right_iso_residual = 0.0;
    int left_image_rank = 0;
    int right_image_rank = 0;
};
MoritaDecomposition pre_morita_decompose(const EquivBimodule& bi, const Tolerance& tol = {});

}  // namespace ncg
