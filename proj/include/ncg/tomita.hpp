#pragma once

#include "ncg/triple.hpp"

namespace ncg {

// v -> K conj(v)
struct Antiunitary {
    Mat kernel;

    Vec apply(const Vec& v) const { return kernel * v.conjugate(); }
    // J X J^{-1}, assuming K conj(K) = 1
    Mat conjugate(const Mat& x) const { return kernel * x.conjugate() * kernel.adjoint(); }
    Antiunitary compose(const Antiunitary& other) const { return {kernel * other.kernel.conjugate()}; }
};

struct TomitaResult {
    Antiunitary J;
    CheckReport report;  // j_squared, j_fixes_phi, antiunitary, commutant
};

// J(w Phi) = w* Phi over a basis of C_D(A); hard error unless Phi is cyclic, separating and tracial.
TomitaResult tomita_J(const SpectralTripleData& t, const Vec& phi, const Tolerance& tol = {});

// a^op = J a* J
Mat opposite_action(const Antiunitary& J, const Mat& a);

struct CycleGrading {
    std::optional<Mat> epsilon;  // even p
    Mat p_plus, p_minus;         // odd p
    CheckReport report;
};
// `eps` is only consulted for odd p (the anticommutation check).
CycleGrading grading_from_cycle(const SpectralTripleData& t, const Mat& C, const Antiunitary& J,
                                const std::optional<Mat>& eps = std::nullopt, const Tolerance& tol = {});

struct DTilde {
    Mat d_prime;
    Mat d_tilde;
    double d_tilde_herm_defect = 0.0;
};
DTilde build_dtilde(const Mat& dirac, const Antiunitary& J, const Mat& eps);

CheckReport check_fundamental_class(const SpectralTripleData& t, const Antiunitary& J, const Mat& eps,
                                    const Tolerance& tol = {});

}  // namespace ncg
