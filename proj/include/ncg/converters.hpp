#pragma once

#include "ncg/kasparov.hpp"
#include "ncg/tomita.hpp"

namespace ncg {

struct ConversionWitness {
    std::optional<Vec> phi;
    std::optional<Mat> c_hat;
    std::optional<Mat> j_kernel;
    std::optional<Mat> epsilon;
    std::optional<Mat> intertwiner;  // isometry used to realise the output space
    std::vector<Vec> frame;          // module frame of the input carrier
};

struct ConversionResult {
    SpectralTripleData output;
    ConversionWitness witness;
    CheckReport report;
};

ConversionResult spinc_to_riemannian(const SpectralTripleData& t, OrientationMode mode = OrientationMode::strict,
                                     const Tolerance& tol = {}, std::uint64_t seed = 17);

// frame_hint: vectors of E used to build the left frame (their span must carry a left frame).
ConversionResult riemannian_to_spinc(const SpectralTripleData& t, const EquivBimodule& E,
                                     OrientationMode mode = OrientationMode::strict, const Tolerance& tol = {},
                                     const std::vector<Vec>* frame_hint = nullptr);

struct RoundTrip {
    CheckReport report;
    Mat U;
    ConversionResult riemannian;
    ConversionResult recovered;
};
// Intertwiner search between two triples on spaces of equal dimension, generators matched by position.
CheckReport compare_triples(const SpectralTripleData& t, const SpectralTripleData& s, const Tolerance& tol = {},
                            Mat* U = nullptr);
RoundTrip round_trip_check(const SpectralTripleData& t, OrientationMode mode = OrientationMode::strict,
                           const Tolerance& tol = {}, std::uint64_t seed = 17);

// Unitary U with U a1 = a2 U on all given pairs, closest to the identity, then matched on D.
struct Intertwiner {
    Mat U;
    int action_family_dim = 0;
    int dirac_family_dim = 0;
    double action_residual = 0.0;
    double dirac_residual = 0.0;
};
Intertwiner find_intertwiner(const std::vector<Mat>& g1, const std::vector<Mat>& g2, const Mat& d1, const Mat& d2,
                             const Tolerance& tol = {});

struct Doubled {
    SpectralTripleData triple;
    Mat cliff;  // offdiag(-i, i)
    CheckReport report;
};
Doubled double_odd_triple(const SpectralTripleData& t, const Tolerance& tol = {});

CheckReport appendix_equivalence_check(const SpectralTripleData& t, int samples = 10, const Tolerance& tol = {});

}  // namespace ncg
