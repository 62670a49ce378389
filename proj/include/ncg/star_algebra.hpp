#pragma once

#include "ncg/linalg.hpp"

#include <utility>
#include <vector>

namespace ncg {

// Orthonormal (trace inner product) linear basis of a *-algebra of operators.
struct AlgebraBasis {
    int hilbert_dim = 0;
    std::vector<Mat> basis;
    std::vector<int> generators;  // indices into the input list that were kept
    bool unital = false;

    int size() const { return static_cast<int>(basis.size()); }
    // Stacked vec(basis_k) as columns; orthonormal.
    Mat coords() const;
    // Trace-orthogonal projection onto the span.
    Mat project(const Mat& x) const;
    Vec coefficients(const Mat& x) const;
    Mat element(const Vec& coeffs) const;
    double membership_residual(const Mat& x) const;
};

// `dim` is only needed when the generator list is empty.
AlgebraBasis generate_algebra(const std::vector<Mat>& generators, bool with_unit, const Tolerance& tol = {},
                              int dim = -1);
AlgebraBasis algebra_from_span(const std::vector<Mat>& span, const Tolerance& tol = {});
AlgebraBasis commutant(const AlgebraBasis& alg, const Tolerance& tol = {});
// Commutant of an arbitrary operator family (not required to be an algebra).
AlgebraBasis commutant_of(const std::vector<Mat>& ops, int dim, const Tolerance& tol = {});
std::vector<Mat> center(const AlgebraBasis& alg, const Tolerance& tol = {});
std::vector<Mat> intersect(const AlgebraBasis& a, const std::vector<Mat>& b, const Tolerance& tol = {});

struct GradedSplit {
    std::vector<Mat> even;
    std::vector<Mat> odd;
};
GradedSplit graded_split(const AlgebraBasis& alg, const Mat& grading, const Tolerance& tol = {});

// Closure defect: max residual of products and adjoints of basis elements.
double closure_defect(const AlgebraBasis& alg);
// Largest projection residual of any element of `b` against span(a).
double span_containment(const AlgebraBasis& a, const std::vector<Mat>& b);

// Seminorm diagnostics at orders 0 and 1: max ‖b‖ and max ‖[D,b]‖ over the basis.
struct Seminorms {
    double q0 = 0.0;
    double q1 = 0.0;
};
Seminorms seminorm_diagnostics(const AlgebraBasis& alg, const Mat& dirac);

}  // namespace ncg
