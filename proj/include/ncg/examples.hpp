#pragma once

#include "ncg/triple.hpp"

#include <cstdint>
#include <string>

namespace ncg {

struct ExampleSpec {
    std::string kind;  // trivial_points | two_point | matrix_geometry | odd_matrix_base | odd_matrix_geometry | doubled
    int size = 2;      // N for trivial_points, n for the matrix geometries
    cplx lambda{1.0, 0.0};
    std::uint64_t seed = 7;
    std::string base = "two_point";  // for doubled
};

SpectralTripleData trivial_points(int N);
SpectralTripleData two_point(cplx lambda);
// A = M_n by left multiplication on M_n (x) C^2, D = ad(T1) (x) s1 + ad(T2) (x) s2.
SpectralTripleData matrix_geometry(int n, std::uint64_t seed);
// Odd, p = 1, on M_n: D = ad(T), generalized cycle C = 1.
SpectralTripleData odd_matrix_base(int n, std::uint64_t seed);
// Odd, p = 1, on M_n (x) C^2: D = ad(T) (x) s3, C = 1 (x) s3, eps = 1 (x) s1, Phi = sqrt(n/2) vec(1) (x) (1,1).
SpectralTripleData odd_matrix_geometry(int n, std::uint64_t seed);
SpectralTripleData build_example(const ExampleSpec& spec);

// Left / right multiplication operators on M_n (x) C^k, column-major vectorisation.
Mat left_mult(const Mat& a, int n, int k);
Mat right_mult(const Mat& b, int n, int k);
Mat matrix_unit(int n, int i, int j);
Mat pauli(int which);  // 1, 2, 3

}  // namespace ncg
