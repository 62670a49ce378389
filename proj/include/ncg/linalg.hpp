#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline const cplx I_unit{0.0, 1.0};

// Hard errors (bad input, violated preconditions).
struct NcgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerance {
    double rel = 1e-9;
    double rank_cut = 1e-10;
};

struct EigResult {
    RVec values;  // ascending
    Mat vectors;  // columns
};

EigResult herm_eig(const Mat& m, const Tolerance& tol = {});
std::vector<Mat> span_basis(const std::vector<Mat>& mats, const Tolerance& tol = {});
double operator_norm(const Mat& m);

int numerical_rank(const Mat& m, double cut);
// Orthonormal columns spanning the null space / range, decided at cut * sigma_max.
Mat null_space(const Mat& m, double cut);
Mat range_basis(const Mat& m, double cut);

Mat identity(int n);
Mat kron(const Mat& a, const Mat& b);
Mat comm(const Mat& a, const Mat& b);
Mat anticomm(const Mat& a, const Mat& b);
Mat direct_sum(const Mat& a, const Mat& b);
Mat hermitian_part(const Mat& m);
bool all_finite(const Mat& m);
bool is_square(const Mat& m);

// ‖r‖ / max(1, scale), operator norm.
double rel_residual(const Mat& r, double scale = 1.0);
double herm_defect(const Mat& m);

// Functional calculus on Hermitian positive semidefinite input.
Mat psd_sqrt(const Mat& m);
Mat psd_inv_sqrt(const Mat& m, double cut);
double min_eigenvalue(const Mat& herm);

Vec vec(const Mat& m);
Mat unvec(const Vec& v, int rows, int cols);

// Seeded generators used by tests and example fixtures.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double normal() { return nd_(eng_); }
    double uniform() { return ud_(eng_); }
    cplx cnormal() { return {normal(), normal()}; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> nd_{0.0, 1.0};
    std::uniform_real_distribution<double> ud_{0.0, 1.0};
};

Mat random_matrix(int rows, int cols, Rng& rng);
Mat random_hermitian(int n, Rng& rng);
Mat random_unitary(int n, Rng& rng);
Vec random_vector(int n, Rng& rng);

}  // namespace ncg
