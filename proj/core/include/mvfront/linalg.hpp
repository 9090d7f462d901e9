#pragma once

#include <Eigen/Dense>

namespace mvf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Cholesky factorization of a covariance matrix with the validation every
// optimizer entry point relies on: symmetry within 1e-12 relative tolerance,
// positive definiteness, condition number at most 1e12.  Violations throw
// std::invalid_argument naming the offending quantity.
class SpdFactor {
public:
    explicit SpdFactor(const Mat& sigma);

    // lower-triangular L with L L^T = sigma
    const Mat& matrix_l() const { return l_; }
    Vec solve(const Vec& b) const;
    Mat solve(const Mat& b) const;
    double smallest_eigenvalue() const { return eig_min_; }

private:
    Mat l_;
    double eig_min_ = 0.0;
};

// Lower-triangular square root of an SPD matrix (Cholesky factor).
Mat spd_sqrt(const Mat& sigma);

// Throws std::invalid_argument unless sigma is square, finite, symmetric
// within 1e-12 relative tolerance, positive definite, and has condition
// number <= 1e12.
void validate_covariance(const Mat& sigma);

// Deterministic pairwise (cascade) summation; result is independent of any
// threading in the caller because the reduction itself is sequential.
double pairwise_sum(const double* x, std::ptrdiff_t n);

}  // namespace mvf
