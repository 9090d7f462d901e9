#include "mvfront/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mvf {

namespace {

void throw_diag(const char* what, double value) {
    std::ostringstream os;
    os << what << " (" << value << ")";
    throw std::invalid_argument(os.str());
}

}  // namespace

void validate_covariance(const Mat& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
        throw std::invalid_argument("covariance must be square");
    if (!sigma.allFinite())
        throw std::invalid_argument("covariance has non-finite entries");
    const double scale = sigma.cwiseAbs().maxCoeff();
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale))
        throw_diag("covariance not symmetric; max asymmetry", asym);
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
        throw_diag("covariance not positive definite; smallest eigenvalue", lo);
    if (hi / lo > 1e12)
        throw_diag("covariance condition number exceeds 1e12", hi / lo);
}

SpdFactor::SpdFactor(const Mat& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
        throw std::invalid_argument("covariance must be square");
    if (!sigma.allFinite())
        throw std::invalid_argument("covariance has non-finite entries");
    const double scale = sigma.cwiseAbs().maxCoeff();
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale))
        throw_diag("covariance not symmetric; max asymmetry", asym);
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
    eig_min_ = es.eigenvalues().minCoeff();
    const double eig_max = es.eigenvalues().maxCoeff();
    if (!(eig_min_ > 0.0))
        throw_diag("covariance not positive definite; smallest eigenvalue", eig_min_);
    if (eig_max / eig_min_ > 1e12)
        throw_diag("covariance condition number exceeds 1e12", eig_max / eig_min_);
    Eigen::LLT<Mat> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw_diag("Cholesky failed; smallest eigenvalue", eig_min_);
    l_ = llt.matrixL();
}

Vec SpdFactor::solve(const Vec& b) const {
    Vec y = l_.triangularView<Eigen::Lower>().solve(b);
    return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Mat SpdFactor::solve(const Mat& b) const {
    Mat y = l_.triangularView<Eigen::Lower>().solve(b);
    return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Mat spd_sqrt(const Mat& sigma) {
    return SpdFactor(sigma).matrix_l();
}

double pairwise_sum(const double* x, std::ptrdiff_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::ptrdiff_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::ptrdiff_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace mvf
