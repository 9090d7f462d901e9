#include "mvfront/portfolio.hpp"

#include <cmath>
#include <stdexcept>

namespace mvf {

TwoFund two_fund_portfolios(const Vec& mu, const Mat& sigma) {
    if (mu.size() != sigma.rows())
        throw std::invalid_argument("mean/covariance dimension mismatch");
    if (mu.size() < 2)
        throw std::invalid_argument("need at least two assets");
    if (!mu.allFinite())
        throw std::invalid_argument("mean has non-finite entries");
    SpdFactor f(sigma);
    const Vec ones = Vec::Ones(mu.size());
    Vec si = f.solve(ones);
    Vec sm = f.solve(mu);
    const double q = ones.dot(si);
    const double s = ones.dot(sm);
    if (!(q > 0.0))
        throw std::invalid_argument("1'Sigma^-1 1 not positive");
    if (std::abs(s) < 1e-12)
        throw std::invalid_argument("1'Sigma^-1 mu is numerically zero; MRAR undefined");
    TwoFund tf;
    tf.gmv = si / q;
    tf.mrar = sm / s;
    tf.s = s;
    return tf;
}

Vec gmv_weights(const Mat& sigma) {
    SpdFactor f(sigma);
    const Vec ones = Vec::Ones(sigma.rows());
    Vec si = f.solve(ones);
    const double q = ones.dot(si);
    if (!(q > 0.0))
        throw std::invalid_argument("1'Sigma^-1 1 not positive");
    return si / q;
}

Vec mrar_weights(const Vec& mu, const Mat& sigma) {
    return two_fund_portfolios(mu, sigma).mrar;
}

Vec optimal_weights(const TwoFund& tf, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("risk aversion must be positive and finite");
    const double a = tf.s / gamma;
    return (1.0 - a) * tf.gmv + a * tf.mrar;
}

Vec optimal_weights(const Vec& mu, const Mat& sigma, double gamma) {
    return optimal_weights(two_fund_portfolios(mu, sigma), gamma);
}

double mv_utility(const Vec& w, const Vec& mu, const Mat& sigma, double gamma) {
    if (w.size() != mu.size() || mu.size() != sigma.rows() || sigma.rows() != sigma.cols())
        throw std::invalid_argument("dimension mismatch");
    return w.dot(mu) - 0.5 * gamma * w.dot(sigma * w);
}

FrontierPoint evaluate_frontier_point(const Vec& w, const Vec& mu, const Mat& sigma,
                                      double gamma) {
    FrontierPoint p;
    p.gamma = gamma;
    p.mean = w.dot(mu);
    p.variance = w.dot(sigma * w);
    p.utility = p.mean - 0.5 * gamma * p.variance;
    return p;
}

std::vector<double> gamma_grid(const Vec& mu, const Mat& sigma,
                               const std::vector<double>& allocations) {
    if (allocations.empty())
        throw std::invalid_argument("allocation grid is empty");
    const TwoFund tf = two_fund_portfolios(mu, sigma);
    if (!(tf.s > 0.0))
        throw std::invalid_argument("1'Sigma^-1 mu must be positive for the gamma grid");
    std::vector<double> gammas;
    gammas.reserve(allocations.size());
    for (double a : allocations) {
        if (a < 0.0 || a > 2.0)
            throw std::invalid_argument("MRAR allocation outside [0,2]");
        gammas.push_back(a > 0.0 ? tf.s / a : kGmvGammaSentinel);
    }
    return gammas;
}

}  // namespace mvf
