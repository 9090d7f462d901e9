#pragma once

#include <vector>

#include "mvfront/linalg.hpp"

namespace mvf {

// gamma stand-in for the zero-MRAR-allocation (pure GMV) frontier endpoint;
// keeps the gamma-indexed pipeline uniform instead of special-casing GMV.
inline constexpr double kGmvGammaSentinel = 1.5e8;

// The two portfolios every optimum is a combination of, plus s = 1'Sigma^-1 mu.
struct TwoFund {
    Vec gmv;
    Vec mrar;
    double s = 0.0;
};

// Computes both funds with a single factorization.  Throws if sigma fails
// covariance validation or |1'Sigma^-1 mu| < 1e-12 (degenerate MRAR scale).
TwoFund two_fund_portfolios(const Vec& mu, const Mat& sigma);

// Sigma^-1 1 / (1' Sigma^-1 1): minimizes w'Sigma w subject to w'1 = 1.
Vec gmv_weights(const Mat& sigma);

// Sigma^-1 mu / (1' Sigma^-1 mu): maximizes risk-adjusted return.
Vec mrar_weights(const Vec& mu, const Mat& sigma);

// (1-a) gmv + a mrar with a = 1'Sigma^-1 mu / gamma: the unique maximizer of
// w'mu - (gamma/2) w'Sigma w subject to w'1 = 1.
Vec optimal_weights(const Vec& mu, const Mat& sigma, double gamma);
Vec optimal_weights(const TwoFund& tf, double gamma);

// w'mu - (gamma/2) w'Sigma w
double mv_utility(const Vec& w, const Vec& mu, const Mat& sigma, double gamma);

// gamma_k = (1'Sigma^-1 mu) / a_k for MRAR allocations a_k in [0,2];
// a_k = 0 maps to kGmvGammaSentinel.  Requires 1'Sigma^-1 mu > 0.
std::vector<double> gamma_grid(const Vec& mu, const Mat& sigma,
                               const std::vector<double>& allocations);

// One frontier evaluation: mean/variance/utility of w under the given moments.
struct FrontierPoint {
    double gamma = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double utility = 0.0;
};

FrontierPoint evaluate_frontier_point(const Vec& w, const Vec& mu, const Mat& sigma,
                                      double gamma);

}  // namespace mvf
