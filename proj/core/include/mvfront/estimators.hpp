#pragma once

#include <map>
#include <string>
#include <utility>

#include "mvfront/linalg.hpp"

namespace mvf {

// Moment prediction produced by one decision rule.
struct MomentEstimate {
    Vec mu;
    Mat sigma;
    std::string rule;
};

// Shrinkage bookkeeping exposed for reporting; intensity always in [0,1].
struct ShrinkageDiagnostics {
    double intensity = 0.0;
    std::string target;
    std::map<std::string, double> auxiliary;
};

struct BayesSteinOptions {
    // false: (n+2) in the intensity as published; true: the classical (n-2).
    bool classical_constant = false;
};

// Column means and (T-1)-divisor covariance.  Requires T >= 2.
MomentEstimate sample_moments(const Mat& r);

// Shrinks the sample mean toward the grand value mu0 = GMV return of the
// sample, with the covariance inflation that goes with the posterior.
std::pair<MomentEstimate, ShrinkageDiagnostics> bayes_stein(
    const Mat& r, const BayesSteinOptions& opt = {});

// Constant-correlation target: sample variances on the diagonal, the mean
// off-diagonal sample correlation everywhere else.
Mat constant_correlation_target(const Mat& sigma_s);

// Linear shrinkage of the sample covariance toward the constant-correlation
// target; intensity clipped to [0,1].  Mean estimate is the sample mean.
std::pair<MomentEstimate, ShrinkageDiagnostics> linear_shrinkage(const Mat& r);

// Analytical nonlinear shrinkage of the sample eigenvalues (kernel spectral
// density + Hilbert transform, isotonic pass).  Mean estimate is the sample
// mean.  A degenerate spectrum returns the sample covariance with
// auxiliary["degenerate"] = 1.
std::pair<MomentEstimate, ShrinkageDiagnostics> nonlinear_shrinkage(const Mat& r);

// Statistical factor model built from the top-k principal components of the
// sample covariance.
struct FactorModel {
    Mat loadings_unrestricted;       // N x K, time-series regression with intercept
    Mat loadings_restricted;         // N x K, regression through the origin
    Mat factor_returns;              // T x K projections of the sample
    Vec factor_mean;                 // K
    Mat factor_cov;                  // K x K, (T-1)-divisor
    Mat residual_cov_unrestricted;   // N x N diagonal
    Mat residual_cov_restricted;     // N x N diagonal
    Vec alpha;                       // N intercepts
    Vec sample_mu;
    Mat sample_sigma;
};

// Requires 1 <= k < N and an SPD sample covariance.  Eigenvector signs are
// fixed by making each column's largest-magnitude entry positive.
FactorModel pca_factors(const Mat& r, int k);

// mu = B mu_B + alpha; sigma = B Sigma_B B' + diag(residual variances).
MomentEstimate factor_moments(const FactorModel& fm);

// Bayesian combination of the factor model and the sample moments with model
// confidence tau >= 0 (tau = 0 is full model confidence).
std::pair<MomentEstimate, ShrinkageDiagnostics> data_and_model(
    const Mat& r, int k, double tau);

}  // namespace mvf
