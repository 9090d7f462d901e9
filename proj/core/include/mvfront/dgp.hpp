#pragma once

#include <string>

#include "mvfront/linalg.hpp"
#include "mvfront/rng.hpp"

namespace mvf {

enum class DgpKind { mvg, mvt, mvsn, ar1, garch };

std::string to_string(DgpKind kind);
DgpKind dgp_kind_from_string(const std::string& name);

// Largest marginal skewness a skew-normal marginal can carry.
inline constexpr double kSkewNormalBound = 0.9952717;

// One simulator parameterization.  All five kinds share the target first two
// moments; the remaining fields apply per kind.
struct DgpSpec {
    DgpKind kind = DgpKind::mvg;
    Vec mu;            // target mean (decimal per period)
    Mat sigma;         // target covariance, SPD
    double nu = 8.0;   // MVT degrees of freedom, > 4
    Vec skew;          // MVSN marginal skewness, |g| < kSkewNormalBound
    Vec ar;            // AR(1) coefficients, each in (-1, 1)
    Vec garch_alpha;   // GARCH(1,1) ARCH weights, >= 0
    Vec garch_beta;    // GARCH(1,1) persistence weights, >= 0, alpha+beta < 1
};

// Throws std::invalid_argument when a field violates its invariant.
void validate(const DgpSpec& spec);

// Direct skew-normal parameters recovered from centered moments, plus the
// augmented correlation matrix the sampler factorizes.
struct SnDirect {
    Vec xi;         // location
    Vec omega;      // marginal scales
    Vec delta;      // latent loadings
    Mat omega_bar;  // N x N scale-free correlation-like matrix
    Mat omega_star; // (N+1) x (N+1) augmented matrix; must be PD (admissibility)
};

// Fails with std::invalid_argument when (mu, sigma, skew) exceeds the joint
// skew-normal admissibility region (omega_star not PD).
SnDirect sn_centered_to_direct(const Vec& mu, const Mat& sigma, const Vec& skew);

// Draws a t x N sample whose population mean is spec.mu and population
// covariance spec.sigma for every kind.  Bitwise deterministic in
// (spec, t, stream).
Mat simulate(const DgpSpec& spec, int t, RngStream stream);

struct CalibrateOptions {
    double default_nu = 8.0;   // fallback when no asset has positive excess kurtosis
    double nu_lo = 4.5;
    double nu_hi = 50.0;
    double skew_scale = 0.72;
    double target_mean_acf = -0.15;
    double ar_clamp = 0.98;
    double garch_alpha = 0.08;
    double garch_beta = 0.90;
};

// Builds a spec of the requested kind whose target moments are the sample
// moments of r, with the per-kind parameters read off the sample:
//   MVT   nu = mean over assets of 4 + 6/excess-kurtosis (positive ones only),
//         clamped to [nu_lo, nu_hi]; default_nu when none are positive.
//   MVSN  skew = skew_scale * sample marginal skewness, clamped inside the
//         admissible marginal bound.
//   AR1   ar = sample lag-1 autocorrelations rescaled to mean target_mean_acf,
//         clamped to +-ar_clamp.
//   GARCH per-asset (garch_alpha, garch_beta) from options.
DgpSpec calibrate(const Mat& r, DgpKind kind, const CalibrateOptions& opt = {});

}  // namespace mvf
