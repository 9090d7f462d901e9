#include "mvfront/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mvfront/estimators.hpp"

namespace mvf {

std::string to_string(DgpKind kind) {
    switch (kind) {
        case DgpKind::mvg: return "mvg";
        case DgpKind::mvt: return "mvt";
        case DgpKind::mvsn: return "mvsn";
        case DgpKind::ar1: return "ar1";
        case DgpKind::garch: return "garch";
    }
    throw std::invalid_argument("unknown DGP kind");
}

DgpKind dgp_kind_from_string(const std::string& name) {
    if (name == "mvg") return DgpKind::mvg;
    if (name == "mvt") return DgpKind::mvt;
    if (name == "mvsn") return DgpKind::mvsn;
    if (name == "ar1") return DgpKind::ar1;
    if (name == "garch") return DgpKind::garch;
    throw std::invalid_argument("unknown DGP kind: " + name);
}

void validate(const DgpSpec& spec) {
    const auto n = spec.mu.size();
    if (n < 1 || spec.sigma.rows() != n || spec.sigma.cols() != n)
        throw std::invalid_argument("DGP target moments have inconsistent dimensions");
    validate_covariance(spec.sigma);
    if (!spec.mu.allFinite())
        throw std::invalid_argument("DGP target mean has non-finite entries");
    switch (spec.kind) {
        case DgpKind::mvg:
            break;
        case DgpKind::mvt:
            if (!(spec.nu > 4.0))
                throw std::invalid_argument("MVT degrees of freedom must exceed 4");
            break;
        case DgpKind::mvsn:
            if (spec.skew.size() != n)
                throw std::invalid_argument("MVSN skew vector has wrong length");
            if ((spec.skew.cwiseAbs().array() >= kSkewNormalBound).any())
                throw std::invalid_argument("MVSN marginal skewness outside the admissible bound");
            break;
        case DgpKind::ar1:
            if (spec.ar.size() != n)
                throw std::invalid_argument("AR coefficient vector has wrong length");
            if ((spec.ar.cwiseAbs().array() >= 1.0).any())
                throw std::invalid_argument("AR coefficients must lie inside (-1,1)");
            break;
        case DgpKind::garch:
            if (spec.garch_alpha.size() != n || spec.garch_beta.size() != n)
                throw std::invalid_argument("GARCH parameter vectors have wrong length");
            if ((spec.garch_alpha.array() < 0.0).any() || (spec.garch_beta.array() < 0.0).any())
                throw std::invalid_argument("GARCH parameters must be non-negative");
            if (((spec.garch_alpha + spec.garch_beta).array() >= 1.0).any())
                throw std::invalid_argument("GARCH persistence alpha+beta must be below 1");
            break;
    }
}

SnDirect sn_centered_to_direct(const Vec& mu, const Mat& sigma, const Vec& skew) {
    const auto n = mu.size();
    if (skew.size() != n || sigma.rows() != n)
        throw std::invalid_argument("dimension mismatch");
    SnDirect dp;
    Vec c(n), muz(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c[i] = std::cbrt(2.0 * skew[i] / (4.0 - std::numbers::pi));
        muz[i] = c[i] / std::sqrt(1.0 + c[i] * c[i]);
    }
    dp.delta = std::sqrt(std::numbers::pi / 2.0) * muz;
    if ((dp.delta.cwiseAbs().array() >= 1.0).any())
        throw std::invalid_argument("marginal skewness outside the skew-normal bound");
    const Vec sz = (1.0 - muz.array().square()).sqrt();
    dp.omega = sigma.diagonal().cwiseSqrt().array() / sz.array();
    dp.xi = mu - (dp.omega.array() * muz.array()).matrix();
    dp.omega_bar =
        sigma.cwiseQuotient(dp.omega * dp.omega.transpose()) + muz * muz.transpose();
    dp.omega_star.resize(n + 1, n + 1);
    dp.omega_star(0, 0) = 1.0;
    dp.omega_star.block(0, 1, 1, n) = dp.delta.transpose();
    dp.omega_star.block(1, 0, n, 1) = dp.delta;
    dp.omega_star.block(1, 1, n, n) = dp.omega_bar;
    Eigen::LLT<Mat> llt(dp.omega_star);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument(
            "joint skewness exceeds the skew-normal admissibility region");
    return dp;
}

Mat simulate(const DgpSpec& spec, int t, RngStream stream) {
    if (t < 1)
        throw std::invalid_argument("sample length must be at least 1");
    validate(spec);
    const int n = static_cast<int>(spec.mu.size());
    Rng rng(stream);
    const Mat l = spd_sqrt(spec.sigma);
    Mat r(t, n);

    switch (spec.kind) {
        case DgpKind::mvg: {
            Vec z(n);
            for (int row = 0; row < t; ++row) {
                for (int i = 0; i < n; ++i) z[i] = rng.gauss();
                r.row(row) = (l * z + spec.mu).transpose();
            }
            break;
        }
        case DgpKind::mvt: {
            // Parameter matrix (nu-2)/nu * Sigma makes Sigma the actual covariance.
            const Mat lp = std::sqrt((spec.nu - 2.0) / spec.nu) * l;
            Vec z(n);
            for (int row = 0; row < t; ++row) {
                for (int i = 0; i < n; ++i) z[i] = rng.gauss();
                const double w = rng.chisq(spec.nu);
                r.row(row) =
                    (lp * z * std::sqrt(spec.nu / w) + spec.mu).transpose();
            }
            break;
        }
        case DgpKind::mvsn: {
            // Hidden truncation: one latent sign variable shared by all assets.
            const SnDirect dp = sn_centered_to_direct(spec.mu, spec.sigma, spec.skew);
            const Mat lstar = spd_sqrt(dp.omega_star);
            Vec z(n + 1), y(n + 1);
            for (int row = 0; row < t; ++row) {
                for (int i = 0; i <= n; ++i) z[i] = rng.gauss();
                y = lstar * z;
                const double sign = y[0] > 0.0 ? 1.0 : -1.0;
                for (int i = 0; i < n; ++i)
                    r(row, i) = dp.xi[i] + dp.omega[i] * sign * y[i + 1];
            }
            break;
        }
        case DgpKind::ar1: {
            // Unit-variance stationary AR(1) per asset, then colored.
            Mat x(t, n);
            for (int i = 0; i < n; ++i) {
                const double phi = spec.ar[i];
                const double se = std::sqrt(1.0 - phi * phi);
                x(0, i) = rng.gauss();
                for (int row = 1; row < t; ++row)
                    x(row, i) = phi * x(row - 1, i) + se * rng.gauss();
            }
            r = x * l.transpose();
            r.rowwise() += spec.mu.transpose();
            break;
        }
        case DgpKind::garch: {
            // Unit unconditional variance per asset; burn-in washes the
            // deterministic start h = 1.
            constexpr int kBurnIn = 250;
            Mat x(t, n);
            for (int i = 0; i < n; ++i) {
                const double a = spec.garch_alpha[i];
                const double b = spec.garch_beta[i];
                const double omega = 1.0 - a - b;
                double h = 1.0;
                for (int k = 0; k < kBurnIn; ++k) {
                    const double xx = std::sqrt(h) * rng.gauss();
                    h = omega + a * xx * xx + b * h;
                }
                for (int row = 0; row < t; ++row) {
                    x(row, i) = std::sqrt(h) * rng.gauss();
                    h = omega + a * x(row, i) * x(row, i) + b * h;
                }
            }
            r = x * l.transpose();
            r.rowwise() += spec.mu.transpose();
            break;
        }
    }
    return r;
}

namespace {

// Central moments with the 1/T divisor.
void central_moments(const Mat& r, Vec& m2, Vec& m3, Vec& m4) {
    const Vec mean = r.colwise().mean();
    Mat y = r.rowwise() - mean.transpose();
    m2 = y.array().square().colwise().mean();
    m3 = y.array().pow(3).colwise().mean();
    m4 = y.array().pow(4).colwise().mean();
}

double lag1_autocorrelation(const Vec& x) {
    const auto t = x.size();
    const double mean = x.mean();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
        const double d = x[i] - mean;
        den += d * d;
        if (i + 1 < t) num += d * (x[i + 1] - mean);
    }
    if (den <= 0.0)
        throw std::invalid_argument("constant series has no autocorrelation");
    return num / den;
}

}  // namespace

DgpSpec calibrate(const Mat& r, DgpKind kind, const CalibrateOptions& opt) {
    if (r.rows() < 4)
        throw std::invalid_argument("calibration sample too short");
    const int n = static_cast<int>(r.cols());
    MomentEstimate s = sample_moments(r);
    DgpSpec spec;
    spec.kind = kind;
    spec.mu = s.mu;
    spec.sigma = s.sigma;

    Vec m2, m3, m4;
    switch (kind) {
        case DgpKind::mvg:
            break;
        case DgpKind::mvt: {
            central_moments(r, m2, m3, m4);
            double acc = 0.0;
            int cnt = 0;
            for (int i = 0; i < n; ++i) {
                const double kurt = m4[i] / (m2[i] * m2[i]) - 3.0;
                if (kurt > 0.0) {
                    acc += 4.0 + 6.0 / kurt;
                    ++cnt;
                }
            }
            spec.nu = cnt == 0 ? opt.default_nu
                               : std::clamp(acc / cnt, opt.nu_lo, opt.nu_hi);
            break;
        }
        case DgpKind::mvsn: {
            central_moments(r, m2, m3, m4);
            spec.skew.resize(n);
            const double cap = 0.99 * kSkewNormalBound;
            for (int i = 0; i < n; ++i) {
                const double g = opt.skew_scale * m3[i] / std::pow(m2[i], 1.5);
                spec.skew[i] = std::clamp(g, -cap, cap);
            }
            break;
        }
        case DgpKind::ar1: {
            Vec rho(n);
            for (int i = 0; i < n; ++i) rho[i] = lag1_autocorrelation(r.col(i));
            const double mean_rho = rho.mean();
            if (mean_rho == 0.0)
                throw std::invalid_argument(
                    "mean lag-1 autocorrelation is zero; cannot rescale");
            const double fac = opt.target_mean_acf / mean_rho;
            spec.ar = (fac * rho).cwiseMax(-opt.ar_clamp).cwiseMin(opt.ar_clamp);
            break;
        }
        case DgpKind::garch: {
            spec.garch_alpha = Vec::Constant(n, opt.garch_alpha);
            spec.garch_beta = Vec::Constant(n, opt.garch_beta);
            break;
        }
    }
    validate(spec);
    return spec;
}

}  // namespace mvf
