#include "mvfront/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mvf {

namespace {

void require_sample(const Mat& r, int min_t) {
    if (r.rows() < min_t)
        throw std::invalid_argument("sample too short");
    if (r.cols() < 1)
        throw std::invalid_argument("sample has no assets");
    if (!r.allFinite())
        throw std::invalid_argument("sample has non-finite entries");
}

// Pool-adjacent-violators pass enforcing an ascending sequence.
Vec isotonic_ascending(const Vec& y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> vals, wts;
    vals.reserve(n);
    wts.reserve(n);
    std::vector<int> cnt;
    cnt.reserve(n);
    for (int i = 0; i < n; ++i) {
        vals.push_back(y[i]);
        wts.push_back(1.0);
        cnt.push_back(1);
        while (vals.size() > 1 && vals[vals.size() - 2] > vals.back()) {
            const double w = wts[wts.size() - 2] + wts.back();
            const double v =
                (vals[vals.size() - 2] * wts[wts.size() - 2] + vals.back() * wts.back()) / w;
            vals.pop_back();
            wts.pop_back();
            const int c = cnt.back();
            cnt.pop_back();
            vals.back() = v;
            wts.back() = w;
            cnt.back() += c;
        }
    }
    Vec out(n);
    int pos = 0;
    for (std::size_t b = 0; b < vals.size(); ++b)
        for (int j = 0; j < cnt[b]; ++j) out[pos++] = vals[b];
    return out;
}

}  // namespace

MomentEstimate sample_moments(const Mat& r) {
    require_sample(r, 2);
    const auto t = static_cast<double>(r.rows());
    MomentEstimate e;
    e.mu = r.colwise().mean();
    Mat y = r.rowwise() - e.mu.transpose();
    e.sigma = (y.transpose() * y) / (t - 1.0);
    e.rule = "sample";
    return e;
}

std::pair<MomentEstimate, ShrinkageDiagnostics> bayes_stein(const Mat& r,
                                                            const BayesSteinOptions& opt) {
    const auto t = static_cast<double>(r.rows());
    const auto n = static_cast<double>(r.cols());
    MomentEstimate s = sample_moments(r);
    SpdFactor f(s.sigma);
    const Vec ones = Vec::Ones(r.cols());
    const Vec si = f.solve(ones);
    const double q = ones.dot(si);
    const double mu0 = s.mu.dot(si) / q;  // sample GMV return
    const Vec d = s.mu.array() - mu0;
    const double quad = d.dot(f.solve(d));
    const double c = opt.classical_constant ? n - 2.0 : n + 2.0;
    const double phi = c / (c + t * quad);

    MomentEstimate e;
    e.mu = (1.0 - phi) * s.mu + phi * mu0 * ones;
    e.sigma = s.sigma * (1.0 + 1.0 / (t + phi)) +
              (phi / (t * (t + 1.0 + phi))) * (ones * ones.transpose()) / q;
    e.rule = "bayes_stein";

    ShrinkageDiagnostics diag;
    diag.intensity = phi;
    diag.target = "grand mean at the sample GMV return";
    diag.auxiliary = {{"mu0", mu0}, {"dispersion_quadratic", quad}};
    return {std::move(e), std::move(diag)};
}

Mat constant_correlation_target(const Mat& sigma_s) {
    const int n = static_cast<int>(sigma_s.rows());
    const Vec var = sigma_s.diagonal();
    if ((var.array() <= 0.0).any())
        throw std::invalid_argument("constant-correlation target needs positive variances");
    const Vec sd = var.cwiseSqrt();
    double rsum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rsum += sigma_s(i, j) / (sd[i] * sd[j]);
    const double rbar = n > 1 ? rsum / (n * (n - 1.0)) : 0.0;
    Mat f = rbar * (sd * sd.transpose());
    f.diagonal() = var;
    return f;
}

std::pair<MomentEstimate, ShrinkageDiagnostics> linear_shrinkage(const Mat& r) {
    require_sample(r, 2);
    const auto t = static_cast<double>(r.rows());
    const int n = static_cast<int>(r.cols());

    // Intensity estimated on the 1/T-divisor moments.
    const Vec mean = r.colwise().mean();
    Mat y = r.rowwise() - mean.transpose();
    Mat sample = (y.transpose() * y) / t;
    const Vec var = sample.diagonal();
    const Vec sd = var.cwiseSqrt();
    double rsum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rsum += sample(i, j) / (sd[i] * sd[j]);
    const double rbar = n > 1 ? rsum / (n * (n - 1.0)) : 0.0;
    Mat prior = rbar * (sd * sd.transpose());
    prior.diagonal() = var;

    Mat y2 = y.array().square();
    Mat phi_mat = (y2.transpose() * y2) / t - sample.array().square().matrix();
    const double pi_hat = phi_mat.sum();
    Mat theta = (y.array().pow(3).matrix().transpose() * y) / t -
                var.asDiagonal() * sample;
    theta.diagonal().setZero();
    double rho = phi_mat.trace();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rho += rbar * (sd[j] / sd[i]) * theta(i, j);
    const double gap = (sample - prior).squaredNorm();
    double phi = 0.0;
    if (gap > 0.0) phi = std::clamp((pi_hat - rho) / gap / t, 0.0, 1.0);

    MomentEstimate s = sample_moments(r);
    const Mat target = constant_correlation_target(s.sigma);
    MomentEstimate e;
    e.mu = s.mu;
    e.sigma = phi * target + (1.0 - phi) * s.sigma;
    e.rule = "linear_shrink";

    ShrinkageDiagnostics diag;
    diag.intensity = phi;
    diag.target = "constant-correlation covariance";
    diag.auxiliary = {{"pi_hat", pi_hat},
                      {"rho_hat", rho},
                      {"frobenius_gap", gap},
                      {"mean_correlation", rbar}};
    return {std::move(e), std::move(diag)};
}

std::pair<MomentEstimate, ShrinkageDiagnostics> nonlinear_shrinkage(const Mat& r) {
    require_sample(r, 12);
    const int t = static_cast<int>(r.rows());
    const int n = static_cast<int>(r.cols());
    MomentEstimate s = sample_moments(r);

    Eigen::SelfAdjointEigenSolver<Mat> es(s.sigma);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    const Vec lam = es.eigenvalues();  // ascending
    const Mat u = es.eigenvectors();

    ShrinkageDiagnostics diag;
    diag.target = "shrunk sample eigenvalue spectrum";
    const double c = static_cast<double>(n) / t;
    diag.auxiliary["concentration"] = c;

    if (lam[n - 1] - lam[0] < 1e-14 * std::max(1.0, lam[n - 1])) {
        diag.auxiliary["degenerate"] = 1.0;
        MomentEstimate e = s;
        e.rule = "nonlinear_shrink";
        return {std::move(e), std::move(diag)};
    }

    const int keep = std::max(0, n - (t - 1));  // zero eigenvalues when n > T-1
    if (keep > 0 && c <= 1.0)
        throw std::invalid_argument("sample dimension equal to length unsupported");
    const int m = n - keep;
    const Vec lp = lam.tail(m);
    const double h = std::pow(static_cast<double>(t), -1.0 / 3.0);
    const double sq5 = std::sqrt(5.0);
    const double pi = std::numbers::pi;

    Vec ftilde = Vec::Zero(m), hftilde = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
        double fsum = 0.0, hsum = 0.0;
        for (int j = 0; j < m; ++j) {
            const double bw = h * lp[j];
            const double x = (lp[i] - lp[j]) / bw;
            const double k1 = 1.0 - x * x / 5.0;
            fsum += (3.0 / (4.0 * sq5)) * std::max(k1, 0.0) / bw;
            double hval;
            if (std::abs(std::abs(x) - sq5) < 1e-14) {
                hval = (-3.0 / (10.0 * pi)) * x;
            } else {
                hval = (-3.0 / (10.0 * pi)) * x +
                       (3.0 / (4.0 * sq5 * pi)) * k1 *
                           std::log(std::abs((sq5 - x) / (sq5 + x)));
                if (!std::isfinite(hval)) hval = 0.0;
            }
            hsum += hval / bw;
        }
        ftilde[i] = fsum / m;
        hftilde[i] = hsum / m;
    }

    Vec d(n);
    if (c <= 1.0) {
        for (int i = 0; i < m; ++i) {
            const double a = pi * c * lp[i] * ftilde[i];
            const double b = 1.0 - c - pi * c * lp[i] * hftilde[i];
            d[keep + i] = lp[i] / (a * a + b * b);
        }
    } else {
        const double hf0 =
            (1.0 / pi) *
            (3.0 / (10.0 * h * h) +
             3.0 / (4.0 * sq5 * h) * (1.0 - 1.0 / (5.0 * h * h)) *
                 std::log((1.0 + sq5 * h) / (1.0 - sq5 * h))) *
            lp.cwiseInverse().mean();
        const double d0 = 1.0 / (pi * (static_cast<double>(n) - t) / t * hf0);
        for (int i = 0; i < keep; ++i) d[i] = d0;
        for (int i = 0; i < m; ++i) {
            const double denom =
                pi * pi * lp[i] * lp[i] * (ftilde[i] * ftilde[i] + hftilde[i] * hftilde[i]);
            d[keep + i] = lp[i] / denom;
        }
    }

    const Vec d_iso = isotonic_ascending(d);
    MomentEstimate e;
    e.mu = s.mu;
    e.sigma = u * d_iso.asDiagonal() * u.transpose();
    e.sigma = 0.5 * (e.sigma + e.sigma.transpose()).eval();
    e.rule = "nonlinear_shrink";
    return {std::move(e), std::move(diag)};
}

FactorModel pca_factors(const Mat& r, int k) {
    const int t = static_cast<int>(r.rows());
    const int n = static_cast<int>(r.cols());
    if (k < 1 || k >= n)
        throw std::invalid_argument("factor count must satisfy 1 <= k < N");
    MomentEstimate s = sample_moments(r);
    validate_covariance(s.sigma);

    Eigen::SelfAdjointEigenSolver<Mat> es(s.sigma);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    Mat v(n, k);
    for (int j = 0; j < k; ++j) {
        Vec col = es.eigenvectors().col(n - 1 - j);  // descending eigenvalues
        int imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        if (col[imax] < 0.0) col = -col;
        v.col(j) = col;
    }

    FactorModel fm;
    fm.factor_returns = r * v;
    fm.factor_mean = fm.factor_returns.colwise().mean();
    {
        Mat yf = fm.factor_returns.rowwise() - fm.factor_mean.transpose();
        fm.factor_cov = (yf.transpose() * yf) / (t - 1.0);
    }

    // Time-series regression with intercept: slopes from covariances.
    Mat vtsv = v.transpose() * s.sigma * v;
    Eigen::LLT<Mat> llt(vtsv);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("factor returns are rank deficient");
    fm.loadings_unrestricted = llt.solve((s.sigma * v).transpose()).transpose();
    fm.alpha = s.mu - fm.loadings_unrestricted * fm.factor_mean;
    {
        Mat resid = r;
        resid.rowwise() -= fm.alpha.transpose();
        resid -= fm.factor_returns * fm.loadings_unrestricted.transpose();
        fm.residual_cov_unrestricted =
            ((resid.transpose() * resid) / (t - k - 1.0)).diagonal().asDiagonal();
    }

    // Regression through the origin.
    Mat ftf = fm.factor_returns.transpose() * fm.factor_returns;
    Eigen::LLT<Mat> llt0(ftf);
    if (llt0.info() != Eigen::Success)
        throw std::runtime_error("factor returns are rank deficient");
    fm.loadings_restricted = llt0.solve(fm.factor_returns.transpose() * r).transpose();
    {
        Mat resid = r - fm.factor_returns * fm.loadings_restricted.transpose();
        fm.residual_cov_restricted =
            ((resid.transpose() * resid) / (t - static_cast<double>(k))).diagonal().asDiagonal();
    }

    fm.sample_mu = s.mu;
    fm.sample_sigma = s.sigma;
    return fm;
}

MomentEstimate factor_moments(const FactorModel& fm) {
    MomentEstimate e;
    e.mu = fm.loadings_unrestricted * fm.factor_mean + fm.alpha;
    e.sigma = fm.loadings_unrestricted * fm.factor_cov * fm.loadings_unrestricted.transpose() +
              fm.residual_cov_unrestricted;
    e.sigma = 0.5 * (e.sigma + e.sigma.transpose()).eval();
    e.rule = "factor";
    return e;
}

std::pair<MomentEstimate, ShrinkageDiagnostics> data_and_model(const Mat& r, int k,
                                                               double tau) {
    const auto t = static_cast<double>(r.rows());
    const auto n = static_cast<double>(r.cols());
    if (tau < 0.0)
        throw std::invalid_argument("model-confidence tau must be non-negative");
    if (!(t > std::max(k + 2.0, n + 1.0)))
        throw std::invalid_argument("sample too short for the degrees of freedom");
    FactorModel fm = pca_factors(r, k);

    SpdFactor fs(fm.sample_sigma);
    const double sharpe_sq = fm.sample_mu.dot(fs.solve(fm.sample_mu));
    const double phi = (1.0 + sharpe_sq) / (t * tau + 1.0 + sharpe_sq);

    MomentEstimate e;
    e.mu = phi * (fm.loadings_restricted * fm.factor_mean) + (1.0 - phi) * fm.sample_mu;
    const Mat f = phi * fm.loadings_restricted + (1.0 - phi) * fm.loadings_unrestricted;
    SpdFactor fb(fm.factor_cov);
    const double delta = 1.0 + fm.factor_mean.dot(fb.solve(fm.factor_mean));
    const Mat resid = phi * fm.residual_cov_restricted + (1.0 - phi) * fm.residual_cov_unrestricted;
    e.sigma = ((t + 1.0) / (t - k - 2.0)) * f * fm.factor_cov * f.transpose() +
              (t / (t - n - 1.0)) * delta * resid;
    e.sigma = 0.5 * (e.sigma + e.sigma.transpose()).eval();
    e.rule = "data_and_model";
    validate_covariance(e.sigma);

    ShrinkageDiagnostics diag;
    diag.intensity = phi;
    diag.target = "restricted factor-model mean";
    diag.auxiliary = {{"sharpe_sq", sharpe_sq}, {"predictive_delta", delta}};
    return {std::move(e), std::move(diag)};
}

}  // namespace mvf
