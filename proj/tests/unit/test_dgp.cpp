#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "mvfront/dgp.hpp"
#include "mvfront/estimators.hpp"
#include "mvfront/panel.hpp"
#include "support.hpp"

using mvf::Mat;
using mvf::Vec;

namespace {

double col_skewness(const Vec& x) {
    const double m = x.mean();
    const Vec c = (x.array() - m).matrix();
    const double m2 = c.squaredNorm() / double(x.size());
    const double m3 = c.array().cube().mean();
    return m3 / std::pow(m2, 1.5);
}

double col_excess_kurtosis(const Vec& x) {
    const double m = x.mean();
    const Vec c = (x.array() - m).matrix();
    const double m2 = c.squaredNorm() / double(x.size());
    const double m4 = c.array().pow(4).mean();
    return m4 / (m2 * m2) - 3.0;
}

double col_acf1(const Vec& x) {
    const double m = x.mean();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double d = x(i) - m;
        den += d * d;
        if (i + 1 < x.size()) num += d * (x(i + 1) - m);
    }
    return num / den;
}

mvf::DgpSpec base_spec(mvf::DgpKind kind) {
    mvf::DgpSpec spec;
    spec.kind = kind;
    spec.mu = Vec(2);
    spec.mu << 0.008, 0.012;
    spec.sigma = Mat(2, 2);
    spec.sigma << 0.0025, 0.0008, 0.0008, 0.0036;
    spec.skew = Vec::Zero(2);
    spec.ar = Vec::Zero(2);
    spec.garch_alpha = Vec::Constant(2, 0.08);
    spec.garch_beta = Vec::Constant(2, 0.90);
    return spec;
}

// x-tilde view: unit marginals and no coloring, so the simulated series IS
// the standardized innovation process.
mvf::DgpSpec white_spec(mvf::DgpKind kind, int n) {
    mvf::DgpSpec spec;
    spec.kind = kind;
    spec.mu = Vec::Zero(n);
    spec.sigma = Mat::Identity(n, n);
    spec.skew = Vec::Zero(n);
    spec.ar = Vec::Zero(n);
    spec.garch_alpha = Vec::Constant(n, 0.08);
    spec.garch_beta = Vec::Constant(n, 0.90);
    return spec;
}

// standard error of a grand mean from disjoint block means; blocks of 500
// absorb the serial dependence the clustered kinds carry
double batch_mean_se(const Vec& x) {
    const int block = 500;
    const int blocks = int(x.size()) / block;
    double acc = 0.0, acc2 = 0.0;
    for (int b = 0; b < blocks; ++b) {
        const double m = x.segment(Eigen::Index(b) * block, block).mean();
        acc += m;
        acc2 += m * m;
    }
    const double mean = acc / blocks;
    return std::sqrt(std::max(acc2 / blocks - mean * mean, 0.0) / blocks);
}

void check_target_moments(const mvf::DgpSpec& spec, int t, mvf::RngStream stream) {
    const Mat r = mvf::simulate(spec, t, stream);
    const Vec means = r.colwise().mean();
    for (int i = 0; i < spec.mu.size(); ++i)
        CHECK(std::abs(means(i) - spec.mu(i)) < 3.0 * batch_mean_se(r.col(i)));
    for (int i = 0; i < spec.mu.size(); ++i)
        for (int j = i; j < spec.mu.size(); ++j) {
            const Vec prod =
                ((r.col(i).array() - means(i)) * (r.col(j).array() - means(j)))
                    .matrix();
            CHECK(std::abs(prod.mean() - spec.sigma(i, j)) <
                  3.0 * batch_mean_se(prod));
        }
}

}  // namespace

TEST_SUITE_BEGIN("dgp");

TEST_CASE("kind names round-trip and unknown names are rejected") {
    for (const auto kind : {mvf::DgpKind::mvg, mvf::DgpKind::mvt, mvf::DgpKind::mvsn,
                            mvf::DgpKind::ar1, mvf::DgpKind::garch})
        CHECK(mvf::dgp_kind_from_string(mvf::to_string(kind)) == kind);
    CHECK(mvf::to_string(mvf::DgpKind::mvg) == "mvg");
    CHECK_THROWS_AS(mvf::dgp_kind_from_string("cauchy"), std::invalid_argument);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
    auto spec = base_spec(mvf::DgpKind::mvt);
    spec.nu = 4.0;
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);

    spec = base_spec(mvf::DgpKind::mvsn);
    spec.skew(0) = mvf::kSkewNormalBound;
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);
    spec.skew = Vec::Zero(3);  // wrong length
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);

    spec = base_spec(mvf::DgpKind::ar1);
    spec.ar(1) = 1.0;
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);

    spec = base_spec(mvf::DgpKind::garch);
    spec.garch_alpha(0) = 0.10;
    spec.garch_beta(0) = 0.90;  // alpha + beta = 1
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);
    spec.garch_alpha(0) = -0.01;
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);

    spec = base_spec(mvf::DgpKind::mvg);
    spec.sigma(0, 1) = 0.9;  // breaks positive definiteness
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);

    spec = base_spec(mvf::DgpKind::mvg);
    spec.mu = Vec::Zero(3);
    CHECK_THROWS_AS(mvf::validate(spec), std::invalid_argument);
}

TEST_CASE("simulation is bitwise deterministic per stream") {
    for (const auto kind : {mvf::DgpKind::mvg, mvf::DgpKind::mvt, mvf::DgpKind::mvsn,
                            mvf::DgpKind::ar1, mvf::DgpKind::garch}) {
        auto spec = base_spec(kind);
        spec.skew << -0.3, -0.2;  // same sign: jointly admissible at this sigma
        spec.ar << -0.25, -0.05;
        const Mat a = mvf::simulate(spec, 50, {99, 7});
        const Mat b = mvf::simulate(spec, 50, {99, 7});
        CHECK((a.array() == b.array()).all());
        const Mat c = mvf::simulate(spec, 50, {99, 8});
        CHECK((a.array() != c.array()).any());
    }
    CHECK_THROWS_AS(mvf::simulate(base_spec(mvf::DgpKind::mvg), 0, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("gaussian draws hit the target moments") {
    check_target_moments(base_spec(mvf::DgpKind::mvg), 100000, {101, 0});
}

TEST_CASE("zero-skew skew-normal is indistinguishable from gaussian") {
    auto sn = base_spec(mvf::DgpKind::mvsn);
    check_target_moments(sn, 100000, {102, 0});
    const Mat a = mvf::simulate(sn, 100000, {102, 1});
    const Mat b = mvf::simulate(base_spec(mvf::DgpKind::mvg), 100000, {102, 2});
    for (int i = 0; i < 2; ++i) {
        const double se = std::sqrt(2.0 * sn.sigma(i, i) / 100000.0);
        CHECK(std::abs(a.col(i).mean() - b.col(i).mean()) < 3.0 * se);
        CHECK(std::abs(col_skewness(a.col(i))) < 3.0 * std::sqrt(6.0 / 100000.0));
    }
}

TEST_CASE("skew-normal draws carry the requested marginal skewness") {
    auto spec = base_spec(mvf::DgpKind::mvsn);
    // opposite-sign skews need an uncorrelated sigma to stay jointly admissible
    spec.sigma(0, 1) = spec.sigma(1, 0) = 0.0;
    spec.skew << -0.3, 0.2;
    check_target_moments(spec, 200000, {103, 0});
    const Mat r = mvf::simulate(spec, 200000, {103, 1});
    for (int i = 0; i < 2; ++i) {
        const double got = col_skewness(r.col(i));
        CHECK(std::abs(got - spec.skew(i)) < 0.1 * std::abs(spec.skew(i)));
    }
}

TEST_CASE("student-t with huge nu has vanishing excess kurtosis") {
    auto spec = base_spec(mvf::DgpKind::mvt);
    spec.nu = 1e6;
    check_target_moments(spec, 100000, {104, 0});
    const Mat r = mvf::simulate(spec, 300000, {104, 1});
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(col_excess_kurtosis(r.col(i))) < 0.05);
}

TEST_CASE("student-t with nu=8 shows the predicted excess kurtosis") {
    auto spec = base_spec(mvf::DgpKind::mvt);
    spec.nu = 8.0;
    check_target_moments(spec, 300000, {105, 0});
    const Mat r = mvf::simulate(spec, 300000, {105, 1});
    const double pooled =
        0.5 * (col_excess_kurtosis(r.col(0)) + col_excess_kurtosis(r.col(1)));
    CHECK(pooled > 1.2);  // 6/(nu-4) = 1.5; heavy-tailed estimator, wide band
    CHECK(pooled < 1.8);
}

TEST_CASE("autoregressive innovations match their coefficients and unit variance") {
    auto spec = white_spec(mvf::DgpKind::ar1, 2);
    spec.ar << -0.25, -0.05;
    const int t = 200000;
    const Mat x = mvf::simulate(spec, t, {106, 0});
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(col_acf1(x.col(i)) - spec.ar(i)) < 0.01);
        const double var = (x.col(i).array() - x.col(i).mean()).square().mean();
        CHECK(std::abs(var - 1.0) < 0.01);
    }
    // innovations are independent across assets at non-zero lags
    double cross = 0.0;
    for (int s = 0; s + 1 < t; ++s) cross += x(s, 0) * x(s + 1, 1);
    cross /= double(t - 1);
    CHECK(std::abs(cross) < 3.0 / std::sqrt(double(t)));
}

TEST_CASE("colored autoregressive draws still match the target moments") {
    auto spec = base_spec(mvf::DgpKind::ar1);
    spec.ar << -0.25, -0.05;
    check_target_moments(spec, 200000, {107, 0});
}

TEST_CASE("garch innovations have unit variance and volatility clustering") {
    auto spec = white_spec(mvf::DgpKind::garch, 2);
    const int t = 200000;
    const Mat x = mvf::simulate(spec, t, {108, 0});
    for (int i = 0; i < 2; ++i) {
        // volatility clustering at persistence 0.98 inflates the sample
        // variance's standard error to about 1.8% here; allow 3 of those
        const double var = (x.col(i).array() - x.col(i).mean()).square().mean();
        CHECK(std::abs(var - 1.0) < 0.06);
        const Vec sq = x.col(i).array().square().matrix();
        CHECK(col_acf1(sq) > 0.05);  // theory: about 0.2 at alpha=.08, beta=.90
    }
}

TEST_CASE("colored garch draws still match the target moments") {
    check_target_moments(base_spec(mvf::DgpKind::garch), 200000, {109, 0});
}

TEST_CASE("calibration copies the sample moments into every spec") {
    const auto panel =
        mvf::parse_industry_csv(fixtures::data_path("ff10_synthetic.csv"));
    const auto s = mvf::sample_moments(panel.values);
    for (const auto kind : {mvf::DgpKind::mvg, mvf::DgpKind::mvt, mvf::DgpKind::mvsn,
                            mvf::DgpKind::ar1, mvf::DgpKind::garch}) {
        const auto spec = mvf::calibrate(panel.values, kind);
        CHECK((spec.mu.array() == s.mu.array()).all());
        CHECK((spec.sigma.array() == s.sigma.array()).all());
    }
}

TEST_CASE("fixture calibration reproduces the frozen per-kind parameters") {
    const auto panel =
        mvf::parse_industry_csv(fixtures::data_path("ff10_synthetic.csv"));

    const auto mvt = mvf::calibrate(panel.values, mvf::DgpKind::mvt);
    CHECK(mvt.nu == doctest::Approx(8.313704882181714).epsilon(1e-12));

    const auto mvsn = mvf::calibrate(panel.values, mvf::DgpKind::mvsn);
    Vec skew(10);
    skew << -0.18274972522158944, -0.19507399673545023, -0.20010444441502132,
        -0.13117146703541205, -0.1857469395628392, -0.16009996223939757,
        -0.18888109164980613, -0.15310110172644834, -0.11518882658748034,
        -0.20119750259033145;
    for (int i = 0; i < 10; ++i)
        CHECK(mvsn.skew(i) == doctest::Approx(skew(i)).epsilon(1e-12));

    const auto ar1 = mvf::calibrate(panel.values, mvf::DgpKind::ar1);
    Vec phi(10);
    phi << -0.26090134136154486, -0.08511294883157121, -0.10984009873135017,
        -0.05441334318512279, -0.1767304608538914, -0.13124538734754856,
        -0.2899737731816159, -0.16733494532049561, -0.0816215598235873,
        -0.1428261413632722;
    for (int i = 0; i < 10; ++i)
        CHECK(ar1.ar(i) == doctest::Approx(phi(i)).epsilon(1e-12));
    CHECK(ar1.ar.mean() == doctest::Approx(-0.15).epsilon(1e-12));

    const auto garch = mvf::calibrate(panel.values, mvf::DgpKind::garch);
    CHECK((garch.garch_alpha.array() == 0.08).all());
    CHECK((garch.garch_beta.array() == 0.90).all());
}

TEST_CASE("a gaussian sample pushes the degrees of freedom to the upper clamp") {
    mvf::DgpSpec gauss = white_spec(mvf::DgpKind::mvg, 3);
    gauss.sigma *= 0.0025;
    const Mat r = mvf::simulate(gauss, 5000, {110, 0});
    const auto spec = mvf::calibrate(r, mvf::DgpKind::mvt);
    CHECK(spec.nu == 50.0);
}

TEST_CASE("exact excess kurtosis of 1.5 calibrates to nu = 8") {
    // k entries of -1 and +1 with 7k zeros: m4/m2^2 = 4.5 exactly
    const int k = 4, t = 9 * k;
    Mat r = Mat::Zero(t, 2);
    for (int i = 0; i < k; ++i) {
        r(i, 0) = 0.01;
        r(k + i, 0) = -0.01;
        r(2 * k + i, 1) = 0.01;
        r(3 * k + i, 1) = -0.01;
    }
    const auto spec = mvf::calibrate(r, mvf::DgpKind::mvt);
    CHECK(spec.nu == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("rescaled autocorrelations keep their ratios and hit the target mean") {
    auto base = base_spec(mvf::DgpKind::ar1);
    base.ar << -0.25, -0.05;
    const Mat r = mvf::simulate(base, 4000, {111, 0});
    const auto spec = mvf::calibrate(r, mvf::DgpKind::ar1);
    CHECK(spec.ar.mean() == doctest::Approx(-0.15).epsilon(1e-12));
    const double a0 = col_acf1(r.col(0)), a1 = col_acf1(r.col(1));
    CHECK(spec.ar(0) / spec.ar(1) == doctest::Approx(a0 / a1).epsilon(1e-10));
}

TEST_CASE("extreme sample skewness clamps inside the admissible bound") {
    // one-sided spikes create skewness far beyond the skew-normal range
    Mat r = Mat::Constant(40, 2, -0.001);
    r(0, 0) = 0.5;
    r(1, 1) = 0.5;
    r(2, 0) = 0.4;
    r(3, 1) = 0.4;
    const auto spec = mvf::calibrate(r, mvf::DgpKind::mvsn);
    const double cap = 0.99 * mvf::kSkewNormalBound;
    CHECK(spec.skew(0) == doctest::Approx(cap).epsilon(1e-14));
    CHECK(spec.skew(1) == doctest::Approx(cap).epsilon(1e-14));
}

TEST_CASE("centered-to-direct conversion matches the frozen worked example") {
    Vec mu(2), g(2);
    mu << 0.01, 0.02;
    g << -0.2, -0.35;
    Mat s(2, 2);
    s << 4e-4, 1e-4, 1e-4, 9e-4;
    const auto dp = mvf::sn_centered_to_direct(mu, s, g);
    CHECK(dp.xi(0) == doctest::Approx(0.025505490795662757).epsilon(1e-12));
    CHECK(dp.xi(1) == doctest::Approx(0.048027829020055104).epsilon(1e-12));
    CHECK(dp.omega(0) == doctest::Approx(0.025306525735754058).epsilon(1e-12));
    CHECK(dp.omega(1) == doctest::Approx(0.041055562346379366).epsilon(1e-12));
    CHECK(dp.delta(0) == doctest::Approx(-0.7679146091857022).epsilon(1e-12));
    CHECK(dp.delta(1) == doctest::Approx(-0.8556130361272366).epsilon(1e-12));
    CHECK(dp.omega_bar(0, 1) ==
          doctest::Approx(0.51453205517446743).epsilon(1e-12));

    // round trip: direct parameters reproduce the centered moments
    const double b = std::sqrt(2.0 / std::numbers::pi);
    const Vec od = dp.omega.cwiseProduct(dp.delta);
    const Vec mean_back = dp.xi + b * od;
    const Mat cov_back =
        dp.omega_bar.cwiseProduct(dp.omega * dp.omega.transpose()) -
        b * b * od * od.transpose();
    CHECK((mean_back - mu).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cov_back - s).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jointly inadmissible skewness is rejected") {
    Vec mu(2), g(2);
    mu << 0.01, 0.02;
    g << -0.3, 0.5;  // opposite signs too strong for this covariance
    Mat s(2, 2);
    s << 4e-4, 1e-4, 1e-4, 9e-4;
    CHECK_THROWS_AS(mvf::sn_centered_to_direct(mu, s, g), std::invalid_argument);

    const auto panel =
        mvf::parse_industry_csv(fixtures::data_path("ff10_synthetic.csv"));
    const auto est = mvf::sample_moments(panel.values);
    // uniform skew at 90% of the marginal bound exceeds the joint region
    const Vec strong = Vec::Constant(10, -0.9 * mvf::kSkewNormalBound);
    CHECK_THROWS_AS(mvf::sn_centered_to_direct(est.mu, est.sigma, strong),
                    std::invalid_argument);
}

TEST_CASE("marginally out-of-range skewness is rejected") {
    Vec mu(2), g(2);
    mu << 0.0, 0.0;
    g << 0.0, 1.2;  // beyond the single-asset bound
    CHECK_THROWS_AS(
        mvf::sn_centered_to_direct(mu, Mat::Identity(2, 2), g),
        std::invalid_argument);
}

TEST_SUITE_END();
