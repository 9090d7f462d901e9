#pragma once

#include <string>

#include "mvfront/linalg.hpp"

// Hand-crafted samples shared across suites.  Entries are short exact
// decimals so every platform parses them to identical doubles; expected
// outputs were computed once at full precision and frozen as literals.
namespace fixtures {

inline std::string data_path(const char* name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

// 8x3 return sample exercising every estimator.
inline mvf::Mat crafted_returns() {
    mvf::Mat r(8, 3);
    r << 0.012, -0.004, 0.021,
        -0.018, 0.009, -0.007,
        0.025, 0.013, 0.016,
        0.004, -0.011, 0.002,
        -0.009, 0.006, -0.014,
        0.017, 0.002, 0.025,
        -0.021, -0.016, -0.019,
        0.008, 0.019, 0.006;
    return r;
}

// 30x5 sample for the eigenvalue-shrinkage oracle (c = 1/6).
inline mvf::Mat nls_returns() {
    mvf::Mat r(30, 5);
    r << 0.005671, 0.016344, -0.017724, -0.020746, -0.010374,
        0.033957, 0.003498, -0.027351, 0.045744, 0.001513,
        0.019936, -0.023472, -0.010036, 0.000738, 0.015107,
        -0.009818, 0.010601, -0.007438, -0.013752, 0.015740,
        0.004278, -0.026476, 0.007165, 0.007142, -0.016110,
        -0.015291, -0.032574, 0.029713, -0.003697, -0.022698,
        0.032545, -0.017900, -0.008018, 0.037577, -0.042993,
        -0.029438, -0.056757, 0.050771, -0.031636, 0.054179,
        0.055893, -0.015367, -0.044858, 0.050321, 0.065422,
        -0.016980, 0.026805, 0.009221, -0.017241, -0.034780,
        0.010128, 0.012107, 0.021563, 0.021474, -0.007229,
        -0.023987, -0.020243, 0.025111, -0.013949, 0.008521,
        0.024992, -0.002910, -0.027735, -0.006604, -0.010304,
        -0.003456, -0.037173, 0.021873, 0.007480, 0.032548,
        -0.028401, 0.031929, 0.010422, -0.058349, -0.008955,
        0.026794, 0.029120, -0.010884, 0.023314, -0.012979,
        -0.001921, -0.055302, 0.035332, -0.007992, 0.079079,
        0.020301, 0.048061, -0.033829, -0.020782, 0.039908,
        0.014935, -0.011408, 0.007075, 0.044992, 0.009486,
        0.011775, -0.025310, -0.005391, 0.010714, 0.028779,
        -0.004292, -0.014254, 0.032696, 0.008937, 0.020688,
        0.012759, 0.041648, -0.031127, 0.010788, -0.010176,
        -0.012526, -0.024264, 0.007741, -0.019833, 0.018202,
        0.014201, -0.017004, -0.001792, -0.034890, 0.027254,
        -0.026709, 0.002253, 0.021333, -0.023014, -0.040063,
        0.025031, -0.053507, 0.018391, 0.009781, 0.000152,
        0.007887, 0.053945, -0.022254, -0.017060, -0.025246,
        -0.013653, 0.011286, 0.011836, -0.024928, -0.046051,
        -0.000926, 0.020042, -0.019412, 0.003230, -0.009747,
        0.019992, -0.031762, 0.002561, 0.006321, -0.004432;
    return r;
}

// 7x4 sample whose raw linear-shrinkage intensity is 4.5137...  (> 1).
inline mvf::Mat ceiling_returns() {
    mvf::Mat r(7, 4);
    r << -0.020192, -0.004184, -0.003185, 0.010817,
        0.004293, 0.007107, -0.013077, -0.002592,
        0.015680, 0.029869, -0.025181, 0.030278,
        0.026918, 0.015626, 0.005289, -0.006278,
        0.029160, 0.039205, 0.036033, 0.026302,
        0.007148, -0.024166, -0.000089, 0.013129,
        -0.025767, 0.007902, 0.008597, 0.013921;
    return r;
}

// 6x3 near-one-factor sample whose raw intensity is -1.208... (< 0).
inline mvf::Mat floor_returns() {
    mvf::Mat r(6, 3);
    r << -0.013933, -0.016426, -0.013635,
        -0.016544, -0.015878, -0.013840,
        -0.004039, -0.003027, -0.003606,
        -0.013902, -0.015802, -0.013870,
        -0.001073, -0.000611, -0.001458,
        -0.001882, -0.000561, -0.001439;
    return r;
}

// Random SPD covariance: A A' + eps I, entries of A from the given generator.
template <typename Rng>
mvf::Mat random_spd(int n, Rng& rng, double eps = 1e-3) {
    mvf::Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.gauss() * 0.05;
    mvf::Mat s = a * a.transpose();
    s.diagonal().array() += eps;
    return s;
}

// Recolors a T x N sample so its sample mean and (T-1)-divisor covariance
// equal mu and sigma exactly (up to roundoff).
inline mvf::Mat recolor_exact(const mvf::Mat& raw, const mvf::Vec& mu,
                              const mvf::Mat& sigma) {
    const auto t = raw.rows();
    mvf::Mat c = raw.rowwise() - raw.colwise().mean();
    mvf::Mat s = c.transpose() * c / double(t - 1);
    Eigen::LLT<mvf::Mat> llt_s(s);
    mvf::Mat white = llt_s.matrixL().solve(c.transpose()).transpose();
    mvf::Mat out = white * mvf::spd_sqrt(sigma).transpose();
    out.rowwise() += mu.transpose();
    return out;
}

}  // namespace fixtures
