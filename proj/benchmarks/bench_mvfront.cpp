#include <benchmark/benchmark.h>

#include "mvfront/dgp.hpp"
#include "mvfront/estimators.hpp"
#include "mvfront/experiment.hpp"
#include "mvfront/portfolio.hpp"

namespace {

using namespace mvf;

// Fixed synthetic target: one-factor covariance, spread means.
DgpSpec bench_spec(int n) {
    Vec vol = Vec::LinSpaced(n, 0.03, 0.07);
    Vec b = Vec::LinSpaced(n, 0.3, 0.85);
    Mat c = b * b.transpose();
    c.diagonal().setOnes();
    DgpSpec spec;
    spec.sigma = c.cwiseProduct(vol * vol.transpose());
    spec.mu = Vec::LinSpaced(n, 0.005, 0.014);
    spec.nu = 8.0;
    spec.skew = Vec::Constant(n, -0.15);
    spec.ar = Vec::Constant(n, -0.15);
    spec.garch_alpha = Vec::Constant(n, 0.08);
    spec.garch_beta = Vec::Constant(n, 0.90);
    return spec;
}

Mat bench_sample(int t, int n) {
    DgpSpec spec = bench_spec(n);
    spec.kind = DgpKind::mvg;
    return simulate(spec, t, RngStream{42, 0});
}

void bm_simulate(benchmark::State& state, DgpKind kind) {
    DgpSpec spec = bench_spec(10);
    spec.kind = kind;
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(spec, 36, RngStream{42, i++}));
}
BENCHMARK_CAPTURE(bm_simulate, mvg, DgpKind::mvg);
BENCHMARK_CAPTURE(bm_simulate, mvt, DgpKind::mvt);
BENCHMARK_CAPTURE(bm_simulate, mvsn, DgpKind::mvsn);
BENCHMARK_CAPTURE(bm_simulate, ar1, DgpKind::ar1);
BENCHMARK_CAPTURE(bm_simulate, garch, DgpKind::garch);

void bm_rule(benchmark::State& state, const std::string& rule) {
    const Mat r = bench_sample(static_cast<int>(state.range(0)), 10);
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_rule(rule, r, 2, 0.01, false));
}
BENCHMARK_CAPTURE(bm_rule, sample, std::string("sample"))->Arg(36)->Arg(120);
BENCHMARK_CAPTURE(bm_rule, bayes_stein, std::string("bayes_stein"))->Arg(36)->Arg(120);
BENCHMARK_CAPTURE(bm_rule, factor, std::string("factor"))->Arg(36)->Arg(120);
BENCHMARK_CAPTURE(bm_rule, linear_shrink, std::string("linear_shrink"))->Arg(36)->Arg(120);
BENCHMARK_CAPTURE(bm_rule, data_and_model, std::string("data_and_model"))->Arg(36)->Arg(120);
BENCHMARK_CAPTURE(bm_rule, nonlinear_shrink, std::string("nonlinear_shrink"))->Arg(36)->Arg(120);

void bm_optimizer(benchmark::State& state) {
    const DgpSpec spec = bench_spec(10);
    const std::vector<double> gammas = gamma_grid(spec.mu, spec.sigma,
                                                  default_allocations());
    for (auto _ : state) {
        const TwoFund funds = two_fund_portfolios(spec.mu, spec.sigma);
        for (double g : gammas)
            benchmark::DoNotOptimize(optimal_weights(funds, g));
    }
}
BENCHMARK(bm_optimizer);

void bm_study(benchmark::State& state) {
    StudyConfig cfg;
    cfg.dgp = bench_spec(10);
    cfg.dgp.kind = DgpKind::mvg;
    cfg.reps = 50;
    cfg.master_seed = 42;
    cfg.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_study(cfg));
}
BENCHMARK(bm_study)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
