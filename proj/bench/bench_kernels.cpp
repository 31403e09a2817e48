#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pwlab/kernels.hpp"

using namespace pwlab;

namespace {

std::vector<cplx> random_cplx(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v;
}

std::vector<double> random_real(int n, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_exp_sum(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto s = random_real(n, -2.0, 2.0, 1);
    const auto w = random_cplx(n, 2);
    const auto t = random_real(n, -64.0, 64.0, 3);
    std::vector<cplx> out(n);
    for (auto _ : st) {
        kernels::exp_sum(s, w, t, 1.0, out, exec_of(st));
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_toeplitz_from_moments(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto pp = random_cplx(n, 4), pm = random_cplx(n, 5), d = random_cplx(n, 6);
    for (auto _ : st) {
        MatC T = kernels::toeplitz_from_moments(pp, pm, d, 1.0, exec_of(st));
        benchmark::DoNotOptimize(T.data());
    }
}

void BM_matmul(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto va = random_cplx(n * n, 7), vb = random_cplx(n * n, 8);
    const MatC A = Eigen::Map<const MatC>(va.data(), n, n), B = Eigen::Map<const MatC>(vb.data(), n, n);
    for (auto _ : st) {
        MatC C = kernels::matmul(A, B, exec_of(st));
        benchmark::DoNotOptimize(C.data());
    }
}

}  // namespace

BENCHMARK(BM_exp_sum)->ArgsProduct({{1024, 4096}, {0, 1}})->ArgNames({"n", "omp"})->UseRealTime();
BENCHMARK(BM_toeplitz_from_moments)->ArgsProduct({{128, 512}, {0, 1}})->ArgNames({"n", "omp"})->UseRealTime();
BENCHMARK(BM_matmul)->ArgsProduct({{128, 256}, {0, 1}})->ArgNames({"n", "omp"})->UseRealTime();

int main(int argc, char** argv) {
    configure_threads();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
