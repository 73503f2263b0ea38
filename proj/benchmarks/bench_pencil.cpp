#include <benchmark/benchmark.h>

#include <random>

#include "ncho/fuchsian.hpp"
#include "ncho/pencil.hpp"

using namespace ncho;

namespace {

NchoProblem instance(int p) {
    std::mt19937_64 rng(static_cast<unsigned>(p));
    std::normal_distribution<double> n(0.0, 1.0);
    auto random = [&] {
        CMatrix m(p, p);
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c) m(r, c) = cplx(n(rng), n(rng));
        return m;
    };
    const CMatrix x = random();
    const CMatrix A = x * x.adjoint() / static_cast<double>(p) + CMatrix::Identity(p, p);
    const double amin = Eigen::SelfAdjointEigenSolver<CMatrix>(A).eigenvalues()(0);
    CMatrix B = random();
    B *= 0.4 * amin / Eigen::JacobiSVD<CMatrix>(B).singularValues()(0);
    const CMatrix h = random();
    return make_problem(0.75, A, B, 0.25 * (h + h.adjoint()));
}

}  // namespace

static void BM_DecomposePencil(benchmark::State& state) {
    const auto pr = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(decompose_pencil(pr));
}
BENCHMARK(BM_DecomposePencil)->DenseRange(1, 4);

static void BM_VerifyLemma(benchmark::State& state) {
    const auto pr = instance(static_cast<int>(state.range(0)));
    const auto dec = decompose_pencil(pr);
    for (auto _ : state) benchmark::DoNotOptimize(verify_pencil_lemma(dec, pr));
}
BENCHMARK(BM_VerifyLemma)->DenseRange(1, 3);

static void BM_PositivityMargin(benchmark::State& state) {
    const auto pr = instance(2);
    for (auto _ : state) benchmark::DoNotOptimize(positivity_margin(pr, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PositivityMargin)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_BuildFuchsian(benchmark::State& state) {
    const auto pr = instance(static_cast<int>(state.range(0)));
    const auto dec = decompose_pencil(pr);
    for (auto _ : state) benchmark::DoNotOptimize(build_fuchsian(pr, dec, 1.3));
}
BENCHMARK(BM_BuildFuchsian)->DenseRange(1, 3);
