#include <benchmark/benchmark.h>

#include <cmath>

#include "loewner/geometry.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/solver.hpp"
#include "loewner/variational.hpp"

using namespace loewner;

namespace {

const Domain kDisc = Domain::unit_disc();

FieldSpec radial_unit() { return FieldSpec::radial(kDisc, TimeFunction::constant(1.0)); }

FieldSpec poly_tanh() {
    return FieldSpec::polynomial_disc(
        {PolynomialCoefficient{0, Complex(1.0, 0.0)}, PolynomialCoefficient{2, Complex(-1.0, 0.0)}});
}

void BM_KobayashiDistanceBall2(benchmark::State& state) {
    const Domain ball = Domain::unit_ball(2);
    const CVector z{Complex(0.4, 0.1), Complex(-0.2, 0.3)};
    const CVector w{Complex(-0.1, 0.2), Complex(0.3, -0.4)};
    for (auto _ : state) benchmark::DoNotOptimize(kobayashi_distance(ball, z, w));
}
BENCHMARK(BM_KobayashiDistanceBall2);

void BM_DirectionalDerivative(benchmark::State& state) {
    const CVector z{Complex(0.5, 0.0)}, w{Complex(0.0, 0.0)};
    const CVector u{Complex(-0.5, 0.0)}, v{Complex(0.0, 0.0)};
    for (auto _ : state)
        benchmark::DoNotOptimize(kobayashi_directional_derivative(kDisc, z, w, u, v));
}
BENCHMARK(BM_DirectionalDerivative);

void BM_IntegrateRadial(benchmark::State& state) {
    const FieldSpec f = radial_unit();
    const CVector z0{Complex(0.5, 0.0)};
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(f, kDisc, 0.0, z0, t_end, SolverConfig{}));
}
BENCHMARK(BM_IntegrateRadial)->Arg(1)->Arg(5)->Arg(10);

void BM_IntegrateTanh(benchmark::State& state) {
    const FieldSpec f = poly_tanh();
    const CVector z0{Complex(0.0, 0.0)};
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(f, kDisc, 0.0, z0, 1.0, SolverConfig{}));
}
BENCHMARK(BM_IntegrateTanh);

void BM_PicardRadial(benchmark::State& state) {
    const FieldSpec f = radial_unit();
    const CVector z0{Complex(0.25, 0.0)};
    for (auto _ : state) benchmark::DoNotOptimize(picard_iterate(f, 0.0, z0, 0.5));
}
BENCHMARK(BM_PicardRadial);

void BM_TransportTanh(benchmark::State& state) {
    const FieldSpec f = poly_tanh();
    const CVector z0{Complex(0.0, 0.0)};
    for (auto _ : state)
        benchmark::DoNotOptimize(transport_matrix(f, kDisc, 0.0, 1.0, z0, SolverConfig{}));
}
BENCHMARK(BM_TransportTanh);

void BM_CheckHerglotz(benchmark::State& state) {
    const FieldSpec f = radial_unit();
    const std::vector<double> times{0.25, 0.75};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            check_herglotz(f, kDisc, static_cast<std::size_t>(state.range(0)), times, 1e-9));
}
BENCHMARK(BM_CheckHerglotz)->Arg(16)->Arg(128);

} // namespace

BENCHMARK_MAIN();
