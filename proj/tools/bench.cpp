#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/kernels.hpp"
#include "ncrpg/parallel.hpp"
#include "ncrpg/problems/grassmann_mean.hpp"
#include "ncrpg/prox.hpp"
#include "ncrpg/random.hpp"

namespace {

using namespace ncrpg;

ExecPolicy policy_arg(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial;
}

struct MeanFixture {
  Grassmann man{40, 5};
  GrassmannMeanInstance inst;
};

const MeanFixture& mean_fixture() {
  static const MeanFixture fx = [] {
    MeanFixture f;
    Rng rng(11);
    f.inst = grassmann_mean_make(40, 5, 1000, 0.5, 2.0, rng);
    return f;
  }();
  return fx;
}

void BM_mean_cost(benchmark::State& state) {
  const MeanFixture& fx = mean_fixture();
  const ExecPolicy policy = policy_arg(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernels::mean_cost(fx.man, fx.inst.data, fx.inst.p0, policy));
}
BENCHMARK(BM_mean_cost)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_mean_grad(benchmark::State& state) {
  const MeanFixture& fx = mean_fixture();
  const ExecPolicy policy = policy_arg(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernels::mean_grad(fx.man, fx.inst.data, fx.inst.p0, policy));
}
BENCHMARK(BM_mean_grad)->Arg(0)->Arg(1)->ArgName("parallel");

struct MatvecFixture {
  Eigen::MatrixXd a;
  Eigen::VectorXd x;
  Eigen::VectorXd r;
};

const MatvecFixture& matvec_fixture() {
  static const MatvecFixture fx = [] {
    Rng rng(12);
    MatvecFixture f;
    f.a = rng.normal_matrix(707, 50000);
    f.x = rng.normal_vector(50000);
    f.r = rng.normal_vector(707);
    return f;
  }();
  return fx;
}

void BM_matvec(benchmark::State& state) {
  const MatvecFixture& fx = matvec_fixture();
  const ExecPolicy policy = policy_arg(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::matvec(fx.a, fx.x, policy));
}
BENCHMARK(BM_matvec)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_matvec_adjoint(benchmark::State& state) {
  const MatvecFixture& fx = matvec_fixture();
  const ExecPolicy policy = policy_arg(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::matvec_adjoint(fx.a, fx.r, policy));
}
BENCHMARK(BM_matvec_adjoint)->Arg(0)->Arg(1)->ArgName("parallel");

struct ProxFixture {
  Oblique man{1000, 64};
  Eigen::MatrixXd z;
};

const ProxFixture& prox_fixture() {
  static const ProxFixture fx = [] {
    ProxFixture f;
    Rng rng(13);
    f.z = f.man.random_point(rng);
    return f;
  }();
  return fx;
}

void BM_oblique_l1_prox(benchmark::State& state) {
  const ProxFixture& fx = prox_fixture();
  const ExecPolicy policy = policy_arg(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        oblique_l1_prox(fx.man, fx.z, 1e-3, {}, policy));
}
BENCHMARK(BM_oblique_l1_prox)->Arg(0)->Arg(1)->ArgName("parallel");

}  // namespace

BENCHMARK_MAIN();
