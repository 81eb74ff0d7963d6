// Serial vs OpenMP kernels on random dense instances.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sns/kernels.hpp"

namespace {

sns::Matrix random_stochastic(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    sns::Matrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = unit(rng);
    for (Eigen::Index i = 0; i < n; ++i) m.row(i) /= m.row(i).sum();
    return m;
}

struct Instance {
    std::vector<sns::Matrix> p;
    sns::Matrix r;
    sns::Matrix q;
    sns::Vector w;
};

Instance make_instance(Eigen::Index n, std::size_t count) {
    std::mt19937_64 rng(7);
    Instance inst;
    for (std::size_t i = 0; i < count; ++i) inst.p.push_back(random_stochastic(rng, n));
    inst.r = sns::Matrix::Random(n, static_cast<Eigen::Index>(count));
    inst.q = sns::Matrix::Random(n, static_cast<Eigen::Index>(count));
    inst.w = sns::Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
    return inst;
}

template <bool Parallel>
void BM_WeightedSum(benchmark::State& state) {
    const auto inst = make_instance(state.range(0), 8);
    for (auto _ : state) {
        auto out = Parallel ? sns::kernels::weighted_sum(inst.p, inst.w) : sns::kernels::serial::weighted_sum(inst.p, inst.w);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_Bellman(benchmark::State& state) {
    const auto inst = make_instance(state.range(0), 8);
    for (auto _ : state) {
        auto out = Parallel ? sns::kernels::bellman_optimality(inst.r, inst.p, inst.q, 0.97)
                            : sns::kernels::serial::bellman_optimality(inst.r, inst.p, inst.q, 0.97);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_Joint(benchmark::State& state) {
    const auto inst = make_instance(state.range(0), 8);
    std::mt19937_64 rng(11);
    const sns::Matrix env = random_stochastic(rng, 8);
    for (auto _ : state) {
        auto out = Parallel ? sns::kernels::joint_transition(inst.p, env) : sns::kernels::serial::joint_transition(inst.p, env);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_WeightedSum<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_WeightedSum<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Bellman<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Bellman<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Joint<false>)->Arg(32)->Arg(128);
BENCHMARK(BM_Joint<true>)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
