#include <benchmark/benchmark.h>

#include <random>

#include "indist/analysis.hpp"
#include "indist/convex.hpp"
#include "indist/distinguisher.hpp"
#include "indist/multicalibration.hpp"

using namespace indist;

namespace {

ProbDist random_dist(std::mt19937_64& eng, std::size_t n) {
  std::uniform_int_distribution<long> w(1, 50);
  std::vector<long> raw(n);
  long total = 0;
  for (auto& v : raw) total += v = w(eng);
  std::vector<Rational> m(n);
  for (std::size_t x = 0; x < n; ++x) {
    m[x] = Rational(raw[x], total);
    m[x].canonicalize();
  }
  return ProbDist(Domain(n), m);
}

Family random_family(std::mt19937_64& eng, std::size_t n, std::size_t count) {
  std::bernoulli_distribution coin(0.5);
  std::vector<TestFunction> fs;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Rational> v(n);
    for (auto& q : v) q = coin(eng) ? 1 : 0;
    fs.emplace_back(Domain(n), v);
  }
  return Family(Domain(n), fs);
}

void BM_BuildPartition(benchmark::State& state) {
  std::mt19937_64 eng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto x0 = random_dist(eng, n), x1 = random_dist(eng, n);
  auto fam = random_family(eng, n, 32);
  auto d = mixture(x0, x1);
  auto g = target_g(x0, x1);
  auto params = MCParams::defaults(Rational(1, 20));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_partition(d, g, fam, params));
  }
}
BENCHMARK(BM_BuildPartition)->Arg(16)->Arg(64)->Arg(256);

void BM_ExactAdvantage(benchmark::State& state) {
  std::mt19937_64 eng(2);
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<unsigned>(state.range(1));
  auto pi0 = random_dist(eng, m), pi1 = random_dist(eng, m);
  auto part = Partition::singletons(mixture(pi0, pi1), target_g(pi0, pi1));
  auto table = round_alphas(alphas(pi0, pi1, part), Rational(1, 1000));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_advantage(table, pi0, pi1, k));
  }
}
BENCHMARK(BM_ExactAdvantage)->Args({2, 64})->Args({2, 512})->Args({4, 16})->Args({4, 48});

// Second argument: epsilon in units of 1e-4.
void BM_PseudoHellinger(benchmark::State& state) {
  std::mt19937_64 eng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const double eps = static_cast<double>(state.range(1)) * 1e-4;
  auto x0 = random_dist(eng, n), x1 = random_dist(eng, n);
  auto fam = random_family(eng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudo_hellinger(x0, x1, fam, eps));
  }
}
BENCHMARK(BM_PseudoHellinger)
    ->Args({4, 200})->Args({16, 200})->Args({48, 200})->Args({48, 1})
    ->Unit(benchmark::kMillisecond);

void BM_PseudoRenyi(benchmark::State& state) {
  std::mt19937_64 eng(5);
  const auto n = static_cast<std::size_t>(state.range(0));
  const double eps = static_cast<double>(state.range(1)) * 1e-4;
  auto x0 = random_dist(eng, n);
  auto fam = random_family(eng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudo_renyi(x0, fam, eps));
  }
}
BENCHMARK(BM_PseudoRenyi)
    ->Args({16, 200})->Args({48, 200})->Args({48, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
