// Copyright 2026 The dglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "dglab/cp_verify.hpp"
#include "dglab/cycle_analysis.hpp"
#include "dglab/fixtures.hpp"
#include "dglab/game_model.hpp"

namespace {

using namespace dglab;

GameSpec random_game(std::size_t states, std::size_t actions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  std::vector<std::string> s, a;
  for (std::size_t k = 0; k < states; ++k) s.push_back("s" + std::to_string(k));
  for (std::size_t i = 0; i < actions; ++i) a.push_back("a" + std::to_string(i));
  GameSpec g(s, a, a);
  for (std::size_t k = 0; k < states; ++k)
    for (std::size_t i = 0; i < actions; ++i)
      for (std::size_t j = 0; j < actions; ++j) {
        g.g(k, i, j) = u(rng);
        double sum = 0.0;
        for (std::size_t to = 0; to < states; ++to) sum += (g.q(k, i, j, to) = e(rng));
        for (std::size_t to = 0; to < states; ++to) g.q(k, i, j, to) /= sum;
      }
  return g;
}

void BM_MatrixGame(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_matrix_game(a));
}
BENCHMARK(BM_MatrixGame)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_SolveRandom(benchmark::State& state) {
  GameSpec g = random_game(static_cast<std::size_t>(state.range(0)), 3, 7);
  const double lambda = std::pow(10.0, -static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_discounted(g, lambda));
}
BENCHMARK(BM_SolveRandom)->Args({5, 2})->Args({5, 6})->Args({20, 2})->Args({20, 6});

void BM_SolveKohlberg(benchmark::State& state) {
  GameSpec g = fixtures::kohlberg_game();
  const double lambda = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_discounted(g, lambda));
}
BENCHMARK(BM_SolveKohlberg)->DenseRange(2, 8, 2);

void BM_Decompose(benchmark::State& state) {
  LeadingTermChain c = fixtures::six_cycle_chain();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(c));
}
BENCHMARK(BM_Decompose);

void BM_ProfileLimit(benchmark::State& state) {
  GameSpec g = fixtures::kohlberg_game();
  auto grid = geometric_grid(0.1, std::sqrt(0.1), 13);
  for (auto _ : state) benchmark::DoNotOptimize(build_profile_limit(g, grid));
}
BENCHMARK(BM_ProfileLimit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
