// Microbenchmarks for the hot paths: tensor algebra, spectra, label-space
// entropy, and the LOCC protocols.

#include <benchmark/benchmark.h>

#include "qdistill/distill.hpp"
#include "qdistill/entropy.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/locc.hpp"
#include "qdistill/mixtures.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/separability.hpp"

#include <optional>

using namespace qdistill;

namespace {

DensityOperator four_party_dense(int d) {
  auto state = four_party_state(FourPartyDescriptor::standard(d));
  return *state.dense;
}

DensityOperator full_mixture_dense(int d) {
  auto state = uniform_full_mixture(d);
  return *state.dense;
}

void BM_TensorProductMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix a = Matrix::Random(n, n);
  const Matrix b = Matrix::Random(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensor_product(a, b));
  }
}
BENCHMARK(BM_TensorProductMatrix)->Arg(8)->Arg(16)->Arg(32);

void BM_PartialTraceFourParty(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = four_party_dense(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, {0, 1}));
  }
}
BENCHMARK(BM_PartialTraceFourParty)->Arg(2)->Arg(3);

void BM_PptCheckFullMixture(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = full_mixture_dense(d);
  const Cut cut = Cut::between({"A", "C"}, {"B", "D"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppt_check(rho, cut));
  }
}
BENCHMARK(BM_PptCheckFullMixture)->Arg(2)->Arg(3);

void BM_SpectralDecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = full_mixture_dense(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_decompose(rho.mat));
  }
}
BENCHMARK(BM_SpectralDecompose)->Arg(2)->Arg(3);

void BM_VonNeumannEntropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = four_party_dense(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(von_neumann_entropy(rho));
  }
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(2)->Arg(3);

void BM_RelativeEntropyDense(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = four_party_dense(d);
  const DensityOperator sigma = full_mixture_dense(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relative_entropy(rho, sigma));
  }
}
BENCHMARK(BM_RelativeEntropyDense)->Arg(2)->Arg(3);

void BM_KlLabelPairedCopies(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelDistribution p = multi_copy_state(3, n).labels;
  const LabelDistribution q = pairing_product(3, consecutive_pairing(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kl_label(p, q));
  }
}
BENCHMARK(BM_KlLabelPairedCopies)->Arg(4)->Arg(6)->Arg(8);

void BM_BellBasisDiagonal(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityOperator rho = full_mixture_dense(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bell_basis_diagonal(rho));
  }
}
BENCHMARK(BM_BellBasisDiagonal)->Arg(2)->Arg(3);

void BM_DiscriminateTwoCopy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(discriminate_two_copy({1, 1, d}, seed++));
  }
}
BENCHMARK(BM_DiscriminateTwoCopy)->Arg(2)->Arg(3)->Arg(5);

void BM_Teleport(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Ket input = fourier_basis(d)[1];
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(teleport(input, {1, 1, d}, {1, 1, d}, seed++));
  }
}
BENCHMARK(BM_Teleport)->Arg(2)->Arg(3)->Arg(5);

void BM_DistillFourParty(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distill_four_party(d, seed++));
  }
}
BENCHMARK(BM_DistillFourParty)->Arg(2)->Arg(3);

void BM_DistillMultiCopy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distill_multi_copy(2, n, seed++));
  }
}
BENCHMARK(BM_DistillMultiCopy)->Arg(3)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
