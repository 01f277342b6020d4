// Benchmark comparing the serial reference kernels against the OpenMP paths.
// Both paths are index-deterministic, so the results must match exactly; the
// table reports wall times and the agreement check.

#include <chrono>
#include <cstdio>
#include <string>

#include "paclab/claims.hpp"
#include "paclab/experiments.hpp"
#include "paclab/rademacher.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"

using namespace paclab;

namespace {

template <typename F>
double time_ms(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void row(const std::string& name, double serial_ms, double openmp_ms,
         bool equal) {
  std::printf("%-28s %10.1f %10.1f %8.2fx  %s\n", name.c_str(), serial_ms,
              openmp_ms, serial_ms / openmp_ms, equal ? "match" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-28s %10s %10s %9s  %s\n", "kernel", "serial ms", "openmp ms",
              "speedup", "results");

  {
    const Dataset dataset(4);
    const auto oracle = metric_realizability_oracle(dataset);
    VcReport a, b;
    const double ts = time_ms([&] {
      for (int i = 0; i < 20; ++i)
        a = brute_force_vcdim(dataset, oracle, 1 << 22, Exec::Serial);
    });
    const double tp = time_ms([&] {
      for (int i = 0; i < 20; ++i)
        b = brute_force_vcdim(dataset, oracle, 1 << 22, Exec::OpenMP);
    });
    row("vcdim N=4 (x20)", ts, tp, a.vc == b.vc && a.oracle_calls == b.oracle_calls);
  }

  {
    std::vector<ClaimCheckReport> a, b;
    const double ts = time_ms(
        [&] { a = verify_binomial_central_tails(1000, 0.5, 200000, 7, Exec::Serial); });
    const double tp = time_ms(
        [&] { b = verify_binomial_central_tails(1000, 0.5, 200000, 7, Exec::OpenMP); });
    row("central tails 2e5 trials", ts, tp,
        a[0].estimate == b[0].estimate && a[1].estimate == b[1].estimate);
  }

  {
    ContrastiveBatch batch;
    batch.n = 64;
    batch.k = 4;
    batch.input_dim = 16;
    CounterRng rng(11, 0);
    const auto fill = [&](std::vector<double>& v, std::size_t rows) {
      v.resize(rows * batch.input_dim);
      for (std::size_t r = 0; r < rows; ++r) {
        double norm = 0.0;
        for (int c = 0; c < batch.input_dim; ++c) {
          v[r * batch.input_dim + c] = rng.normal();
          norm += v[r * batch.input_dim + c] * v[r * batch.input_dim + c];
        }
        norm = std::sqrt(norm);
        for (int c = 0; c < batch.input_dim; ++c) v[r * batch.input_dim + c] /= norm;
      }
    };
    fill(batch.anchors, batch.n);
    fill(batch.comparisons, static_cast<std::size_t>(batch.n) * (batch.k + 1));
    const LinearEmbeddingClass cls{16, 8, 1.0};
    McEstimate a, b;
    const double ts =
        time_ms([&] { a = rademacher_estimate(batch, cls, 2000, 13, Exec::Serial); });
    const double tp =
        time_ms([&] { b = rademacher_estimate(batch, cls, 2000, 13, Exec::OpenMP); });
    row("rademacher 2000 draws", ts, tp, a.value == b.value);
  }

  {
    VcLowerBoundParams params;
    params.trials = 2000;
    params.seed = 17;
    VcLowerBoundSummary a, b;
    const double ts = time_ms([&] { a = run_vc_lower_bound(params, nullptr, Exec::Serial); });
    const double tp = time_ms([&] { b = run_vc_lower_bound(params, nullptr, Exec::OpenMP); });
    row("vc-lb 2000 trials", ts, tp, a.freq_failure == b.freq_failure);
  }

  return 0;
}
