// Serial reference vs OpenMP verification over the generated suites.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "stepcrn/corpus.hpp"
#include "stepcrn/verify.hpp"

using namespace stepcrn;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench(const char* label, const std::vector<Circuit>& corpus, Backend backend) {
  VerifyOptions opt;
  std::size_t runs = 0;
  bool same = true;
  std::vector<VerifySummary> serial, parallel;
  const double ts = seconds([&] {
    for (const auto& c : corpus)
      serial.push_back(verify_serial(c, compile(c, backend), opt));
  });
  const double tp = seconds([&] {
    for (const auto& c : corpus)
      parallel.push_back(verify_parallel(c, compile(c, backend), opt));
  });
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    runs += serial[k].runs;
    same = same && serial[k] == parallel[k];
  }
  std::printf("%-22s runs=%-8zu serial=%7.3fs parallel=%7.3fs threads=%d speedup=%.2fx identical=%s\n", label, runs,
              ts, tp, omp_get_max_threads(), tp > 0 ? ts / tp : 0.0, same ? "yes" : "NO");
}

} // namespace

int main() {
  auto formulas = generate_corpus(formula_suite_spec());
  formulas.erase(formulas.begin() + 40, formulas.end());
  auto circuits = generate_corpus(circuit_suite_spec());
  circuits.erase(circuits.begin() + 30, circuits.end());
  bench("formula/formula", formulas, Backend::Formula);
  bench("circuit/exp", circuits, Backend::Exp);
  bench("circuit/catalyst", circuits, Backend::Catalyst);
  return 0;
}
