// Times the OpenMP kernels against their serial reference implementations
// and checks they produce identical results. Build and run:
//   cmake --build build --target lnec_bench && ./build/bench/lnec_bench

#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>

#include "../tests/fixtures.hpp"
#include "lnec/construct.hpp"
#include "lnec/sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lnec;
using namespace lnec::testing;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const std::string& name, double serial_ms, double parallel_ms,
         bool equal) {
  std::cout << std::left << std::setw(34) << name << std::right
            << std::setw(12) << std::fixed << std::setprecision(1) << serial_ms
            << " ms" << std::setw(12) << parallel_ms << " ms" << std::setw(9)
            << std::setprecision(2) << serial_ms / parallel_ms << "x  "
            << (equal ? "results equal" : "RESULTS DIFFER") << "\n";
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  std::cout << std::left << std::setw(34) << "kernel" << std::right
            << std::setw(15) << "serial" << std::setw(15) << "parallel"
            << std::setw(10) << "speedup" << "\n";

  // minimum distance: a wide repetition code forces the full scan of every
  // pattern weight up to the cap
  {
    auto net = parallel_net(24);
    Field f = Field::make(2, 1);
    Code code(net, f, 1);
    for (int e = 0; e < 24; ++e) code.set_coef_msg(0, e, 1);
    Mat kernels = extended_kernels(code);
    NodeCollection T{{net->node_index("t")}};
    AnalysisOptions opt;
    opt.pattern_budget = 50'000'000;

    auto t0 = std::chrono::steady_clock::now();
    DistanceResult serial = min_distance_serial(code, kernels, T, 5, opt);
    double s_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    DistanceResult parallel = min_distance(code, kernels, T, 5, opt);
    double p_ms = ms_since(t0);
    row("min_distance (|E|=24, w<=5)", s_ms, p_ms,
        serial.value == parallel.value && serial.exact == parallel.exact);
  }

  // R-set enumeration: one max-flow per pattern
  {
    auto net = layered_net({3, 3, 3}, 0.55, 7);
    std::vector<int> pool = net->non_source_nodes();
    NodeCollection T{{pool.back()}};
    AnalysisOptions opt;
    opt.pattern_budget = 50'000'000;
    auto t0 = std::chrono::steady_clock::now();
    auto serial = enumerate_R_serial(*net, T, 3, opt);
    double s_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto parallel = enumerate_R(*net, T, 3, opt);
    double p_ms = ms_since(t0);
    row("enumerate_R (delta=3)", s_ms, p_ms, serial == parallel);
  }

  // capability sweep: exhaustive decode over message x error space
  {
    auto net = parallel_net(7);
    Field f = Field::make(2, 3);
    Code code(net, f, 1);
    for (int e = 0; e < 7; ++e) code.set_coef_msg(0, e, 1);
    Simulator sim(code);
    NodeCollection T{{net->node_index("t")}};
    auto t0 = std::chrono::steady_clock::now();
    SweepReport serial = sim.capability_sweep_serial(T, 3, 50'000'000);
    double s_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    SweepReport parallel = sim.capability_sweep(T, 3, 50'000'000);
    double p_ms = ms_since(t0);
    row("capability_sweep (" + std::to_string(serial.cases) + " cases)", s_ms,
        p_ms, serial.correct == parallel.correct);
  }

  // random construction: attempts verified in parallel blocks; GF(2) keeps
  // the failure rate high so the full attempt budget is scanned
  {
    auto net = butterfly_net();
    Field f = Field::make(2, 1);
    auto t0 = std::chrono::steady_clock::now();
    auto serial = construct_random_serial(*net, 2, f, Target::dispersion, 400, 12);
    double s_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto parallel = construct_random(*net, 2, f, Target::dispersion, 400, 12);
    double p_ms = ms_since(t0);
    bool equal = serial.attempts_used == parallel.attempts_used &&
                 serial.code.has_value() == parallel.code.has_value() &&
                 (!serial.code || *serial.code == *parallel.code) &&
                 serial.failures == parallel.failures;
    row("construct_random (400 attempts)", s_ms, p_ms, equal);
  }

  return 0;
}
