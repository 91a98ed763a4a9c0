// Serial vs OpenMP Monte Carlo throughput on the reference link.
//   mc_bench [trials] [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "rfso/mcsim.hpp"

using namespace rfso;

namespace {

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4'000'000;
  const int threads = argc > 2 ? std::atoi(argv[2]) : 0;

  analysis::LinkModel model;
  model.rf = {5, 5, 0.9, 100.0};
  model.fso = fso::derive_geometry({});
  model.gbar2 = 100.0;
  model.hpa = hpa::sel_params_db(3.0);

  const mc::Metric metrics[] = {mc::OutageMetric{1.0},
                                mc::BepMetric{analysis::modulation_preset("CBFSK")},
                                mc::CapacityMetric{}};
  const char* names[] = {"outage", "bep", "capacity"};

  std::printf("metric,trials,serial_s,parallel_s,speedup,identical\n");
  int mismatches = 0;
  for (int i = 0; i < 3; ++i) {
    mc::McPlan plan;
    plan.trials = trials;
    plan.threads = threads;
    plan.metric = metrics[i];
    mc::McEstimate s, p;
    const double ts = timed([&] { s = mc::run_point_serial(model, plan); });
    const double tp = timed([&] { p = mc::run_point(model, plan); });
    const bool same = std::memcmp(&s.value, &p.value, sizeof(double)) == 0 &&
                      std::memcmp(&s.stderr_, &p.stderr_, sizeof(double)) == 0;
    mismatches += !same;
    std::printf("%s,%llu,%.3f,%.3f,%.2f,%s\n", names[i], static_cast<unsigned long long>(trials), ts,
                tp, ts / tp, same ? "yes" : "no");
  }
  return mismatches == 0 ? 0 : 1;
}
