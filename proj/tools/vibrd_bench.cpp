// Compares the serial reference loops against the OpenMP batch kernels on the
// instance sweeps and on a multi-scenario batch.

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "vibrd/batch.hpp"

namespace {

template <typename F>
double time_seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  using namespace vibrd;
  std::printf("openmp compiled in: %s\n", parallel_enabled() ? "yes" : "no");

  {
    const int count = 400;
    std::vector<double> serial, par;
    double ts = time_seconds(
        [&] { serial = sweep_lp_vs_enumeration(count, 42, false); });
    double tp =
        time_seconds([&] { par = sweep_lp_vs_enumeration(count, 42, true); });
    bool same = serial == par;
    std::printf("lp-vs-enumeration sweep (%d instances): serial %.3fs, "
                "parallel %.3fs, speedup %.2fx, identical results: %s\n",
                count, ts, tp, ts / tp, same ? "yes" : "NO");
  }
  {
    const int count = 64;
    std::vector<double> serial, par;
    double ts =
        time_seconds([&] { serial = sweep_oracle_vs_brd(count, 7, false); });
    double tp =
        time_seconds([&] { par = sweep_oracle_vs_brd(count, 7, true); });
    bool same = serial == par;
    std::printf("oracle-vs-brd sweep (%d instances): serial %.3fs, "
                "parallel %.3fs, speedup %.2fx, identical results: %s\n",
                count, ts, tp, ts / tp, same ? "yes" : "NO");
  }
  {
    std::vector<Scenario> scns;
    for (const char* name : {"traffic", "traffic-constrained", "congestion",
                             "congestion-delta1"})
      scns.push_back(*find_builtin(name));
    auto dir_s = std::filesystem::temp_directory_path() / "vibrd_bench_serial";
    auto dir_p = std::filesystem::temp_directory_path() / "vibrd_bench_par";
    RunOptions opts;
    double ts = time_seconds([&] { run_batch(scns, dir_s, opts, false); });
    double tp = time_seconds([&] { run_batch(scns, dir_p, opts, true); });
    std::printf("scenario batch (%zu runs): serial %.3fs, parallel %.3fs, "
                "speedup %.2fx\n",
                scns.size(), ts, tp, ts / tp);
    std::filesystem::remove_all(dir_s);
    std::filesystem::remove_all(dir_p);
  }
  return 0;
}
