// OpenMP kernels against their serial references: timing and agreement.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "lrq/bounds.hpp"
#include "lrq/enumeration.hpp"
#include "lrq/spin_model.hpp"

using namespace lrq;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double t_par, double t_ser, double diff) {
  std::printf("%-28s omp %9.4f s  serial %9.4f s  speedup %6.2f  |diff| %.3g\n", name, t_par, t_ser,
              t_ser / t_par, diff);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    const Region w = box_region(centered_box(2, 48));
    const ModelInstance m(CouplingKernel(1.0, 3.0, w), InteractionSpec::potts(3), 1.0);
    std::mt19937_64 gen(3);
    std::vector<Color> spins(w.size());
    for (auto& c : spins) c = static_cast<Color>(gen() % 3);
    const SpinConfig s(w, 3, 0, spins);
    double a = 0, b = 0;
    const double tp = seconds([&] { for (int i = 0; i < 5; ++i) a = hamiltonian_phi(s, m); });
    const double ts = seconds([&] { for (int i = 0; i < 5; ++i) b = hamiltonian_phi_serial(s, m); });
    row("hamiltonian 48x48 (x5)", tp, ts, std::fabs(a - b));
  }
  {
    const Region w = box_region(centered_box(std::vector<int>{3, 4}));
    const ModelInstance m(CouplingKernel(1.0, 3.0, w), InteractionSpec::potts(3), 0.7);
    ExactResult a, b;
    const double tp = seconds([&] { a = exact_partition(m); });
    const double ts = seconds([&] { b = exact_partition_serial(m); });
    row("enumeration 3x4 q=3", tp, ts, std::fabs(a.log_Z - b.log_Z));
  }
  {
    ExhaustiveOptions opt;
    opt.sides = {3, 3};
    opt.q = 3;
    opt.alphas = {2.5, 3.0, 4.0};
    std::vector<ExhaustiveSummary> a, b;
    const double tp = seconds([&] { a = verify_exhaustive(opt); });
    std::uint64_t n = 0;
    opt.sink = [&](const ExhaustiveRecord&) { ++n; };
    const double ts = seconds([&] { b = verify_exhaustive(opt); });
    double diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::fabs(a[i].min_margin - b[i].min_margin));
    row("exhaustive bound 3x3 q=3", tp, ts, diff);
  }
  return 0;
}
