// Compares the serial reference kernels against the OpenMP ones on the
// shapes that dominate the solvers: block assembly, dense products, and a
// short Riccati integration segment.

#include <chrono>
#include <cstdio>
#include <random>

#include "phonomog/kernels.hpp"
#include "phonomog/mm.hpp"
#include "phonomog/pwe.hpp"

using namespace phonomog;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.4f ms %10.4f ms %8.2fx\n", name, 1e3 * serial_s, 1e3 * parallel_s,
              serial_s / parallel_s);
}

UnitCell cube_cell() {
  UnitCell cell;
  cell.matrix = Material::isotropic(7.537e9, 1.482e9, 1142.0);
  cell.inclusion = Material::isotropic(170e9, 80e9, 7700.0);
  cell.shape = Cube{0.5};
  return cell;
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s %9s  (threads: %d)\n", "kernel", "serial", "openmp", "speedup",
              kernels::max_threads());

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int side : {192, 384, 768}) {
    MatX a(side, side), b(side, side);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        a(i, j) = cx(u(rng), u(rng));
        b(i, j) = cx(u(rng), u(rng));
      }
    char name[64];
    std::snprintf(name, sizeof(name), "multiply %dx%d", side, side);
    const int reps = side >= 768 ? 2 : 6;
    const double ts = time_of([&] { kernels::multiply(a, b, Exec::serial); }, reps);
    const double tp = time_of([&] { kernels::multiply(a, b, Exec::parallel); }, reps);
    report(name, ts, tp);
  }

  const CellField field = CellField::from_cell(cube_cell());
  for (int n : {2, 3}) {
    MmSystem sys(field, 1, n);
    char name[64];
    std::snprintf(name, sizeof(name), "mm assemble N=%d", n);
    const double ts = time_of([&] { sys.assemble(0.41, Exec::serial); }, 4);
    const double tp = time_of([&] { sys.assemble(0.41, Exec::parallel); }, 4);
    report(name, ts, tp);
  }

  for (int n : {1, 2}) {
    MmSystem sys(field, 1, n);
    char name[64];
    std::snprintf(name, sizeof(name), "riccati 256 steps N=%d", n);
    const double ts = time_of([&] { integrate_resolvent(sys, cx(0, 2), 256, Exec::serial); }, 2);
    const double tp = time_of([&] { integrate_resolvent(sys, cx(0, 2), 256, Exec::parallel); }, 2);
    report(name, ts, tp);
  }

  for (int n : {2, 3}) {
    char name[64];
    std::snprintf(name, sizeof(name), "pwe assemble N=%d", n);
    PweOptions po;
    po.exec = Exec::serial;
    const double ts = time_of([&] { PweSystem::assemble(field, n, po); }, 2);
    po.exec = Exec::parallel;
    const double tp = time_of([&] { PweSystem::assemble(field, n, po); }, 2);
    report(name, ts, tp);
  }
  return 0;
}
