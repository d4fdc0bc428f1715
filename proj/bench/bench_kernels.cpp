// Serial reference vs OpenMP kernels: wall time per call and speedup.
#include "bdsdp/kernels.h"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

using namespace bdsdp;

namespace {

double time_call(const std::function<void()> &f, int reps) {
  f(); // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r)
    f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
             .count() /
         reps;
}

Matrix gaussian(Index r, Index c, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  Matrix M(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i)
      M(i, j) = nd(rng);
  return M;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Kernel benchmark: serial reference vs OpenMP"};
  long long m = 200, d = 3, p = 8;
  int reps = 20, threads = 0;
  app.add_option("--m", m, "Number of blocks");
  app.add_option("--d", d, "Block size");
  app.add_option("--p", p, "Rank");
  app.add_option("--reps", reps, "Repetitions per kernel");
  app.add_option("--threads", threads, "OpenMP threads (default: runtime)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0)
    kernels::set_threads(threads);

  const Index n = m * d;
  std::mt19937_64 rng(7);
  Matrix C = gaussian(n, n, rng);
  C = (C + C.transpose()).eval();
  SparseMatrix Cs = C.sparseView(1.0, 1.5); // keeps |c| > 1.5
  const Matrix Y = gaussian(n, p, rng);
  const Matrix V = gaussian(n, p, rng);
  const Matrix D = gaussian(n, d, rng);
  const Matrix Yf = gaussian(m * d, std::min<Index>(p, 12), rng);

  std::printf("m=%lld d=%lld p=%lld threads=%d\n", m, d, p,
              omp_get_max_threads());
  std::printf("%-20s %12s %12s %8s\n", "kernel", "serial_s", "omp_s", "speedup");
  auto row = [&](const char *name, const std::function<void()> &s,
                 const std::function<void()> &o) {
    const double ts = time_call(s, reps), to = time_call(o, reps);
    std::printf("%-20s %12.3e %12.3e %8.2f\n", name, ts, to, ts / to);
  };
  Matrix sink;
  row("dense_apply", [&] { sink = kernels::serial::dense_apply(C, V); },
      [&] { sink = kernels::omp::dense_apply(C, V); });
  row("sparse_apply", [&] { sink = kernels::serial::sparse_apply(Cs, V); },
      [&] { sink = kernels::omp::sparse_apply(Cs, V); });
  row("outer", [&] { sink = kernels::serial::outer(Y, V); },
      [&] { sink = kernels::omp::outer(Y, V); });
  row("sym_block_products",
      [&] { sink = kernels::serial::sym_block_products(Y, V, d); },
      [&] { sink = kernels::omp::sym_block_products(Y, V, d); });
  row("block_diag_apply",
      [&] { sink = kernels::serial::block_diag_apply(D, V, d); },
      [&] { sink = kernels::omp::block_diag_apply(D, V, d); });
  row("polar_slices", [&] { sink = kernels::serial::polar_slices(Y, d, 0).Q; },
      [&] { sink = kernels::omp::polar_slices(Y, d, 0).Q; });
  row("face_gram_matrix",
      [&] { sink = kernels::serial::face_gram_matrix(Yf, d); },
      [&] { sink = kernels::omp::face_gram_matrix(Yf, d); });
  return sink.size() > 0 ? 0 : 1;
}
