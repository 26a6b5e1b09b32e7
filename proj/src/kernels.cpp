#include "polybern/kernels.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include <omp.h>

namespace polybern::kernels {

namespace {

LatticeGrid output_grid(const LatticeGrid& in, std::span<const LatticeShift> shifts) {
  LatticeGrid out;
  out.shape = in.shape;
  for (const auto& s : shifts)
    for (std::size_t d = 0; d < out.shape.size(); ++d)
      out.shape[d] = std::max(out.shape[d], in.shape[d] + s.offset[d]);
  std::size_t cells = 1;
  for (auto e : out.shape) cells *= static_cast<std::size_t>(e);
  out.values.assign(cells, 0.0);
  return out;
}

// Value of output cell `k`; shared by both back ends so results match bitwise.
inline double gather_cell(const LatticeGrid& in, const LatticeGrid& out,
                          std::span<const LatticeShift> shifts, std::size_t k) {
  const std::size_t m = out.shape.size();
  std::int64_t coord[8];
  std::size_t rem = k;
  for (std::size_t d = m; d-- > 0;) {
    coord[d] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(out.shape[d]));
    rem /= static_cast<std::size_t>(out.shape[d]);
  }
  double acc = 0.0;
  for (const auto& s : shifts) {
    std::size_t src = 0;
    bool inside = true;
    for (std::size_t d = 0; d < m; ++d) {
      const std::int64_t c = coord[d] - s.offset[d];
      if (c < 0 || c >= in.shape[d]) {
        inside = false;
        break;
      }
      src = src * static_cast<std::size_t>(in.shape[d]) + static_cast<std::size_t>(c);
    }
    if (inside) acc += s.weight * in.values[src];
  }
  return acc;
}

// c[k] = sum_j a[j] * b[k-j] with b supplied reversed so both reads ascend.
inline double conv_cell(std::span<const double> a, const std::vector<double>& b_rev,
                        std::size_t k) {
  const std::size_t na = a.size();
  const std::size_t nb = b_rev.size();
  const std::size_t lo = k + 1 > nb ? k + 1 - nb : 0;
  const std::size_t hi = std::min(k, na - 1);
  const double* pa = a.data() + lo;
  const double* pb = b_rev.data() + (nb - 1 + lo - k);
  const std::size_t len = hi - lo + 1;
  double acc = 0.0;
#pragma omp simd reduction(+ : acc)
  for (std::size_t j = 0; j < len; ++j) acc += pa[j] * pb[j];
  return acc;
}

std::vector<double> reversed(std::span<const double> b) { return {b.rbegin(), b.rend()}; }

}  // namespace

namespace serial {

LatticeGrid lattice_convolve(const LatticeGrid& in, std::span<const LatticeShift> shifts) {
  LatticeGrid out = output_grid(in, shifts);
  for (std::size_t k = 0; k < out.cells(); ++k) out.values[k] = gather_cell(in, out, shifts, k);
  return out;
}

std::vector<double> convolve_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const auto b_rev = reversed(b);
  std::vector<double> c(a.size() + b.size() - 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = conv_cell(a, b_rev, k);
  return c;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace serial

namespace parallel {

LatticeGrid lattice_convolve(const LatticeGrid& in, std::span<const LatticeShift> shifts) {
  LatticeGrid out = output_grid(in, shifts);
  const auto cells = static_cast<std::int64_t>(out.cells());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < cells; ++k)
    out.values[static_cast<std::size_t>(k)] = gather_cell(in, out, shifts, static_cast<std::size_t>(k));
  return out;
}

std::vector<double> convolve_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const auto b_rev = reversed(b);
  std::vector<double> c(a.size() + b.size() - 1);
  const auto n = static_cast<std::int64_t>(c.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k)
    c[static_cast<std::size_t>(k)] = conv_cell(a, b_rev, static_cast<std::size_t>(k));
  return c;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

int max_threads() noexcept { return omp_get_max_threads(); }
void set_threads(int n) noexcept {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace parallel

LatticeGrid lattice_convolve(Exec exec, const LatticeGrid& in, std::span<const LatticeShift> shifts) {
  return exec == Exec::parallel ? parallel::lattice_convolve(in, shifts)
                                : serial::lattice_convolve(in, shifts);
}

std::vector<double> convolve_1d(Exec exec, std::span<const double> a, std::span<const double> b) {
  return exec == Exec::parallel ? parallel::convolve_1d(a, b) : serial::convolve_1d(a, b);
}

void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body) {
  if (exec == Exec::parallel)
    parallel::for_each_index(n, body);
  else
    serial::for_each_index(n, body);
}

}  // namespace polybern::kernels
