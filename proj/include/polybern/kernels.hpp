#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; the two must
// produce bitwise-identical results (each output slot is computed by exactly
// one iteration with the same summation order).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace polybern::kernels {

enum class Exec { serial, parallel };

/// Dense row-major array on a box of Z^m starting at the origin.
struct LatticeGrid {
  std::vector<std::int64_t> shape;
  std::vector<double> values;

  std::size_t cells() const noexcept { return values.size(); }
};

/// Non-negative integer shift of one support point, with its weight.
struct LatticeShift {
  std::vector<std::int64_t> offset;
  double weight = 0.0;
};

namespace serial {

/// out[k] = sum_s w_s * in[k - offset_s]  (gather form of one convolution step)
LatticeGrid lattice_convolve(const LatticeGrid& in, std::span<const LatticeShift> shifts);

/// Full discrete convolution, length a.size() + b.size() - 1.
std::vector<double> convolve_1d(std::span<const double> a, std::span<const double> b);

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace parallel {

LatticeGrid lattice_convolve(const LatticeGrid& in, std::span<const LatticeShift> shifts);
std::vector<double> convolve_1d(std::span<const double> a, std::span<const double> b);
/// Runs body(i) for i in [0, n) across threads; the first exception thrown by
/// any iteration is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

int max_threads() noexcept;
void set_threads(int n) noexcept;

}  // namespace parallel

LatticeGrid lattice_convolve(Exec exec, const LatticeGrid& in, std::span<const LatticeShift> shifts);
std::vector<double> convolve_1d(Exec exec, std::span<const double> a, std::span<const double> b);
void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace polybern::kernels
