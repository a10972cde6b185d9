#pragma once

// Data-parallel inner loops used by the path samplers and the Monte Carlo
// engines. Every kernel has a scalar reference implementation; vectorized
// variants are selected at runtime and must produce bit-identical results
// (no FMA contraction, same operation order per element).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace parisian::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // out[i] = offset[i] + scale * x[i]
  void (*affine)(double* out, const double* x, double scale, const double* offset,
                 std::size_t n);
  // x[i] *= scale
  void (*scale)(double* x, double scale, std::size_t n);
  // z[2k] *= s[k], z[2k+1] *= s[k]  (interleaved complex times real)
  void (*scale_complex)(double* z, const double* s, std::size_t n_complex);
  double (*max_value)(const double* x, std::size_t n);
  double (*min_value)(const double* x, std::size_t n);
  void (*elementwise_min)(double* out, const double* a, const double* b, std::size_t n);
  void (*elementwise_max)(double* out, const double* a, const double* b, std::size_t n);
  // index of the first x[i] < 0, or n
  std::size_t (*first_negative)(const double* x, std::size_t n);
  // index of the first x[i] >= 0, or n
  std::size_t (*first_nonnegative)(const double* x, std::size_t n);
  // Philox4x32-10 on counters {first_block + b, words[0], words[1], words[2]},
  // b = 0..nblocks-1; block b yields out[2b] = (w1 << 32) | w0 and
  // out[2b+1] = (w3 << 32) | w2.
  void (*philox)(const std::uint32_t* key, const std::uint32_t* words, std::uint32_t first_block,
                 std::size_t nblocks, std::uint64_t* out);
};

const KernelTable& scalar_kernels();
// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* kernels_for(Isa isa);

// Best supported table, overridable with PARISIAN_SIMD=scalar|avx2.
const KernelTable& active();

// Sliding-window extrema: out[i] = min/max of x[i .. i+window-1],
// for i in [0, x.size() - window]. out must hold x.size() - window + 1 values.
// The reference version uses a monotone deque; the blocked version uses the
// van Herk/Gil-Werman prefix/suffix scheme with the table's elementwise kernel.
void sliding_min_reference(std::span<const double> x, std::size_t window, std::span<double> out);
void sliding_max_reference(std::span<const double> x, std::size_t window, std::span<double> out);
void sliding_min(const KernelTable& k, std::span<const double> x, std::size_t window,
                 std::span<double> out);
void sliding_max(const KernelTable& k, std::span<const double> x, std::size_t window,
                 std::span<double> out);

}  // namespace parisian::simd
