#include "parisian/rng.hpp"
#include "parisian/simd.hpp"

namespace parisian::simd {
namespace {

void affine(double* out, const double* x, double scale, const double* offset, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = offset[i] + scale * x[i];
}

void scale(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void scale_complex(double* z, const double* s, std::size_t n_complex) {
  for (std::size_t k = 0; k < n_complex; ++k) {
    z[2 * k] *= s[k];
    z[2 * k + 1] *= s[k];
  }
}

double max_value(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double min_value(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

void elementwise_min(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void elementwise_max(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

std::size_t first_negative(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < 0.0) return i;
  return n;
}

std::size_t first_nonnegative(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(x[i] < 0.0)) return i;
  return n;
}

void philox(const std::uint32_t* key, const std::uint32_t* words, std::uint32_t first_block,
            std::size_t nblocks, std::uint64_t* out) {
  for (std::size_t b = 0; b < nblocks; ++b) {
    const PhiloxCounter r = philox4x32_10(
        {first_block + static_cast<std::uint32_t>(b), words[0], words[1], words[2]},
        {key[0], key[1]});
    out[2 * b] = (static_cast<std::uint64_t>(r[1]) << 32) | r[0];
    out[2 * b + 1] = (static_cast<std::uint64_t>(r[3]) << 32) | r[2];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar,   affine,          scale,
                                 scale_complex, max_value,       min_value,
                                 elementwise_min, elementwise_max, first_negative,
                                 first_nonnegative, philox};
  return table;
}

}  // namespace parisian::simd
