// Compiled with -mavx2 only. No FMA: results must match the scalar table bit for bit.
#include <immintrin.h>

#include "parisian/simd.hpp"

namespace parisian::simd {
namespace {

void affine(double* out, const double* x, double scale, const double* offset, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(s, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(offset + i), prod));
  }
  for (; i < n; ++i) out[i] = offset[i] + scale * x[i];
}

void scale(double* x, double sc, std::size_t n) {
  const __m256d s = _mm256_set1_pd(sc);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), s));
  for (; i < n; ++i) x[i] *= sc;
}

void scale_complex(double* z, const double* s, std::size_t n_complex) {
  std::size_t k = 0;
  for (; k + 4 <= n_complex; k += 4) {
    // s0 s1 s2 s3 -> (s0 s0 s1 s1), (s2 s2 s3 s3)
    __m256d sv = _mm256_loadu_pd(s + k);
    __m256d lo = _mm256_permute4x64_pd(sv, 0x50);
    __m256d hi = _mm256_permute4x64_pd(sv, 0xFA);
    double* p = z + 2 * k;
    _mm256_storeu_pd(p, _mm256_mul_pd(_mm256_loadu_pd(p), lo));
    _mm256_storeu_pd(p + 4, _mm256_mul_pd(_mm256_loadu_pd(p + 4), hi));
  }
  for (; k < n_complex; ++k) {
    z[2 * k] *= s[k];
    z[2 * k + 1] *= s[k];
  }
}

double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int j = 1; j < 4; ++j) m = lanes[j] > m ? lanes[j] : m;
  return m;
}

double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int j = 1; j < 4; ++j) m = lanes[j] < m ? lanes[j] : m;
  return m;
}

double max_value(const double* x, std::size_t n) {
  if (n < 8) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(_mm256_loadu_pd(x + i), acc);
  double m = hmax(acc);
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double min_value(const double* x, std::size_t n) {
  if (n < 8) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = x[i] < m ? x[i] : m;
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(_mm256_loadu_pd(x + i), acc);
  double m = hmin(acc);
  for (; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

void elementwise_min(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  // minpd(a, b) is (a < b) ? a : b, the scalar ternary.
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void elementwise_max(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

std::size_t first_negative(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_LT_OQ));
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i)
    if (x[i] < 0.0) return i;
  return n;
}

std::size_t first_nonnegative(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // NLT_UQ: not (x < 0), true for NaN as in the scalar version
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_NLT_UQ));
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i)
    if (!(x[i] < 0.0)) return i;
  return n;
}

struct HiLo {
  __m256i hi, lo;
};

// 32x32 -> 64 multiply of all eight lanes against a constant.
inline HiLo mulhilo(__m256i a, __m256i m) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  return {_mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA),
          _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA)};
}

void philox(const std::uint32_t* key, const std::uint32_t* words, std::uint32_t first_block,
            std::size_t nblocks, std::uint64_t* out) {
  const __m256i m0 = _mm256_set1_epi64x(0xD2511F53u);
  const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57u);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  std::size_t b = 0;
  for (; b + 8 <= nblocks; b += 8) {
    __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first_block + b)), lane);
    __m256i c1 = _mm256_set1_epi32(static_cast<int>(words[0]));
    __m256i c2 = _mm256_set1_epi32(static_cast<int>(words[1]));
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(words[2]));
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      const HiLo p0 = mulhilo(c0, m0);
      const HiLo p1 = mulhilo(c2, m1);
      c0 = _mm256_xor_si256(_mm256_xor_si256(p1.hi, c1), _mm256_set1_epi32(static_cast<int>(k0)));
      c1 = p1.lo;
      c2 = _mm256_xor_si256(_mm256_xor_si256(p0.hi, c3), _mm256_set1_epi32(static_cast<int>(k1)));
      c3 = p0.lo;
    }
    alignas(32) std::uint32_t w0[8], w1[8], w2[8], w3[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(w0), c0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w1), c1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w2), c2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w3), c3);
    for (int j = 0; j < 8; ++j) {
      out[2 * (b + j)] = (static_cast<std::uint64_t>(w1[j]) << 32) | w0[j];
      out[2 * (b + j) + 1] = (static_cast<std::uint64_t>(w3[j]) << 32) | w2[j];
    }
  }
  if (b < nblocks)
    scalar_kernels().philox(key, words, first_block + static_cast<std::uint32_t>(b), nblocks - b,
                            out + 2 * b);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2,     affine,          scale,
                                 scale_complex, max_value,       min_value,
                                 elementwise_min, elementwise_max, first_negative,
                                 first_nonnegative, philox};
  return table;
}

}  // namespace parisian::simd
