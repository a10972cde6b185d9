#include <cassert>
#include <deque>
#include <vector>

#include "parisian/simd.hpp"

namespace parisian::simd {
namespace {

template <class Better>
void deque_scan(std::span<const double> x, std::size_t window, std::span<double> out, Better better) {
  assert(window >= 1 && window <= x.size());
  assert(out.size() >= x.size() - window + 1);
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (!q.empty() && !better(x[q.back()], x[i])) q.pop_back();
    q.push_back(i);
    if (q.front() + window <= i) q.pop_front();
    if (i + 1 >= window) out[i + 1 - window] = x[q.front()];
  }
}

// van Herk/Gil-Werman: blocks of length `window`; g = running extreme from
// each block start, h = running extreme to each block end. The window
// starting at i spans the tail of one block and the head of the next, so
// out[i] = combine(h[i], g[i + window - 1]).
template <class Better>
void blocked_scan(const KernelTable& k, std::span<const double> x, std::size_t window,
                  std::span<double> out, bool is_min, Better better) {
  const std::size_t n = x.size();
  assert(window >= 1 && window <= n);
  const std::size_t m = n - window + 1;
  if (window == 1) {
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m), out.begin());
    return;
  }
  std::vector<double> g(n), h(n);
  for (std::size_t b = 0; b < n; b += window) {
    const std::size_t e = std::min(n, b + window);
    g[b] = x[b];
    for (std::size_t i = b + 1; i < e; ++i) g[i] = better(x[i], g[i - 1]) ? x[i] : g[i - 1];
    h[e - 1] = x[e - 1];
    for (std::size_t i = e - 1; i-- > b;) h[i] = better(x[i], h[i + 1]) ? x[i] : h[i + 1];
  }
  if (is_min)
    k.elementwise_min(out.data(), h.data(), g.data() + window - 1, m);
  else
    k.elementwise_max(out.data(), h.data(), g.data() + window - 1, m);
}

}  // namespace

void sliding_min_reference(std::span<const double> x, std::size_t window, std::span<double> out) {
  deque_scan(x, window, out, [](double a, double b) { return a < b; });
}

void sliding_max_reference(std::span<const double> x, std::size_t window, std::span<double> out) {
  deque_scan(x, window, out, [](double a, double b) { return a > b; });
}

void sliding_min(const KernelTable& k, std::span<const double> x, std::size_t window,
                 std::span<double> out) {
  blocked_scan(k, x, window, out, true, [](double a, double b) { return a < b; });
}

void sliding_max(const KernelTable& k, std::span<const double> x, std::size_t window,
                 std::span<double> out) {
  blocked_scan(k, x, window, out, false, [](double a, double b) { return a > b; });
}

}  // namespace parisian::simd
