#include "parisian/constants_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "parisian/errors.hpp"
#include "parisian/parallel.hpp"
#include "parisian/process_sim.hpp"
#include "parisian/rng.hpp"
#include "parisian/simd.hpp"
#include "parisian/stats.hpp"

namespace parisian {

namespace {

// sup over outer start k in [0, outer] of inf over j in [k, k + inner].
struct Functional {
  std::size_t outer;
  std::size_t inner;
};

// Functionals sharing one tilt index set {0, ..., last}.
struct Group {
  std::size_t last;
  std::vector<Functional> functionals;
};

class FieldEngine {
 public:
  FieldEngine(double alpha, double delta, std::vector<Group> groups, PickandsEstimator estimator)
      : alpha_(alpha), delta_(delta), groups_(std::move(groups)), estimator_(estimator) {
    for (const auto& g : groups_) {
      points_ = std::max(points_, g.last + 1);
      for (const auto& f : g.functionals)
        detail::require(f.outer + f.inner <= g.last, "functional exceeds its index set");
    }
    if (alpha_ < 2.0 && points_ > 1)
      path_ = std::make_unique<PathSampler>(CovarianceModel::fbm(alpha_ / 2.0), points_ - 1, delta_);
    pow_table_.resize(points_);
    for (std::size_t i = 0; i < points_; ++i)
      pow_table_[i] = std::pow(static_cast<double>(i) * delta_, alpha_);
  }

  std::size_t functional_count() const {
    std::size_t c = 0;
    for (const auto& g : groups_) c += g.functionals.size();
    return c;
  }

  struct Scratch {
    PathSampler::Workspace ws;
    std::vector<double> x, w, slide;
  };

  // Writes one value per functional (group-major order). Returns false when a
  // value overflowed (direct estimator only).
  bool replicate(std::uint64_t seed, std::size_t index, Scratch& s, std::vector<double>& out) const {
    const auto& k = simd::active();
    const SeedSpec spec{seed, index};
    s.x.resize(points_);
    if (path_) {
      path_->sample(spec, s.x, s.ws);
    } else if (alpha_ == 2.0) {
      PhiloxEngine eng(spec, Stream::Path);
      const double normal = standard_normal(eng);
      for (std::size_t i = 0; i < points_; ++i) s.x[i] = static_cast<double>(i) * delta_ * normal;
    } else {
      s.x[0] = 0.0;
    }
    PhiloxEngine tilt(spec, Stream::Tilt);
    out.clear();
    bool ok = true;
    for (const auto& g : groups_) {
      const std::size_t m = g.last + 1;
      s.w.resize(m);
      double log_norm = 0.0;
      if (estimator_ == PickandsEstimator::Tilted) {
        const auto J = static_cast<std::size_t>(uniform01(tilt) * static_cast<double>(m));
        const std::size_t j = std::min(J, g.last);
        const double xj = s.x[j];
        for (std::size_t i = 0; i < m; ++i) {
          const std::size_t lag = i > j ? i - j : j - i;
          s.w[i] = std::numbers::sqrt2 * (s.x[i] - xj) - pow_table_[lag];
        }
        const double top = k.max_value(s.w.data(), m);  // == 0 at i = J or above
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += std::exp(s.w[i] - top);
        log_norm = top + std::log(sum);
      } else {
        for (std::size_t i = 0; i < m; ++i)
          s.w[i] = std::numbers::sqrt2 * s.x[i] - pow_table_[i];
      }
      for (const auto& f : g.functionals) {
        double sup_inf;
        if (f.inner == 0) {
          sup_inf = k.max_value(s.w.data(), f.outer + 1);
        } else {
          const std::size_t span_len = f.outer + f.inner + 1;
          s.slide.resize(f.outer + 1);
          simd::sliding_min(k, std::span<const double>(s.w.data(), span_len), f.inner + 1,
                            s.slide);
          sup_inf = k.max_value(s.slide.data(), f.outer + 1);
        }
        double v;
        if (estimator_ == PickandsEstimator::Tilted) {
          v = static_cast<double>(m) * std::exp(sup_inf - log_norm);
        } else {
          v = std::exp(sup_inf);
          if (!std::isfinite(v)) ok = false;
        }
        out.push_back(v);
      }
    }
    return ok;
  }

 private:
  double alpha_;
  double delta_;
  std::vector<Group> groups_;
  PickandsEstimator estimator_;
  std::size_t points_ = 1;
  std::unique_ptr<PathSampler> path_;
  std::vector<double> pow_table_;
};

// Accumulates per-functional statistics, plus linear combinations of them,
// with a worker-count independent reduction order.
struct Accumulated {
  std::vector<stats::RunningStats> values;
  std::vector<stats::RunningStats> combos;
  std::size_t flagged = 0;
};

struct Combo {
  std::size_t a;
  double wa;
  std::size_t b;
  double wb;
};

Accumulated run_engine(const FieldEngine& engine, std::size_t n, std::uint64_t seed,
                       unsigned jobs, const std::vector<Combo>& combos) {
  const std::size_t nf = engine.functional_count();
  const std::size_t chunks = chunk_count(n);
  std::vector<Accumulated> partial(chunks);
  for_each_chunk(0, n, jobs, [&](ChunkRange r) {
    Accumulated acc;
    acc.values.resize(nf);
    acc.combos.resize(combos.size());
    FieldEngine::Scratch scratch;
    std::vector<double> vals;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      if (!engine.replicate(seed, i, scratch, vals)) {
        ++acc.flagged;
        continue;
      }
      for (std::size_t f = 0; f < nf; ++f) acc.values[f].push(vals[f]);
      for (std::size_t c = 0; c < combos.size(); ++c)
        acc.combos[c].push(combos[c].wa * vals[combos[c].a] + combos[c].wb * vals[combos[c].b]);
    }
    partial[r.index] = std::move(acc);
  });
  Accumulated total;
  total.values.resize(nf);
  total.combos.resize(combos.size());
  for (const auto& p : partial) {
    for (std::size_t f = 0; f < nf; ++f) total.values[f].merge(p.values[f]);
    for (std::size_t c = 0; c < combos.size(); ++c) total.combos[c].merge(p.combos[c]);
    total.flagged += p.flagged;
  }
  return total;
}

void check_common(double alpha, double delta, std::size_t n) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0,2]");
  detail::require(std::isfinite(delta) && delta > 0.0, "grid step delta must be > 0");
  detail::require(n >= 2, "need at least 2 replications");
}

}  // namespace

std::vector<ConstantEstimate> estimate_generalized_pickands_sweep(
    double alpha, const std::vector<double>& Ts, double S, double delta, std::size_t n,
    std::uint64_t seed, const PickandsOptions& opts) {
  check_common(alpha, delta, n);
  detail::require(std::isfinite(S) && S > 0.0, "horizon S must be > 0");
  detail::require(!Ts.empty(), "need at least one window T");
  for (double T : Ts) detail::require(std::isfinite(T) && T >= 0.0, "window T must be >= 0");

  const std::size_t ns = steps_for(S, delta);
  const std::size_t nh = std::max<std::size_t>(1, steps_for(0.5 * S, delta));
  detail::require(ns >= 2, "horizon S must span at least two grid steps");
  const double s_full = static_cast<double>(ns) * delta;
  const double s_half = static_cast<double>(nh) * delta;
  std::vector<std::size_t> inner;
  for (double T : Ts) inner.push_back(steps_for(T, delta));
  const std::size_t inner_max = *std::max_element(inner.begin(), inner.end());

  Group full{ns + inner_max, {}}, half{nh + inner_max, {}};
  for (std::size_t w : inner) {
    full.functionals.push_back({ns, w});
    half.functionals.push_back({nh, w});
  }
  const std::size_t m = Ts.size();
  FieldEngine engine(alpha, delta, {full, half}, opts.estimator);
  std::vector<Combo> combos;
  for (std::size_t i = 0; i < m; ++i) combos.push_back({i, 2.0 / s_full, m + i, -1.0 / s_half});
  const Accumulated acc = run_engine(engine, n, seed, opts.jobs, combos);

  std::vector<ConstantEstimate> out;
  for (std::size_t i = 0; i < m; ++i) {
    ConstantEstimate e;
    e.alpha = alpha;
    e.T = Ts[i];
    e.S = S;
    e.delta = delta;
    e.n = acc.values[i].count();
    e.seed = seed;
    e.estimator = opts.estimator;
    e.flagged = acc.flagged;
    e.at_S = acc.values[i].mean() / s_full;
    e.at_S_stderr = acc.values[i].stderr_of_mean() / s_full;
    e.at_half_S = acc.values[m + i].mean() / s_half;
    e.at_half_S_stderr = acc.values[m + i].stderr_of_mean() / s_half;
    e.extrapolated = acc.combos[i].mean();
    e.extrapolated_stderr = acc.combos[i].stderr_of_mean();
    e.converged = std::abs(e.at_S - e.at_half_S) <=
                  3.0 * stats::joint_stderr(e.at_S_stderr, e.at_half_S_stderr);
    e.value = e.extrapolated;
    e.stderr = e.extrapolated_stderr;
    out.push_back(e);
  }
  return out;
}

ConstantEstimate estimate_generalized_pickands(double alpha, double T, double S, double delta,
                                               std::size_t n, std::uint64_t seed,
                                               const PickandsOptions& opts) {
  return estimate_generalized_pickands_sweep(alpha, {T}, S, delta, n, seed, opts).front();
}

ConstantEstimate estimate_pickands(double alpha, double S, double delta, std::size_t n,
                                   std::uint64_t seed, const PickandsOptions& opts) {
  return estimate_generalized_pickands(alpha, 0.0, S, delta, n, seed, opts);
}

std::vector<ConstantEstimate> estimate_pickands_2p_sweep(double alpha,
                                                         const std::vector<LambdaPair>& pairs,
                                                         double delta, std::size_t n,
                                                         std::uint64_t seed,
                                                         const PickandsOptions& opts) {
  check_common(alpha, delta, n);
  detail::require(!pairs.empty(), "need at least one (lambda1, lambda2) pair");
  std::size_t last = 0;
  Group g{0, {}};
  for (const auto& p : pairs) {
    detail::require(p.lambda1 >= 0.0 && p.lambda2 >= 0.0, "lambda1, lambda2 must be >= 0");
    const Functional f{steps_for(p.lambda1, delta), steps_for(p.lambda2, delta)};
    last = std::max(last, f.outer + f.inner);
    g.functionals.push_back(f);
  }
  g.last = last;
  FieldEngine engine(alpha, delta, {g}, opts.estimator);
  const Accumulated acc = run_engine(engine, n, seed, opts.jobs, {});
  std::vector<ConstantEstimate> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ConstantEstimate e;
    e.alpha = alpha;
    e.lambda1 = pairs[i].lambda1;
    e.lambda2 = pairs[i].lambda2;
    e.delta = delta;
    e.n = acc.values[i].count();
    e.seed = seed;
    e.estimator = opts.estimator;
    e.flagged = acc.flagged;
    e.value = e.at_S = e.extrapolated = acc.values[i].mean();
    e.stderr = e.at_S_stderr = e.extrapolated_stderr = acc.values[i].stderr_of_mean();
    e.converged = true;
    out.push_back(e);
  }
  return out;
}

ConstantEstimate estimate_pickands_2p(double alpha, double lambda1, double lambda2, double delta,
                                      std::size_t n, std::uint64_t seed,
                                      const PickandsOptions& opts) {
  return estimate_pickands_2p_sweep(alpha, {{lambda1, lambda2}}, delta, n, seed, opts).front();
}

bool refinement_stable(const ConstantEstimate& coarse, const ConstantEstimate& fine) {
  return std::abs(coarse.value - fine.value) <= 2.0 * stats::joint_stderr(coarse.stderr, fine.stderr);
}

}  // namespace parisian
