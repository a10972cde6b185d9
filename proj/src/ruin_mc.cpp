#include "parisian/ruin_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parisian/errors.hpp"
#include "parisian/parallel.hpp"
#include "parisian/stats.hpp"

namespace parisian {

WindowSpec WindowSpec::deterministic(double duration) {
  detail::require(std::isfinite(duration) && duration >= 0.0, "window duration must be >= 0");
  return WindowSpec{DeterministicWindow{duration}};
}

WindowSpec WindowSpec::exponential(double rate) {
  detail::require(std::isfinite(rate) && rate > 0.0, "exponential window rate must be > 0");
  return WindowSpec{ExponentialWindow{rate}};
}

WindowSpec WindowSpec::custom(std::function<double(PhiloxEngine&)> sampler) {
  detail::require(static_cast<bool>(sampler), "custom window sampler is empty");
  return WindowSpec{CustomWindow{std::move(sampler)}};
}

void WindowSpec::validate(double step) const {
  if (const auto* d = std::get_if<DeterministicWindow>(&kind)) {
    if (d->duration > 0.0 && step > d->duration * (1.0 + 1e-9))
      throw ResolutionError("grid step exceeds the Parisian window; refine the grid");
  }
}

std::size_t WindowSpec::steps(SeedSpec seed, double step) const {
  return std::visit(
      [&](const auto& w) -> std::size_t {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, DeterministicWindow>) {
          return steps_for(w.duration, step);
        } else {
          PhiloxEngine eng(seed, Stream::Window);
          double d;
          if constexpr (std::is_same_v<W, ExponentialWindow>)
            d = parisian::exponential(eng, w.rate);
          else
            d = w.sampler(eng);
          if (!(d > 0.0) || !std::isfinite(d))
            throw ParameterError("random window sampler returned a non-positive duration");
          return std::max<std::size_t>(1, steps_for(d, step));
        }
      },
      kind);
}

double default_horizon(const RiskParams& params) {
  params.validate();
  const double h = params.hurst();
  const double t0 = std::pow(h / (params.c * (params.beta - h)), 1.0 / params.beta);
  const double u = std::max(params.u, 1.0);
  return 5.0 * t0 * std::pow(u, 1.0 / params.beta);
}

std::optional<std::size_t> parisian_index_reference(std::span<const double> surplus,
                                                    std::size_t window) {
  // running sojourn clock: steps since the first negative value of the
  // current sub-zero run; resets whenever the surplus is nonnegative
  std::optional<std::size_t> run_start;
  for (std::size_t k = 0; k < surplus.size(); ++k) {
    if (surplus[k] < 0.0) {
      if (!run_start) run_start = k;
      if (k - *run_start >= window) return k;
    } else {
      run_start.reset();
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> parisian_index(const simd::KernelTable& k,
                                          std::span<const double> surplus, std::size_t window) {
  const std::size_t n = surplus.size();
  const double* r = surplus.data();
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t start = pos + k.first_negative(r + pos, n - pos);
    if (start >= n) return std::nullopt;
    if (window == 0) return start;
    const std::size_t stop = start + k.first_nonnegative(r + start, n - start);
    if (stop - start > window) return start + window;
    pos = stop;
  }
  return std::nullopt;
}

RuinSimulator::RuinSimulator(const RuinConfig& config)
    : config_(config),
      sampler_(config.params.model,
               steps_for(config.horizon > 0.0 ? config.horizon : default_horizon(config.params),
                         config.step),
               config.step) {
  config_.params.validate();
  detail::require(std::isfinite(config_.step) && config_.step > 0.0, "grid step must be > 0");
  if (config_.horizon <= 0.0) config_.horizon = default_horizon(config_.params);
  config_.window.validate(config_.step);
  const std::size_t pts = sampler_.points();
  offset_.resize(pts);
  for (std::size_t i = 0; i < pts; ++i)
    offset_[i] = config_.params.u +
                 config_.params.c * std::pow(static_cast<double>(i) * config_.step, config_.params.beta);
}

RuinSample RuinSimulator::run(std::size_t replication, Scratch& s) const {
  const auto& k = simd::active();
  const SeedSpec seed{config_.seed, replication};
  const std::size_t pts = points();
  s.path.resize(pts);
  s.surplus.resize(pts);
  sampler_.sample(seed, s.path, s.ws);
  k.affine(s.surplus.data(), s.path.data(), -1.0, offset_.data(), pts);

  RuinSample out;
  const double dt = config_.step;
  const std::size_t first = k.first_negative(s.surplus.data(), pts);
  if (first < pts) out.tau = static_cast<double>(first) * dt;
  if (out.tau) {
    const std::size_t w = config_.window.steps(seed, dt);
    const auto rest = std::span<const double>(s.surplus).subspan(first);
    if (auto idx = parisian_index(k, rest, w)) {
      out.tau_star = static_cast<double>(first + *idx) * dt;
      out.ruined = true;
    }
  }
  if (s.surplus[pts - 1] < 0.0) {
    std::size_t i = pts - 1;
    while (i > 0 && s.surplus[i - 1] < 0.0) --i;
    out.kappa_clock = static_cast<double>(pts - 1 - i) * dt;
  }
  return out;
}

RuinSample simulate_ruin(const RiskParams& params, const WindowSpec& window, double horizon,
                         double step, SeedSpec seed) {
  detail::require(horizon > 0.0, "horizon must be > 0");
  RuinConfig cfg;
  cfg.params = params;
  cfg.window = window;
  cfg.horizon = horizon;
  cfg.step = step;
  cfg.seed = seed.master_seed;
  RuinSimulator sim(cfg);
  RuinSimulator::Scratch scratch;
  return sim.run(seed.replication_index, scratch);
}

RuinEstimates estimate_ruin_probs(const RuinConfig& config) {
  detail::require(config.n >= 100, "need at least 100 replications");
  RuinSimulator sim(config);
  const std::size_t chunks = chunk_count(config.n);
  std::vector<std::size_t> classical(chunks, 0), parisian(chunks, 0);
  for_each_chunk(0, config.n, config.jobs, [&](ChunkRange r) {
    RuinSimulator::Scratch scratch;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const RuinSample s = sim.run(i, scratch);
      classical[r.index] += s.tau.has_value();
      parisian[r.index] += s.tau_star.has_value();
    }
  });
  RuinEstimates out;
  auto fill = [&](MCEstimate& e, const std::vector<std::size_t>& hits, RuinKind kind) {
    std::size_t total = 0;
    for (std::size_t h : hits) total += h;
    e.hits = total;
    e.n = config.n;
    e.p_hat = static_cast<double>(total) / static_cast<double>(config.n);
    e.stderr = stats::binomial_stderr(e.p_hat, config.n);
    e.kind = kind;
    e.config = sim.config();
  };
  fill(out.classical, classical, RuinKind::Classical);
  fill(out.parisian, parisian, RuinKind::Parisian);
  return out;
}

MCEstimate estimate_ruin_prob(const RuinConfig& config, RuinKind which) {
  RuinEstimates e = estimate_ruin_probs(config);
  return which == RuinKind::Classical ? e.classical : e.parisian;
}

ConditionalRuinTimes sample_conditional_ruin_times(const RuinConfig& config,
                                                   std::size_t n_ruined_target,
                                                   std::size_t max_replications) {
  detail::require(n_ruined_target >= 50, "n_ruined_target must be >= 50");
  detail::require(max_replications >= n_ruined_target, "replication cap below target");
  RuinSimulator sim(config);
  ConditionalRuinTimes out;
  // Batches of chunks are simulated in parallel; samples are then taken in
  // replication order so the result does not depend on the worker count.
  const std::size_t batch = kReplicationChunk * std::max(1u, config.jobs) * 8;
  std::size_t next = 0;
  while (out.samples.size() < n_ruined_target && next < max_replications) {
    const std::size_t count = std::min(batch, max_replications - next);
    std::vector<std::vector<std::pair<std::size_t, RuinSample>>> found(chunk_count(count));
    for_each_chunk(next, count, config.jobs, [&](ChunkRange r) {
      RuinSimulator::Scratch scratch;
      for (std::size_t i = r.begin; i < r.end; ++i) {
        RuinSample s = sim.run(i, scratch);
        if (s.tau_star) found[r.index].emplace_back(i, s);
      }
    });
    for (const auto& chunk : found) {
      for (const auto& [idx, s] : chunk) {
        if (out.samples.size() == n_ruined_target) break;
        out.samples.push_back(s);
        out.replications.push_back(idx);
        out.attempted = idx + 1;
      }
    }
    next += count;
    if (out.samples.size() < n_ruined_target) out.attempted = next;
  }
  out.complete = out.samples.size() == n_ruined_target;
  return out;
}

double SweepResult::classical_p(std::size_t iu) const {
  return static_cast<double>(classical_hits.at(iu)) / static_cast<double>(n);
}

double SweepResult::parisian_p(std::size_t iw, std::size_t iu) const {
  return static_cast<double>(parisian_hits.at(iw).at(iu)) / static_cast<double>(n);
}

SweepResult run_ruin_sweep(const SweepConfig& config) {
  detail::require(!config.reserves.empty(), "sweep needs at least one reserve");
  detail::require(config.n >= 1, "sweep needs at least one replication");
  for (double u : config.reserves) {
    RiskParams p{u, config.c, config.beta, config.model};
    p.validate();
  }
  for (const auto& w : config.windows) w.validate(config.step);
  const std::size_t steps = steps_for(config.horizon, config.step);
  PathSampler sampler(config.model, steps, config.step);
  const std::size_t pts = sampler.points();
  std::vector<double> premium(pts);
  for (std::size_t i = 0; i < pts; ++i)
    premium[i] = -config.c * std::pow(static_cast<double>(i) * config.step, config.beta);

  const std::size_t nu = config.reserves.size(), nw = config.windows.size();
  struct Partial {
    std::vector<std::size_t> classical;
    std::vector<std::vector<std::size_t>> parisian;
    std::size_t violations = 0;
  };
  std::vector<Partial> partial(chunk_count(config.n));
  for_each_chunk(0, config.n, config.jobs, [&](ChunkRange r) {
    const auto& k = simd::active();
    Partial acc;
    acc.classical.assign(nu, 0);
    acc.parisian.assign(nw, std::vector<std::size_t>(nu, 0));
    PathSampler::Workspace ws;
    std::vector<double> x(pts), d(pts), slide;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const SeedSpec seed{config.seed, i};
      sampler.sample(seed, x, ws);
      // D = X - c t^beta; ruin at level u iff D exceeds u
      k.affine(d.data(), x.data(), 1.0, premium.data(), pts);
      const double sup = k.max_value(d.data(), pts);
      for (std::size_t iu = 0; iu < nu; ++iu) acc.classical[iu] += sup > config.reserves[iu];
      for (std::size_t iw = 0; iw < nw; ++iw) {
        const std::size_t w = config.windows[iw].steps(seed, config.step);
        double sup_inf = -std::numeric_limits<double>::infinity();
        if (w == 0) {
          sup_inf = sup;
        } else if (w < pts) {
          slide.resize(pts - w);
          simd::sliding_min(k, d, w + 1, slide);
          sup_inf = k.max_value(slide.data(), slide.size());
        }
        for (std::size_t iu = 0; iu < nu; ++iu) {
          const bool p = sup_inf > config.reserves[iu];
          acc.parisian[iw][iu] += p;
          if (p && !(sup > config.reserves[iu])) ++acc.violations;
        }
      }
    }
    partial[r.index] = std::move(acc);
  });
  SweepResult out;
  out.reserves = config.reserves;
  out.n = config.n;
  out.classical_hits.assign(nu, 0);
  out.parisian_hits.assign(nw, std::vector<std::size_t>(nu, 0));
  for (const auto& p : partial) {
    for (std::size_t iu = 0; iu < nu; ++iu) out.classical_hits[iu] += p.classical[iu];
    for (std::size_t iw = 0; iw < nw; ++iw)
      for (std::size_t iu = 0; iu < nu; ++iu) out.parisian_hits[iw][iu] += p.parisian[iw][iu];
    out.dominance_violations += p.violations;
  }
  return out;
}

}  // namespace parisian
