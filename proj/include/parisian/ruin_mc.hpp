#pragma once

// Monte Carlo estimation of classical and Parisian ruin for
// R_u(t) = u + c t^beta - X_H(t) on a uniform grid over [0, horizon].

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "parisian/process_sim.hpp"
#include "parisian/risk_model.hpp"
#include "parisian/rng.hpp"
#include "parisian/simd.hpp"

namespace parisian {

struct DeterministicWindow {
  double duration;
};
struct ExponentialWindow {
  double rate;
};
struct CustomWindow {
  // Draws a positive duration; called with the replication's Window stream.
  std::function<double(PhiloxEngine&)> sampler;
};

struct WindowSpec {
  std::variant<DeterministicWindow, ExponentialWindow, CustomWindow> kind;

  static WindowSpec deterministic(double duration);
  static WindowSpec exponential(double rate);
  static WindowSpec custom(std::function<double(PhiloxEngine&)> sampler);

  bool is_random() const { return !std::holds_alternative<DeterministicWindow>(kind); }
  void validate(double step) const;
  // Window length in grid steps for one replication (ceil of duration / step).
  std::size_t steps(SeedSpec seed, double step) const;
};

struct RuinSample {
  bool ruined = false;  // Parisian ruin within the horizon
  std::optional<double> tau;       // first grid time with R_u < 0
  std::optional<double> tau_star;  // first grid time closing a full sub-zero window
  double kappa_clock = 0.0;        // current sub-zero sojourn at the horizon
};

struct RuinConfig {
  RiskParams params;
  WindowSpec window = WindowSpec::deterministic(0.0);
  double horizon = 0.0;  // 0 selects the default 5 t0 u^{1/beta}
  double step = 0.01;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// 5 t0 u^{1/beta}
double default_horizon(const RiskParams& params);

enum class RuinKind { Classical, Parisian };

struct MCEstimate {
  double p_hat = 0.0;
  double stderr = 0.0;
  std::size_t n = 0;
  std::size_t hits = 0;
  RuinKind kind = RuinKind::Classical;
  RuinConfig config;
};

struct RuinEstimates {
  MCEstimate classical;
  MCEstimate parisian;
};

// Index scans over a sampled surplus path R[0..n].
// Returns the first index closing `window` consecutive steps below zero,
// i.e. the first k with R[k - window .. k] all negative.
std::optional<std::size_t> parisian_index_reference(std::span<const double> surplus,
                                                    std::size_t window);
std::optional<std::size_t> parisian_index(const simd::KernelTable& k,
                                          std::span<const double> surplus, std::size_t window);

// Reusable simulator for one configuration; shares the sampler precomputation
// across replications and workers.
class RuinSimulator {
 public:
  explicit RuinSimulator(const RuinConfig& config);

  const RuinConfig& config() const { return config_; }
  std::size_t points() const { return offset_.size(); }

  struct Scratch {
    PathSampler::Workspace ws;
    std::vector<double> path;
    std::vector<double> surplus;
  };

  RuinSample run(std::size_t replication, Scratch& scratch) const;

 private:
  RuinConfig config_;
  PathSampler sampler_;
  std::vector<double> offset_;  // u + c t^beta
};

RuinSample simulate_ruin(const RiskParams& params, const WindowSpec& window, double horizon,
                         double step, SeedSpec seed);

RuinEstimates estimate_ruin_probs(const RuinConfig& config);
MCEstimate estimate_ruin_prob(const RuinConfig& config, RuinKind which);

struct ConditionalRuinTimes {
  std::vector<RuinSample> samples;        // all with tau_star present
  std::vector<std::size_t> replications;  // replication index of each sample
  std::size_t attempted = 0;
  bool complete = false;                  // target reached before the cap
};

// Simulates replications 0, 1, ... until n_ruined_target Parisian-ruined
// paths are collected or max_replications is reached.
ConditionalRuinTimes sample_conditional_ruin_times(const RuinConfig& config,
                                                   std::size_t n_ruined_target,
                                                   std::size_t max_replications);

// Common-random-numbers sweep: every (u, window) combination is evaluated on
// identical paths and identical window draws. Uses the sup-inf form
// sup_t inf_{s in window} (X(s) - c s^beta) > u of Parisian ruin.
struct SweepConfig {
  double c = 1.0;
  double beta = 1.0;
  CovarianceModel model = CovarianceModel::fbm(0.5);
  std::vector<double> reserves;
  std::vector<WindowSpec> windows;
  double horizon = 10.0;
  double step = 0.01;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SweepResult {
  std::vector<double> reserves;
  std::size_t n = 0;
  std::vector<std::size_t> classical_hits;             // [u]
  std::vector<std::vector<std::size_t>> parisian_hits;  // [window][u]
  // Pathwise violations of Parisian => classical (must be 0).
  std::size_t dominance_violations = 0;

  double classical_p(std::size_t iu) const;
  double parisian_p(std::size_t iw, std::size_t iu) const;
};

SweepResult run_ruin_sweep(const SweepConfig& config);

}  // namespace parisian
