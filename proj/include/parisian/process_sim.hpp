#pragma once

// Exact-in-distribution samplers for centered self-similar Gaussian processes
// on uniform grids {0, step, ..., n*step}.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "parisian/rng.hpp"

namespace parisian {

struct FbmModel {
  double hurst;
};

struct CustomModel {
  std::function<double(double, double)> cov;
  double hurst;
};

class CovarianceModel {
 public:
  static CovarianceModel fbm(double hurst);
  static CovarianceModel custom(std::function<double(double, double)> cov, double hurst);

  double hurst() const;
  bool is_fbm() const { return std::holds_alternative<FbmModel>(kind_); }
  double covariance(double s, double t) const;

 private:
  explicit CovarianceModel(std::variant<FbmModel, CustomModel> kind) : kind_(std::move(kind)) {}
  std::variant<FbmModel, CustomModel> kind_;
};

// 1/2 (t^{2H} + s^{2H} - |t-s|^{2H})
double fbm_covariance(double hurst, double s, double t);

struct PathGrid {
  double step = 0.0;
  std::vector<double> values;  // values[0] == 0

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * step; }
};

// Reusable sampler for one (model, n, step). Construction does all the
// precomputation (spectrum or factorization); sample() is const and may be
// called concurrently, each caller supplying its own Workspace.
class PathSampler {
 public:
  enum class Method { Brownian, Circulant, Factorization };

  class Workspace {
   public:
    Workspace();
    ~Workspace();
    Workspace(Workspace&&) noexcept;
    Workspace& operator=(Workspace&&) noexcept;

   private:
    friend class PathSampler;
    struct Impl;
    std::unique_ptr<Impl> impl_;
  };

  PathSampler(const CovarianceModel& model, std::size_t n, double step);
  ~PathSampler();
  PathSampler(PathSampler&&) noexcept;
  PathSampler& operator=(PathSampler&&) noexcept;

  Method method() const;
  std::size_t points() const;  // n + 1
  double step() const;

  // Writes the path at grid points 0..n into out (size n + 1).
  void sample(SeedSpec seed, std::span<double> out, Workspace& ws) const;
  PathGrid sample(SeedSpec seed) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// Largest circulant-embedding eigenvalue deficit tolerated before falling
// back to factorization, relative to the largest eigenvalue.
inline constexpr double kCirculantTolerance = 1e-10;
// Custom Gram matrices: smallest eigenvalue must be >= -kPsdTolerance * largest.
inline constexpr double kPsdTolerance = 1e-8;

PathGrid sample_fbm(double hurst, std::size_t n, double step, SeedSpec seed);
PathGrid sample_custom(const CovarianceModel& model, std::size_t n, double step, SeedSpec seed);

// Reusable sampler for the drifted field sqrt(2) B_alpha(t) - t^alpha on
// grid points 0..n.
class DriftedFieldSampler {
 public:
  DriftedFieldSampler(double alpha, std::size_t n, double step);

  double alpha() const { return alpha_; }
  std::size_t points() const { return drift_.size(); }
  double step() const { return step_; }
  void sample(SeedSpec seed, std::span<double> out, PathSampler::Workspace& ws) const;

 private:
  double alpha_;
  double step_;
  std::vector<double> drift_;  // -t^alpha
  std::unique_ptr<PathSampler> fbm_;  // empty when alpha == 2
};

// sqrt(2) B_alpha(t) - t^alpha on [0, grid_end] with the given step;
// B_alpha is fBm with Hurst index alpha/2. alpha = 2 gives sqrt(2) t N - t^2.
PathGrid sample_drifted_field(double alpha, double grid_end, double step, SeedSpec seed);

// Number of grid steps covering [0, length]; rounds to the nearest integer
// when length/step is within 1e-9 of one.
std::size_t steps_for(double length, double step);

}  // namespace parisian
