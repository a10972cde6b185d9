#include "parisian/process_sim.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/simd.hpp"

namespace parisian {

double fbm_covariance(double hurst, double s, double t) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

CovarianceModel CovarianceModel::fbm(double hurst) {
  detail::require(hurst > 0.0 && hurst < 1.0, "fBm Hurst index must lie in (0,1)");
  return CovarianceModel(FbmModel{hurst});
}

CovarianceModel CovarianceModel::custom(std::function<double(double, double)> cov, double hurst) {
  detail::require(hurst > 0.0 && hurst < 1.0, "self-similarity index must lie in (0,1)");
  detail::require(static_cast<bool>(cov), "custom covariance function is empty");
  return CovarianceModel(CustomModel{std::move(cov), hurst});
}

double CovarianceModel::hurst() const {
  return std::visit([](const auto& m) { return m.hurst; }, kind_);
}

double CovarianceModel::covariance(double s, double t) const {
  if (const auto* f = std::get_if<FbmModel>(&kind_)) return fbm_covariance(f->hurst, s, t);
  return std::get<CustomModel>(kind_).cov(s, t);
}

std::size_t steps_for(double length, double step) {
  detail::require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  detail::require(length >= 0.0 && std::isfinite(length), "grid length must be nonnegative");
  const double ratio = length / step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// Autocovariance of unit-step fractional Gaussian noise.
double fgn_autocov(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Lower-triangular factor of a Gram matrix, with pivoting: x = P^T L sqrt(D) z.
struct Factor {
  Eigen::MatrixXd lower;  // L * diag(sqrt(D)), unit-lower L
  Eigen::Transpositions<Eigen::Dynamic> pivots;
};

Factor factorize(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw CovarianceError("eigenvalue computation failed", NAN);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -kPsdTolerance * std::max(hi, 0.0) || hi <= 0.0) {
    std::ostringstream os;
    os << "covariance matrix is not positive semidefinite: most negative eigenvalue " << lo
       << " (largest " << hi << ")";
    throw CovarianceError(os.str(), lo);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Factor f;
  f.lower = Eigen::MatrixXd(ldlt.matrixL()) * d.asDiagonal();
  f.pivots = ldlt.transpositionsP();
  return f;
}

}  // namespace

struct PathSampler::Workspace::Impl {
  FftwBuffer<fftw_complex> spectrum;
  FftwBuffer<double> real;
  std::vector<double> noise;
  std::size_t size = 0;
};

PathSampler::Workspace::Workspace() : impl_(std::make_unique<Impl>()) {}
PathSampler::Workspace::~Workspace() = default;
PathSampler::Workspace::Workspace(Workspace&&) noexcept = default;
PathSampler::Workspace& PathSampler::Workspace::operator=(Workspace&&) noexcept = default;

struct PathSampler::Impl {
  Method method;
  std::size_t n;
  double step;
  double scale;  // step^H for the unit-grid samplers

  // Circulant embedding of size M = 2m; scale[k] multiplies bin k of the
  // half spectrum.
  std::size_t embed = 0;
  std::vector<double> bin_scale;
  fftw_plan plan = nullptr;

  Factor factor;

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

namespace {

void init_factorization(PathSampler::Impl& impl, const CovarianceModel& model) {
  const auto n = static_cast<Eigen::Index>(impl.n);
  Eigen::MatrixXd gram(n, n);
  const double h2 = 2.0 * model.hurst();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i + 1) * impl.step;
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double tj = static_cast<double>(j + 1) * impl.step;
      const double cij = model.covariance(ti, tj);
      const double cji = model.covariance(tj, ti);
      if (std::abs(cij - cji) > 1e-10 * std::max(1.0, std::abs(cij)))
        throw CovarianceError("covariance function is not symmetric", NAN);
      gram(i, j) = gram(j, i) = cij;
    }
  }
  // Definiteness first, so an invalid model reports its eigenvalue.
  impl.factor = factorize(gram);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double expect = std::pow(static_cast<double>(i + 1) * impl.step, h2);
    if (std::abs(gram(i, i) - expect) > 1e-8 * std::max(expect, 1e-300))
      throw CovarianceError("covariance diagonal differs from t^{2H}", NAN);
  }
}

bool init_circulant(PathSampler::Impl& impl, double hurst) {
  const std::size_t m = next_pow2(impl.n);
  const std::size_t M = 2 * m;
  impl.embed = M;
  auto row = fftw_buffer<double>(M);
  auto spec = fftw_buffer<fftw_complex>(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = fgn_autocov(hurst, j);
  for (std::size_t j = m + 1; j < M; ++j) row[j] = fgn_autocov(hurst, M - j);

  auto real_out = fftw_buffer<double>(M);
  {
    std::lock_guard lock(planner_mutex());
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(M), row.get(), spec.get(), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    impl.plan = fftw_plan_dft_c2r_1d(static_cast<int>(M), spec.get(), real_out.get(),
                                     FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  }
  double lmax = 0.0, lmin = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    lmax = std::max(lmax, spec[k][0]);
    lmin = std::min(lmin, spec[k][0]);
  }
  if (lmin < -kCirculantTolerance * lmax) return false;

  impl.bin_scale.resize(m + 1);
  const double Md = static_cast<double>(M);
  for (std::size_t k = 0; k <= m; ++k) {
    const double lambda = std::max(spec[k][0], 0.0);
    const bool edge = (k == 0 || k == m);
    impl.bin_scale[k] = std::sqrt(lambda / (edge ? Md : 2.0 * Md));
  }
  return true;
}

}  // namespace

PathSampler::PathSampler(const CovarianceModel& model, std::size_t n, double step)
    : impl_(std::make_unique<Impl>()) {
  detail::require(n >= 1, "grid must have at least one step");
  detail::require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  impl_->n = n;
  impl_->step = step;
  const double hurst = model.hurst();
  impl_->scale = std::pow(step, hurst);
  if (!model.is_fbm()) {
    impl_->method = Method::Factorization;
    init_factorization(*impl_, model);
  } else if (hurst == 0.5) {
    // Unit-step fGn at H = 1/2 is white noise: the embedding spectrum is flat.
    impl_->method = Method::Brownian;
  } else if (init_circulant(*impl_, hurst)) {
    impl_->method = Method::Circulant;
  } else {
    impl_->method = Method::Factorization;
    init_factorization(*impl_, model);
  }
}

PathSampler::~PathSampler() = default;
PathSampler::PathSampler(PathSampler&&) noexcept = default;
PathSampler& PathSampler::operator=(PathSampler&&) noexcept = default;

PathSampler::Method PathSampler::method() const { return impl_->method; }
std::size_t PathSampler::points() const { return impl_->n + 1; }
double PathSampler::step() const { return impl_->step; }

void PathSampler::sample(SeedSpec seed, std::span<double> out, Workspace& ws) const {
  const Impl& im = *impl_;
  detail::require(out.size() == im.n + 1, "output span must hold n + 1 values");
  PhiloxEngine eng(seed, Stream::Path);
  auto& w = *ws.impl_;
  const auto& k = simd::active();
  out[0] = 0.0;

  switch (im.method) {
    case Method::Brownian: {
      fill_standard_normal(eng, out.subspan(1));
      break;
    }
    case Method::Circulant: {
      const std::size_t M = im.embed, half = M / 2;
      if (w.size != M) {
        w.spectrum = fftw_buffer<fftw_complex>(half + 1);
        w.real = fftw_buffer<double>(M);
        w.size = M;
      }
      double* z = &w.spectrum[0][0];
      fill_standard_normal(eng, std::span<double>(z, 2 * (half + 1)));
      z[1] = 0.0;
      z[2 * half + 1] = 0.0;
      k.scale_complex(z, im.bin_scale.data(), half + 1);
      fftw_execute_dft_c2r(im.plan, w.spectrum.get(), w.real.get());
      std::copy(w.real.get(), w.real.get() + im.n, out.begin() + 1);
      break;
    }
    case Method::Factorization: {
      w.noise.resize(im.n);
      fill_standard_normal(eng, w.noise);
      Eigen::Map<const Eigen::VectorXd> z(w.noise.data(), static_cast<Eigen::Index>(im.n));
      // P G P^T = L D L^T, so x = P^T L sqrt(D) z has covariance G.
      Eigen::VectorXd y = im.factor.lower.triangularView<Eigen::Lower>() * z;
      Eigen::VectorXd x = im.factor.pivots.transpose() * y;
      std::copy(x.data(), x.data() + im.n, out.begin() + 1);
      return;  // already on the physical grid
    }
  }
  // increments -> path, then self-similar rescaling from the unit grid
  for (std::size_t i = 1; i <= im.n; ++i) out[i] += out[i - 1];
  k.scale(out.data(), im.scale, im.n + 1);
}

PathGrid PathSampler::sample(SeedSpec seed) const {
  PathGrid g;
  g.step = impl_->step;
  g.values.resize(impl_->n + 1);
  Workspace ws;
  sample(seed, g.values, ws);
  return g;
}

PathGrid sample_fbm(double hurst, std::size_t n, double step, SeedSpec seed) {
  detail::require(n >= 2, "sample_fbm: n must be at least 2");
  return PathSampler(CovarianceModel::fbm(hurst), n, step).sample(seed);
}

PathGrid sample_custom(const CovarianceModel& model, std::size_t n, double step, SeedSpec seed) {
  detail::require(n >= 2, "sample_custom: n must be at least 2");
  if (model.is_fbm()) {
    // force the factorization path for an fBm model
    const double h = model.hurst();
    auto as_custom = CovarianceModel::custom(
        [h](double s, double t) { return fbm_covariance(h, s, t); }, h);
    return PathSampler(as_custom, n, step).sample(seed);
  }
  return PathSampler(model, n, step).sample(seed);
}

DriftedFieldSampler::DriftedFieldSampler(double alpha, std::size_t n, double step)
    : alpha_(alpha), step_(step) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0,2]");
  detail::require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  drift_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) drift_[i] = -std::pow(static_cast<double>(i) * step, alpha);
  if (alpha < 2.0 && n >= 1)
    fbm_ = std::make_unique<PathSampler>(CovarianceModel::fbm(alpha / 2.0), n, step);
}

void DriftedFieldSampler::sample(SeedSpec seed, std::span<double> out,
                                 PathSampler::Workspace& ws) const {
  detail::require(out.size() == drift_.size(), "output span must hold n + 1 values");
  const auto& k = simd::active();
  if (fbm_) {
    fbm_->sample(seed, out, ws);
  } else if (alpha_ == 2.0) {
    // B_2(t) = t N: perfectly correlated
    PhiloxEngine eng(seed, Stream::Path);
    const double normal = standard_normal(eng);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(i) * step_ * normal;
  } else {
    out[0] = 0.0;
  }
  k.affine(out.data(), out.data(), std::numbers::sqrt2, drift_.data(), out.size());
}

PathGrid sample_drifted_field(double alpha, double grid_end, double step, SeedSpec seed) {
  const std::size_t n = steps_for(grid_end, step);
  DriftedFieldSampler sampler(alpha, n, step);
  PathGrid g;
  g.step = step;
  g.values.resize(n + 1);
  PathSampler::Workspace ws;
  sampler.sample(seed, g.values, ws);
  return g;
}

}  // namespace parisian
