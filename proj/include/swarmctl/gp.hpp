#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "swarmctl/error.hpp"

namespace swarmctl {

enum class KernelType { squared_exponential, matern52 };

struct KernelConfig {
  KernelType type = KernelType::matern52;
  std::vector<double> length_scales;  // per dimension; a single entry broadcasts
  double signal_variance = 1.0;
};

namespace detail {

inline double length_scale_for(const KernelConfig& k, std::size_t dim) {
  return k.length_scales.size() == 1 ? k.length_scales[0] : k.length_scales[dim];
}

inline double scaled_sq_dist(const KernelConfig& k, std::span<const double> a,
                             std::span<const double> b) {
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double u = (a[d] - b[d]) / length_scale_for(k, d);
    r2 += u * u;
  }
  return r2;
}

}  // namespace detail

inline double kernel_value(const KernelConfig& k, std::span<const double> a,
                           std::span<const double> b) {
  double r2 = detail::scaled_sq_dist(k, a, b);
  switch (k.type) {
    case KernelType::squared_exponential:
      return k.signal_variance * std::exp(-0.5 * r2);
    case KernelType::matern52: {
      double r = std::sqrt(5.0 * r2);
      return k.signal_variance * (1.0 + r + r * r / 3.0) * std::exp(-r);
    }
  }
  return 0.0;
}

struct GpPrediction {
  double mean = 0.0;
  double std = 0.0;  // latent; observation noise is not added back
};

// Exact GP regression. Targets are standardized internally (population std,
// guarded to 1 when the data is constant) and noise_variance is given in
// raw target units, so callers never deal with the standardized space.
// Cholesky jitter starts at 1e-8 and escalates tenfold at most three times
// before the fit is declared failed.
class GaussianProcessModel {
 public:
  GpPrediction predict(std::span<const double> x) const {
    const auto n = static_cast<std::size_t>(x_.rows());
    Eigen::VectorXd ks(n);
    for (std::size_t i = 0; i < n; ++i) {
      ks[static_cast<Eigen::Index>(i)] = kernel_value(kernel_, row(i), x);
    }
    double mean_s = ks.dot(alpha_);
    Eigen::VectorXd v = llt_.solve(ks);
    double var_s = kernel_value(kernel_, x, x) - ks.dot(v);
    if (var_s < 0.0) var_s = 0.0;
    return {y_mean_ + y_scale_ * mean_s, y_scale_ * std::sqrt(var_s)};
  }

  double log_marginal_likelihood() const { return lml_; }
  const KernelConfig& kernel() const { return kernel_; }
  int dims() const { return static_cast<int>(x_.cols()); }
  int size() const { return static_cast<int>(x_.rows()); }
  double jitter_used() const { return jitter_used_; }

  friend GaussianProcessModel gp_fit(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y, KernelConfig kernel,
                                     double noise_variance);

 private:
  std::span<const double> row(std::size_t i) const {
    return {x_.data() + static_cast<std::ptrdiff_t>(i) * x_.cols(),
            static_cast<std::size_t>(x_.cols())};
  }

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x_;
  Eigen::VectorXd alpha_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  KernelConfig kernel_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double lml_ = 0.0;
  double jitter_used_ = 0.0;
};

inline GaussianProcessModel gp_fit(const std::vector<std::vector<double>>& x,
                                   const std::vector<double>& y, KernelConfig kernel,
                                   double noise_variance) {
  if (x.empty()) throw SpecError("gp_fit: need at least one observation");
  if (x.size() != y.size()) throw SpecError("gp_fit: x and y lengths differ");
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  if (d == 0) throw SpecError("gp_fit: zero-dimensional inputs");
  for (const auto& xi : x) {
    if (xi.size() != d) throw SpecError("gp_fit: inconsistent input dimensions");
  }
  if (kernel.length_scales.size() != 1 && kernel.length_scales.size() != d)
    throw SpecError("gp_fit: length_scales must have one entry or one per dimension");
  for (double l : kernel.length_scales) {
    if (!(l > 0.0)) throw SpecError("gp_fit: length scales must be > 0");
  }
  if (!(kernel.signal_variance > 0.0)) throw SpecError("gp_fit: signal_variance must be > 0");
  if (noise_variance < 0.0) throw SpecError("gp_fit: noise_variance must be >= 0");

  GaussianProcessModel model;
  model.kernel_ = std::move(kernel);
  model.x_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      model.x_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i][j];
    }
  }

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  model.y_mean_ = mean;
  model.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;

  Eigen::VectorXd ys(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ys[static_cast<Eigen::Index>(i)] = (y[i] - model.y_mean_) / model.y_scale_;
  }

  const double noise_std_space = noise_variance / (model.y_scale_ * model.y_scale_);
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v = kernel_value(model.kernel_, model.row(i), model.row(j));
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }

  double jitter = 1e-8;
  bool ok = false;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += noise_std_space + jitter;
    model.llt_.compute(kj);
    if (model.llt_.info() == Eigen::Success) {
      ok = true;
      model.jitter_used_ = jitter;
      break;
    }
    jitter *= 10.0;
  }
  if (!ok) throw ModelError("gp_fit: covariance factorization failed after jitter escalation");

  model.alpha_ = model.llt_.solve(ys);
  double log_det = 0.0;
  const auto& l = model.llt_.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += std::log(l(i, i));
  model.lml_ = -0.5 * ys.dot(model.alpha_) - log_det -
               0.5 * static_cast<double>(n) * std::log(2.0 * 3.141592653589793238462643);
  return model;
}

inline GpPrediction gp_predict(const GaussianProcessModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dims())
    throw SpecError("gp_predict: query dimension mismatch");
  return model.predict(x);
}

}  // namespace swarmctl
