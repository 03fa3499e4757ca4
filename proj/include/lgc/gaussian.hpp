#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lgc/types.hpp"

namespace lgc
{

/// How P(x | mu, Sigma) is normalized.
///
/// `standard` is the multivariate normal density. `paper_literal` uses
/// (2*pi*|Sigma|)^(-1/2) * exp(-(x-mu)^T Sigma^-1 (x-mu)), i.e. no 1/2 in the
/// exponent and a K-independent normalizer.
enum class DensityForm
{
  standard,
  paper_literal,
};

inline std::string_view to_string(DensityForm form)
{
  return form == DensityForm::standard ? "standard" : "paper_literal";
}

inline DensityForm parse_density_form(std::string_view s)
{
  if (s == "standard")
  {
    return DensityForm::standard;
  }
  if (s == "paper_literal")
  {
    return DensityForm::paper_literal;
  }
  throw ConfigError("unknown density form '" + std::string(s) + "'");
}

/// A fitted cluster: mean, SPD covariance and cached factorization data.
struct GaussianModel
{
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_inv;
  double sigma_det = 1.0;
  double log_det = 0.0;
  double ridge = 0.0;  // lambda finally applied, 0 if none

  // Diagnostics from the covariance loop.
  std::size_t iterations = 0;
  bool converged = true;
  bool degenerate = false;
  bool weight_fallback = false;

  std::size_t dim() const { return std::size_t(mu.size()); }

  /// log of the normalizing constant for `form`.
  double log_norm(DensityForm form) const
  {
    const double k = double(dim());
    if (form == DensityForm::standard)
    {
      return -0.5 * k * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
    }
    return -0.5 * (std::log(2.0 * std::numbers::pi) + log_det);
  }

  double norm_const(DensityForm form) const { return std::exp(log_norm(form)); }

  /// (x - mu)^T Sigma^-1 (x - mu)
  double mahalanobis2(std::span<const double> x) const
  {
    const std::size_t k = dim();
    double q = 0.0;
    for (std::size_t m = 0; m < k; ++m)
    {
      const double dm = x[m] - mu[Eigen::Index(m)];
      double row = 0.0;
      for (std::size_t n = 0; n < k; ++n)
      {
        row += sigma_inv(Eigen::Index(m), Eigen::Index(n)) *
               (x[n] - mu[Eigen::Index(n)]);
      }
      q += dm * row;
    }
    return q;
  }
};

namespace detail
{

// Numerically singular matrices pass Eigen's LLT with a tiny pivot; treat a
// pivot this small relative to the largest diagonal entry as a failure.
inline constexpr double kPivotFloor = 1e-13;

inline bool factorizable(const Eigen::MatrixXd& s, Eigen::LLT<Eigen::MatrixXd>& llt)
{
  if (!s.allFinite())
  {
    return false;
  }
  llt.compute(s);
  if (llt.info() != Eigen::Success)
  {
    return false;
  }
  const double max_diag = s.diagonal().maxCoeff();
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
  if (!pivots.allFinite() || !(max_diag > 0.0))
  {
    return false;
  }
  return pivots.array().square().minCoeff() > kPivotFloor * max_diag;
}

}  // namespace detail

/// Builds a model from a mean and covariance. If `sigma` cannot be Cholesky
/// factorized, adds lambda * tr(Sigma)/K * I with lambda = ridge, 10*ridge,
/// ... until it can. A zero-trace matrix uses lambda * I.
inline GaussianModel make_model(const Eigen::VectorXd& mu,
                                const Eigen::MatrixXd& sigma,
                                double ridge = 1e-8)
{
  const Eigen::Index k = mu.size();
  if (sigma.rows() != k || sigma.cols() != k)
  {
    throw ConfigError("covariance shape does not match mean dimension");
  }
  if (!(ridge > 0.0))
  {
    throw ConfigError("ridge must be positive");
  }

  GaussianModel model;
  model.mu = mu;
  model.sigma = sigma;
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!detail::factorizable(model.sigma, llt))
  {
    double scale = sigma.trace() / double(k);
    if (!(scale > 0.0) || !std::isfinite(scale))
    {
      scale = 1.0;
    }
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
    double lambda = ridge;
    for (;;)
    {
      model.sigma = sigma + lambda * scale * eye;
      if (detail::factorizable(model.sigma, llt))
      {
        model.ridge = lambda;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12)
      {
        throw ConfigError("covariance could not be regularized");
      }
    }
  }

  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
  model.sigma_inv = 0.5 * (inv + inv.transpose());
  model.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  model.sigma_det = std::exp(model.log_det);
  return model;
}

inline double log_density(std::span<const double> x, const GaussianModel& model,
                          DensityForm form = DensityForm::standard)
{
  const double q = model.mahalanobis2(x);
  const double scale = form == DensityForm::standard ? 0.5 : 1.0;
  return model.log_norm(form) - scale * q;
}

/// P(x | model) under the chosen normalization.
inline double density(std::span<const double> x, const GaussianModel& model,
                      DensityForm form = DensityForm::standard)
{
  return std::exp(log_density(x, model, form));
}

}  // namespace lgc
