#include "textfx/dataset/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "textfx/core/error.hpp"
#include "textfx/fx/eq.hpp"

namespace textfx::dataset {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::size_t kBands = 6;
constexpr std::size_t kDims = 3 * kBands;
constexpr double kFdStep = 1e-6;

// theta holds (gain_db, ln cutoff, ln q) per band, in EqParams field order.
fx::EqParams to_params(const VectorXd& theta) {
  std::array<double, fx::EqParams::kFieldCount> v{};
  for (std::size_t b = 0; b < kBands; ++b) {
    v[3 * b] = theta[3 * b];
    v[3 * b + 1] = std::exp(theta[3 * b + 1]);
    v[3 * b + 2] = std::exp(theta[3 * b + 2]);
  }
  return fx::EqParams::from_array(v);
}

VectorXd to_theta(const fx::EqParams& p) {
  const auto v = p.to_array();
  VectorXd theta(kDims);
  for (std::size_t b = 0; b < kBands; ++b) {
    theta[3 * b] = v[3 * b];
    theta[3 * b + 1] = std::log(v[3 * b + 1]);
    theta[3 * b + 2] = std::log(v[3 * b + 2]);
  }
  return theta;
}

void project(VectorXd& theta, int sample_rate) {
  const double f_lo = std::log(fx::kMinCutoffHz);
  const double f_hi = std::log(fx::max_cutoff_hz(sample_rate));
  for (std::size_t b = 0; b < kBands; ++b) {
    theta[3 * b] = std::clamp(theta[3 * b], fx::kMinGainDb, fx::kMaxGainDb);
    theta[3 * b + 1] = std::clamp(theta[3 * b + 1], f_lo, f_hi);
    theta[3 * b + 2] = std::clamp(theta[3 * b + 2], std::log(fx::kMinQ), std::log(fx::kMaxQ));
  }
}

VectorXd residual(const VectorXd& theta, const std::vector<double>& freqs, const VectorXd& target, int sr) {
  const auto resp = fx::eq_response_db(to_params(theta), freqs, sr);
  return Eigen::Map<const VectorXd>(resp.data(), static_cast<Eigen::Index>(resp.size())) - target;
}

}  // namespace

std::vector<double> fit_frequencies(int sample_rate) {
  const double lo = 20.0;
  const double hi = std::min(20000.0, 0.45 * sample_rate);
  std::vector<double> f(kFitFrequencies);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(kFitFrequencies - 1));
  return f;
}

FitResult fit_parametric_response(const std::vector<double>& target_db, int sample_rate) {
  const auto freqs = fit_frequencies(sample_rate);
  if (target_db.size() != freqs.size())
    fail(ErrorCode::InvalidArgument, "target response needs " + std::to_string(freqs.size()) + " points");
  const VectorXd target = Eigen::Map<const VectorXd>(target_db.data(), static_cast<Eigen::Index>(target_db.size()));

  VectorXd theta = to_theta(fx::EqParams{});
  project(theta, sample_rate);
  VectorXd r = residual(theta, freqs, target, sample_rate);
  double cost = r.squaredNorm();
  double lambda = 1e-2;

  FitResult out;
  for (; out.iterations < kFitIterations && cost > 1e-12; ++out.iterations) {
    MatrixXd jac(r.size(), static_cast<Eigen::Index>(kDims));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(kDims); ++j) {
      VectorXd probe = theta;
      probe[j] += kFdStep;
      jac.col(j) = (residual(probe, freqs, target, sample_rate) - r) / kFdStep;
    }
    const MatrixXd jtj = jac.transpose() * jac;
    const VectorXd grad = jac.transpose() * r;

    bool improved = false;
    while (lambda < 1e12) {
      MatrixXd damped = jtj;
      damped.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-9);
      VectorXd candidate = theta - damped.ldlt().solve(grad);
      project(candidate, sample_rate);
      const VectorXd rc = residual(candidate, freqs, target, sample_rate);
      const double cc = rc.squaredNorm();
      if (std::isfinite(cc) && cc < cost) {
        theta = candidate;
        r = rc;
        cost = cc;
        lambda = std::max(lambda / 3.0, 1e-9);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }

  // exp(log(x)) can land one ulp outside a range limit.
  out.params = fx::clamp(to_params(theta), sample_rate).params;
  out.residual_rms_db = std::sqrt(cost / static_cast<double>(r.size()));
  return out;
}

FitResult fit_parametric_from_graphic(const fx::GraphicEqParams& g, int sample_rate) {
  const auto freqs = fit_frequencies(sample_rate);
  return fit_parametric_response(fx::graphic_eq_response_db(g, freqs, sample_rate), sample_rate);
}

}  // namespace textfx::dataset
