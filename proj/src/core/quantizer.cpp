// SPDX-License-Identifier: Apache-2.0
#include "quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace slpcr {

namespace {

// Discretized standard normal on [-8, 8]: midpoint grid with pdf
// weights. Prefix sums give O(log n) cell moments per Lloyd sweep.
class GaussianGrid {
 public:
  explicit GaussianGrid(std::size_t n) : x_(n), w_(n) {
    const double lo = -8.0, hi = 8.0;
    const double dx = (hi - lo) / double(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = lo + (double(i) + 0.5) * dx;
      w_[i] = std::exp(-0.5 * x_[i] * x_[i]);
      wsum += w_[i];
    }
    for (auto& w : w_) w /= wsum;
    cw_.resize(n + 1, 0.0);
    cwx_.resize(n + 1, 0.0);
    cwx2_.resize(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cw_[i + 1] = cw_[i] + w_[i];
      cwx_[i + 1] = cwx_[i] + w_[i] * x_[i];
      cwx2_[i + 1] = cwx2_[i] + w_[i] * x_[i] * x_[i];
    }
  }

  std::size_t size() const { return x_.size(); }

  // First grid index with x >= t.
  std::size_t upper_index(double t) const {
    return std::size_t(std::lower_bound(x_.begin(), x_.end(), t) -
                       x_.begin());
  }

  double mass(std::size_t a, std::size_t b) const { return cw_[b] - cw_[a]; }
  double moment1(std::size_t a, std::size_t b) const {
    return cwx_[b] - cwx_[a];
  }
  double moment2(std::size_t a, std::size_t b) const {
    return cwx2_[b] - cwx2_[a];
  }

 private:
  std::vector<double> x_, w_, cw_, cwx_, cwx2_;
};

}  // namespace

double LloydMaxCodebook::quantize(double x) const {
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
  return levels[std::size_t(it - thresholds.begin())];
}

LloydMaxCodebook lloyd_max_train(int bits, int max_iters, double tol) {
  if (bits < 1 || bits > 5) {
    throw Error(ErrorCode::invalid_argument,
                "Lloyd-Max training supports 1..5 bits");
  }
  const int L = 1 << bits;
  static const GaussianGrid grid(1'000'000);

  LloydMaxCodebook cb;
  cb.bits = bits;
  cb.levels.resize(L);
  cb.thresholds.resize(L - 1);

  // Quantile initialization spreads the levels over the mass.
  for (int i = 0; i < L; ++i) {
    const double p = (double(i) + 0.5) / double(L);
    // Coarse normal quantile is enough for a starting point.
    double q = 0.0, lo = -8.0, hi = 8.0;
    for (int it = 0; it < 60; ++it) {
      q = 0.5 * (lo + hi);
      const double cdf = 0.5 * (1.0 + std::erf(q / std::numbers::sqrt2));
      (cdf < p ? lo : hi) = q;
    }
    cb.levels[i] = q;
  }

  double residual = 0.0;
  std::vector<std::size_t> edges(L + 1);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int i = 0; i + 1 < L; ++i) {
      cb.thresholds[i] = 0.5 * (cb.levels[i] + cb.levels[i + 1]);
    }
    edges[0] = 0;
    edges[L] = grid.size();
    for (int i = 0; i + 1 < L; ++i) {
      edges[i + 1] = grid.upper_index(cb.thresholds[i]);
    }
    residual = 0.0;
    double mse = 0.0;
    for (int i = 0; i < L; ++i) {
      const double m = grid.mass(edges[i], edges[i + 1]);
      const double m1 = grid.moment1(edges[i], edges[i + 1]);
      const double m2 = grid.moment2(edges[i], edges[i + 1]);
      const double centroid = m > 0.0 ? m1 / m : cb.levels[i];
      residual = std::max(residual, std::abs(centroid - cb.levels[i]));
      cb.levels[i] = centroid;
      mse += m2 - 2.0 * centroid * m1 + centroid * centroid * m;
    }
    cb.mse = mse;
    cb.mse_history.push_back(mse);
    cb.iterations = iter + 1;
    if (residual < tol) return cb;
  }
  throw LloydConvergenceError(
      "Lloyd-Max did not converge in " + std::to_string(max_iters) +
          " iterations (last residual " + std::to_string(residual) + ", mse " +
          std::to_string(cb.mse) + ")",
      cb, residual);
}

VectorXcd quantize_channel(const VectorXcd& h, const LloydMaxCodebook& cb,
                           double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "beta must be positive");
  }
  const double scale = std::sqrt(beta / 2.0);
  VectorXcd out(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    out(i) = cxd(scale * cb.quantize(h(i).real() / scale),
                 scale * cb.quantize(h(i).imag() / scale));
  }
  return out;
}

std::string LloydMaxCodebook::to_json() const {
  nlohmann::json j;
  j["bits"] = bits;
  j["levels"] = levels;
  j["thresholds"] = thresholds;
  j["mse"] = mse;
  return j.dump(2);
}

LloydMaxCodebook LloydMaxCodebook::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::io, std::string("bad codebook JSON: ") + e.what());
  }
  LloydMaxCodebook cb;
  try {
    cb.bits = j.at("bits").get<int>();
    cb.levels = j.at("levels").get<std::vector<double>>();
    cb.thresholds = j.at("thresholds").get<std::vector<double>>();
    cb.mse = j.at("mse").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::io, std::string("bad codebook JSON: ") + e.what());
  }
  if (cb.levels.size() != (1u << cb.bits) ||
      cb.thresholds.size() + 1 != cb.levels.size() ||
      !std::is_sorted(cb.thresholds.begin(), cb.thresholds.end())) {
    throw Error(ErrorCode::io, "inconsistent codebook JSON");
  }
  return cb;
}

AqnmParams AqnmParams::from_codebook(const LloydMaxCodebook& cb, double beta) {
  AqnmParams p;
  p.rho = cb.mse;
  p.alpha = 1.0 - cb.mse;
  p.beta = beta;
  p.bits = cb.bits;
  return p;
}

VectorXcd sample_bounded_error(Eigen::Index M, double epsilon,
                               ErrorSampling sampling, Rng& rng) {
  if (epsilon < 0.0) {
    throw Error(ErrorCode::invalid_argument, "epsilon must be nonnegative");
  }
  VectorXcd e = VectorXcd::Zero(M);
  if (epsilon == 0.0) return e;
  std::normal_distribution<double> normal(0.0, 1.0);
  double n2 = 0.0;
  while (n2 == 0.0) {
    for (Eigen::Index i = 0; i < M; ++i) {
      e(i) = cxd(normal(rng), normal(rng));
    }
    n2 = e.squaredNorm();
  }
  double radius = epsilon;
  if (sampling == ErrorSampling::ball) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    radius *= std::pow(unif(rng), 1.0 / (2.0 * double(M)));
  }
  return (radius / std::sqrt(n2)) * e;
}

}  // namespace slpcr
