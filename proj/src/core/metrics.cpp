// SPDX-License-Identifier: Apache-2.0
#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slpcr {

namespace {

constexpr double kPi = std::numbers::pi;
const double kTwoOverSqrtPi = 2.0 / std::sqrt(kPi);

// erf(x) = (2/sqrt(pi)) x e^{-x^2} sum_n (2x^2)^n / (1*3*...*(2n+1)).
// All terms positive, so no cancellation on [0, 3].
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 3.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return kTwoOverSqrtPi * x * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated by modified Lentz. Valid for x >= 1; used above the series
// switch point.
double erfc_cf(double x) {
  const double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / (std::sqrt(kPi) * f);
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  double r;
  if (ax <= 3.0) {
    r = erf_series(ax);
  } else if (ax < 6.5) {
    r = 1.0 - erfc_cf(ax);
  } else {
    r = 1.0;  // erfc < 2^-54 here
  }
  return x < 0.0 ? -r : r;
}

double erf_inv(double y) {
  if (!(std::abs(y) < 1.0)) {
    throw Error(ErrorCode::domain, "erf_inv requires |y| < 1");
  }
  if (y == 0.0) return 0.0;
  const double ay = std::abs(y);
  // Winitzki's approximation as the Newton starting point.
  const double a = 0.147;
  const double l = std::log1p(-ay * ay);
  const double u = 2.0 / (kPi * a) + l / 2.0;
  double t = std::sqrt(std::sqrt(u * u - l / a) - u);
  for (int it = 0; it < 8; ++it) {
    const double err = erf(t) - ay;
    const double deriv = kTwoOverSqrtPi * std::exp(-t * t);
    const double step = err / deriv;
    t -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
  }
  return y < 0.0 ? -t : t;
}

double eta(double v) {
  if (!(v > 0.0) || v >= 1.0) {
    throw Error(ErrorCode::domain, "eta requires v in (0, 1)");
  }
  return std::sqrt(2.0) * erf_inv(2.0 * std::sqrt(v) - 1.0);
}

QNoiseCov qnoise_cov(double theta, double P_p, double alpha, double rho,
                     double beta) {
  if (!(theta > 0.0) || !(theta < kPi / 2.0)) {
    throw Error(ErrorCode::domain,
                "quantization-noise covariance is singular unless "
                "theta is in (0, pi/2)");
  }
  QNoiseCov qc;
  qc.theta = theta;
  qc.scale = 0.5 * P_p * alpha * rho * beta;
  const double c2 = std::cos(2.0 * theta);
  qc.R_q << qc.scale, -qc.scale * c2, -qc.scale * c2, qc.scale;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(qc.R_q);
  qc.sqrt = es.eigenvectors() *
            es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();

  // Closed-form whitening matrix.
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double denom = std::sin(2.0 * theta) * std::sqrt(alpha * rho * beta * P_p);
  qc.inv_sqrt << (s + c) / denom, (c - s) / denom, (c - s) / denom,
      (s + c) / denom;
  return qc;
}

double block_error_prob(double P_b, long C, long q) {
  if (C < 0 || q < 0 || q > C) {
    throw Error(ErrorCode::invalid_argument,
                "block_error_prob requires 0 <= q <= C");
  }
  if (P_b <= 0.0) return 0.0;
  if (P_b >= 1.0) return q >= C ? 0.0 : 1.0;
  const double lp = std::log(P_b);
  const double lq = std::log1p(-P_b);
  const double lgc = std::lgamma(double(C) + 1.0);
  auto log_term = [&](long i) {
    return lgc - std::lgamma(double(i) + 1.0) -
           std::lgamma(double(C - i) + 1.0) + double(i) * lp +
           double(C - i) * lq;
  };
  // Sum whichever side of the split is smaller to avoid cancellation.
  const double mean = double(C) * P_b;
  if (double(q) >= mean) {
    double tail = 0.0;
    for (long i = C; i > q; --i) tail += std::exp(log_term(i));
    return std::min(1.0, tail);
  }
  double head = 0.0;
  for (long i = 0; i <= q; ++i) head += std::exp(log_term(i));
  return std::clamp(1.0 - head, 0.0, 1.0);
}

double throughput(double P_B, int c, long T, int N) {
  if (P_B < 0.0 || P_B > 1.0 || c < 1 || T < 1 || N < 1) {
    throw Error(ErrorCode::invalid_argument, "invalid throughput inputs");
  }
  return (1.0 - P_B) * double(c) * double(T) * double(N);
}

double energy_efficiency(double tau, double block_energy) {
  if (tau == 0.0) return 0.0;
  if (!(block_energy > 0.0)) {
    throw Error(ErrorCode::domain,
                "energy efficiency undefined for zero transmit energy");
  }
  return tau / block_energy;
}

BlockMetrics block_metrics(double P_b, int c, long T, int N, long Q,
                           double block_energy) {
  BlockMetrics m;
  m.P_b = P_b;
  m.C = long(c) * T;
  m.Q = Q;
  m.P_B = block_error_prob(P_b, m.C, Q);
  m.tau = throughput(m.P_B, c, T, N);
  m.ee = m.tau == 0.0 ? 0.0 : energy_efficiency(m.tau, block_energy);
  return m;
}

}  // namespace slpcr
