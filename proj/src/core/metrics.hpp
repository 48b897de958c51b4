// SPDX-License-Identifier: Apache-2.0
//
// Special functions and block transmission metrics: error function pair,
// the chance-constraint margin factor, the 2x2 quantization-noise
// covariance with its matrix roots, and BLER / throughput / energy
// efficiency.
#ifndef SLPCR_CORE_METRICS_HPP
#define SLPCR_CORE_METRICS_HPP

#include <Eigen/Dense>

#include "common.hpp"

namespace slpcr {

// erf via a positive-term series for |x| <= 3 and a Lentz continued
// fraction for the complement above that.
double erf(double x);

// Inverse of erf on (-1, 1): rational initial guess, Newton-refined to
// ~1e-15. Throws domain error at |y| >= 1.
double erf_inv(double y);

// sqrt(2) * erf_inv(2*sqrt(v) - 1). The margin scale that makes the
// per-row Gaussian tail bound hold with probability v. Domain (0, 1).
double eta(double v);

// Covariance of the lifted quantization noise acting on the primary
// transmit vector: scale * [[1, -cos 2t], [-cos 2t, 1]] with
// scale = (P_p / 2) * alpha * rho * beta, plus its symmetric square
// root (eigen route) and the closed-form inverse square root.
struct QNoiseCov {
  double theta = 0.0;
  double scale = 0.0;
  Eigen::Matrix2d R_q;
  Eigen::Matrix2d sqrt;
  Eigen::Matrix2d inv_sqrt;
};

QNoiseCov qnoise_cov(double theta, double P_p, double alpha, double rho,
                     double beta);

// P{more than q bit errors in a block of C bits at per-bit rate P_b},
// binomial model, log-domain terms so C up to 1e4 is safe.
double block_error_prob(double P_b, long C, long q);

// (1 - P_B) * c * T * N.
double throughput(double P_B, int c, long T, int N);

// tau over the block-summed transmit energy. Throws on zero energy.
double energy_efficiency(double tau, double block_energy);

struct BlockMetrics {
  double P_b = 0.0;  // bit error rate
  long C = 0;        // bits per block
  long Q = 0;        // correctable errors per block
  double P_B = 0.0;  // block error rate
  double tau = 0.0;
  double ee = 0.0;
};

BlockMetrics block_metrics(double P_b, int c, long T, int N, long Q,
                           double block_energy);

}  // namespace slpcr

#endif  // SLPCR_CORE_METRICS_HPP
