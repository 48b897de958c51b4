// SPDX-License-Identifier: Apache-2.0
//
// Constraint builders for the three power-minimizing SLP designs and the
// CR-PALP baseline. Builders return the real-valued system G x >= g
// consumed by the min-norm QP solver; all robustness lives in the
// right-hand sides (and a scalar row scaling for the stochastic design).
#ifndef SLPCR_CORE_PRECODERS_HPP
#define SLPCR_CORE_PRECODERS_HPP

#include "channel.hpp"
#include "common.hpp"
#include "metrics.hpp"
#include "quantizer.hpp"

namespace slpcr {

enum class Design { perfect, norm_bounded, aqnm };

struct PrecodeProblem {
  MatrixXd G;  // 2(N_p + N_c) x 2 M_c, PU row pairs first
  VectorXd g;
  Design design = Design::perfect;
  std::vector<int> row_user;  // global user index per row, PUs first
};

// Perfect-CSI power minimization: per user, the lifted rotated CBS
// channel must clear the margin left after the primary signal lands.
PrecodeProblem build_perfect(const ChannelSet& csi, const VectorXcd& s_p,
                             const VectorXcd& s_c, const VectorXcd& x_p,
                             double delta_p0, double delta_c0, double theta);

// Worst-case design for norm-bounded error on the shared primary
// channels: identical G, right-hand sides inflated by
// sqrt(2) * eps * ||x_p||.
PrecodeProblem build_norm_bounded(const ChannelSet& shared_csi,
                                  const VectorXcd& s_p, const VectorXcd& s_c,
                                  const VectorXcd& x_p, double delta_p0,
                                  double delta_c0, const VectorXd& eps_p,
                                  const VectorXd& eps_c, double theta);

// Chance-constrained design under the additive quantization noise
// model: rows scaled by alpha, margins padded by eta * R_q^{1/2} * 1.
// Requires theta != pi/2 (order >= 4), else the noise covariance is
// singular.
PrecodeProblem build_aqnm(const ChannelSet& quantized_csi,
                          const VectorXcd& s_p, const VectorXcd& s_c,
                          const VectorXcd& x_p, double delta_p0,
                          double delta_c0, const AqnmParams& aqnm_p,
                          const AqnmParams& aqnm_c, double v1, double v2,
                          double theta, double P_p);

struct CrPalpState {
  MatrixXcd W_c;      // M_c x (N_p + N_c)
  double f_p = 0.0;
  double f_c = 0.0;
  MatrixXcd Q_phi;    // phase-corrected correlation matrix
  MatrixXd A;         // primary selection diagonal
  MatrixXd B;         // cognitive selection diagonal
};

struct CrPalpResult {
  VectorXcd x_c;
  CrPalpState state;
};

// MMSE correlation-rotation baseline with separate instantaneous power
// scalings at the two base stations. W_p must satisfy H_pp W_p = I
// (unnormalized zero forcing); the power loading is folded into f_p.
CrPalpResult crpalp_precode(const ChannelSet& csi, const MatrixXcd& W_p,
                            const VectorXcd& s_p, const VectorXcd& s_c,
                            double P_p, double P_c);

}  // namespace slpcr

#endif  // SLPCR_CORE_PRECODERS_HPP
