// SPDX-License-Identifier: Apache-2.0
//
// Synthetic flat-fading channels for the two-cell overlay downlink and
// the primary-side transmit signal.
#ifndef SLPCR_CORE_CHANNEL_HPP
#define SLPCR_CORE_CHANNEL_HPP

#include "common.hpp"

namespace slpcr {

struct SystemDims {
  int M_p = 8;  // PBS antennas
  int M_c = 8;  // CBS antennas
  int N_p = 4;  // primary users
  int N_c = 4;  // cognitive users
  double P_p = 10.0;      // PBS transmit power, watts
  double sigma2_p = 1.0;  // PU noise variance
  double sigma2_c = 1.0;  // CU noise variance

  void validate() const;
  // The precoders need at least one spatial degree of freedom per user.
  bool feasibility_warning() const { return M_c < N_p + N_c; }
};

// The four flat-fading blocks. Row k of H_xy is the channel from base
// station x to user k of population y.
struct ChannelSet {
  MatrixXcd H_pp;  // N_p x M_p
  MatrixXcd H_cp;  // N_p x M_c
  MatrixXcd H_pc;  // N_c x M_p
  MatrixXcd H_cc;  // N_c x M_c
};

// i.i.d. CN(0,1) entries (real and imaginary parts each N(0, 1/2)).
ChannelSet sample_channels(const SystemDims& dims, Rng& rng);

// v i.i.d. CN(0, sigma2) entries.
VectorXcd complex_gaussian(Eigen::Index n, double sigma2, Rng& rng);

// Unnormalized zero-forcing precoder H^H (H H^H)^{-1}; H W = I.
// Throws singular_channel when H is rank-deficient.
MatrixXcd zf_precoder(const MatrixXcd& H);

enum class PbsMode { zf, white };

struct PbsSignal {
  VectorXcd x_p;
  double f = 0.0;  // common receive gain in zf mode; 0 in white mode
};

// zf:    x_p = f * W s_p with W = zf_precoder(H_pp) and f set so that
//        ||x_p||^2 = P_p exactly (every PU then receives f * s_p).
// white: x_p ~ CN(0, (P_p/M_p) I), matching E{x_p_real x_p_real^T} =
//        (P_p / 2M_p) I used in the quantization-noise statistics.
PbsSignal pbs_transmit(const MatrixXcd& H_pp, const VectorXcd& s_p,
                       double P_p, PbsMode mode, Rng& rng);

// conj(s) * h for a unit-magnitude symbol s.
VectorXcd rotated_channel(const VectorXcd& h, cxd s);

}  // namespace slpcr

#endif  // SLPCR_CORE_CHANNEL_HPP
