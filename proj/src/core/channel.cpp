// SPDX-License-Identifier: Apache-2.0
#include "channel.hpp"

#include <cmath>

namespace slpcr {

void SystemDims::validate() const {
  if (M_p < 1 || M_c < 1 || N_p < 1 || N_c < 1) {
    throw Error(ErrorCode::invalid_argument,
                "antenna and user counts must be positive");
  }
  if (!(P_p > 0.0) || !std::isfinite(P_p)) {
    throw Error(ErrorCode::invalid_argument, "P_p must be positive");
  }
  if (sigma2_p < 0.0 || sigma2_c < 0.0 || !std::isfinite(sigma2_p) ||
      !std::isfinite(sigma2_c)) {
    throw Error(ErrorCode::invalid_argument,
                "noise variances must be nonnegative");
  }
}

VectorXcd complex_gaussian(Eigen::Index n, double sigma2, Rng& rng) {
  if (sigma2 <= 0.0) return VectorXcd::Zero(n);
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2 / 2.0));
  VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cxd(re, im);
  }
  return v;
}

namespace {

MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatrixXcd m(rows, cols);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = cxd(re, im);
    }
  }
  return m;
}

}  // namespace

ChannelSet sample_channels(const SystemDims& dims, Rng& rng) {
  ChannelSet cs;
  cs.H_pp = gaussian_matrix(dims.N_p, dims.M_p, rng);
  cs.H_cp = gaussian_matrix(dims.N_p, dims.M_c, rng);
  cs.H_pc = gaussian_matrix(dims.N_c, dims.M_p, rng);
  cs.H_cc = gaussian_matrix(dims.N_c, dims.M_c, rng);
  return cs;
}

MatrixXcd zf_precoder(const MatrixXcd& H) {
  const MatrixXcd gram = H * H.adjoint();
  Eigen::FullPivLU<MatrixXcd> lu(gram);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::singular_channel,
                "channel matrix is rank-deficient; zero-forcing undefined");
  }
  return H.adjoint() * lu.inverse();
}

PbsSignal pbs_transmit(const MatrixXcd& H_pp, const VectorXcd& s_p,
                       double P_p, PbsMode mode, Rng& rng) {
  PbsSignal out;
  if (mode == PbsMode::white) {
    out.x_p = complex_gaussian(H_pp.cols(), P_p / double(H_pp.cols()), rng);
    return out;
  }
  const MatrixXcd w = zf_precoder(H_pp);
  const VectorXcd raw = w * s_p;
  const double nrm = raw.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw Error(ErrorCode::singular_channel,
                "zero-forcing produced a degenerate transmit vector");
  }
  out.f = std::sqrt(P_p) / nrm;
  out.x_p = out.f * raw;
  return out;
}

VectorXcd rotated_channel(const VectorXcd& h, cxd s) {
  return std::conj(s) * h;
}

}  // namespace slpcr
