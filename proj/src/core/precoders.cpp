// SPDX-License-Identifier: Apache-2.0
#include "precoders.hpp"

#include <cmath>
#include <numbers>

#include "constellation.hpp"

namespace slpcr {

namespace {

void check_symbols(const VectorXcd& s, const char* what) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (std::abs(std::abs(s(i)) - 1.0) > 1e-9) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(what) + " symbols must have unit magnitude");
    }
  }
}

struct ProblemShape {
  int N_p, N_c, M_c;
};

ProblemShape shape_of(const ChannelSet& csi) {
  return {int(csi.H_cp.rows()), int(csi.H_cc.rows()), int(csi.H_cc.cols())};
}

PrecodeProblem make_skeleton(const ChannelSet& csi, const VectorXcd& s_p,
                             const VectorXcd& s_c, double theta,
                             Design design, double row_scale_p = 1.0,
                             double row_scale_c = 1.0) {
  const auto [N_p, N_c, M_c] = shape_of(csi);
  PrecodeProblem pb;
  pb.design = design;
  pb.G.resize(2 * (N_p + N_c), 2 * M_c);
  pb.g.resize(2 * (N_p + N_c));
  pb.row_user.resize(2 * (N_p + N_c));
  for (int k = 0; k < N_p; ++k) {
    pb.G.middleRows(2 * k, 2) =
        row_scale_p * mho(rotated_channel(csi.H_cp.row(k).transpose(), s_p(k)), theta);
    pb.row_user[2 * k] = pb.row_user[2 * k + 1] = k;
  }
  for (int j = 0; j < N_c; ++j) {
    pb.G.middleRows(2 * (N_p + j), 2) =
        row_scale_c * mho(rotated_channel(csi.H_cc.row(j).transpose(), s_c(j)), theta);
    pb.row_user[2 * (N_p + j)] = pb.row_user[2 * (N_p + j) + 1] = N_p + j;
  }
  return pb;
}

}  // namespace

PrecodeProblem build_perfect(const ChannelSet& csi, const VectorXcd& s_p,
                             const VectorXcd& s_c, const VectorXcd& x_p,
                             double delta_p0, double delta_c0, double theta) {
  if (delta_p0 < 0.0 || delta_c0 < 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "safety-margin thresholds must be nonnegative");
  }
  check_symbols(s_p, "PU");
  check_symbols(s_c, "CU");
  const auto [N_p, N_c, M_c] = shape_of(csi);
  PrecodeProblem pb = make_skeleton(csi, s_p, s_c, theta, Design::perfect);
  const VectorXd xp_r = realify(x_p);
  for (int k = 0; k < N_p; ++k) {
    const Vector2d off =
        mho(rotated_channel(csi.H_pp.row(k).transpose(), s_p(k)), theta) * xp_r;
    pb.g.segment<2>(2 * k) = Vector2d::Constant(delta_p0) - off;
  }
  for (int j = 0; j < N_c; ++j) {
    const Vector2d off =
        mho(rotated_channel(csi.H_pc.row(j).transpose(), s_c(j)), theta) * xp_r;
    pb.g.segment<2>(2 * (N_p + j)) = Vector2d::Constant(delta_c0) - off;
  }
  return pb;
}

PrecodeProblem build_norm_bounded(const ChannelSet& shared_csi,
                                  const VectorXcd& s_p, const VectorXcd& s_c,
                                  const VectorXcd& x_p, double delta_p0,
                                  double delta_c0, const VectorXd& eps_p,
                                  const VectorXd& eps_c, double theta) {
  const auto [N_p, N_c, M_c] = shape_of(shared_csi);
  if (eps_p.size() != N_p || eps_c.size() != N_c || eps_p.minCoeff() < 0.0 ||
      eps_c.minCoeff() < 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "error bounds must be nonnegative, one per user");
  }
  PrecodeProblem pb =
      build_perfect(shared_csi, s_p, s_c, x_p, delta_p0, delta_c0, theta);
  pb.design = Design::norm_bounded;
  const double xp_norm = x_p.norm();
  const double root2 = std::numbers::sqrt2;
  for (int k = 0; k < N_p; ++k) {
    pb.g.segment<2>(2 * k).array() += root2 * eps_p(k) * xp_norm;
  }
  for (int j = 0; j < N_c; ++j) {
    pb.g.segment<2>(2 * (N_p + j)).array() += root2 * eps_c(j) * xp_norm;
  }
  return pb;
}

PrecodeProblem build_aqnm(const ChannelSet& quantized_csi,
                          const VectorXcd& s_p, const VectorXcd& s_c,
                          const VectorXcd& x_p, double delta_p0,
                          double delta_c0, const AqnmParams& aqnm_p,
                          const AqnmParams& aqnm_c, double v1, double v2,
                          double theta, double P_p) {
  if (!(v1 > 0.5 && v1 <= 1.0) || !(v2 > 0.5 && v2 <= 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "probability thresholds must lie in (0.5, 1]");
  }
  if (std::abs(theta - std::numbers::pi / 2.0) < 1e-12) {
    throw Error(ErrorCode::unsupported,
                "stochastic robust design needs order >= 4: the noise "
                "covariance is singular at theta = pi/2");
  }
  check_symbols(s_p, "PU");
  check_symbols(s_c, "CU");
  const auto [N_p, N_c, M_c] = shape_of(quantized_csi);
  PrecodeProblem pb = make_skeleton(quantized_csi, s_p, s_c, theta,
                                    Design::aqnm, aqnm_p.alpha, aqnm_c.alpha);
  const VectorXd xp_r = realify(x_p);

  const QNoiseCov cov_p =
      qnoise_cov(theta, P_p, aqnm_p.alpha, aqnm_p.rho, aqnm_p.beta);
  const QNoiseCov cov_c =
      qnoise_cov(theta, P_p, aqnm_c.alpha, aqnm_c.rho, aqnm_c.beta);
  const Vector2d pad_p = eta(v1) * (cov_p.sqrt * Vector2d::Ones());
  const Vector2d pad_c = eta(v2) * (cov_c.sqrt * Vector2d::Ones());

  for (int k = 0; k < N_p; ++k) {
    const Vector2d off =
        mho(rotated_channel(quantized_csi.H_pp.row(k).transpose(), s_p(k)), theta) * xp_r;
    pb.g.segment<2>(2 * k) =
        pad_p + Vector2d::Constant(aqnm_p.alpha * delta_p0) - off;
  }
  for (int j = 0; j < N_c; ++j) {
    const Vector2d off =
        mho(rotated_channel(quantized_csi.H_pc.row(j).transpose(), s_c(j)), theta) * xp_r;
    pb.g.segment<2>(2 * (N_p + j)) =
        pad_c + Vector2d::Constant(aqnm_c.alpha * delta_c0) - off;
  }
  return pb;
}

CrPalpResult crpalp_precode(const ChannelSet& csi, const MatrixXcd& W_p,
                            const VectorXcd& s_p, const VectorXcd& s_c,
                            double P_p, double P_c) {
  check_symbols(s_p, "PU");
  check_symbols(s_c, "CU");
  const int N_p = int(csi.H_cp.rows());
  const int N_c = int(csi.H_cc.rows());
  const int N = N_p + N_c;
  const int M_c = int(csi.H_cc.cols());
  if (N > M_c) {
    throw Error(ErrorCode::invalid_argument,
                "CR-PALP needs at least as many CBS antennas as users");
  }

  MatrixXcd H(N, M_c);
  H.topRows(N_p) = csi.H_cp;
  H.bottomRows(N_c) = csi.H_cc;

  const MatrixXcd gram = H * H.adjoint();
  Eigen::FullPivLU<MatrixXcd> lu(gram);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::singular_channel,
                "stacked CBS channel is rank-deficient");
  }

  VectorXcd s(N);
  s.head(N_p) = s_p;
  s.tail(N_c) = s_c;

  CrPalpResult out;
  CrPalpState& st = out.state;
  st.A = MatrixXd::Zero(N, N);
  st.B = MatrixXd::Zero(N, N);
  st.A.topLeftCorner(N_p, N_p).setIdentity();
  st.B.bottomRightCorner(N_c, N_c).setIdentity();

  st.Q_phi = s.asDiagonal() * gram.cwiseAbs().cast<cxd>() *
             s.conjugate().asDiagonal();

  // PBS contribution at all users, zero-padded over the CU symbols.
  MatrixXcd V_p = MatrixXcd::Zero(N, N);
  V_p.topLeftCorner(N_p, N_p) = csi.H_pp * W_p;
  V_p.bottomLeftCorner(N_c, N_p) = csi.H_pc * W_p;

  const MatrixXcd target = st.A.cast<cxd>() + st.B.cast<cxd>() * st.Q_phi - V_p;
  st.W_c = H.adjoint() * lu.inverse() * target;

  const double wps = (W_p * s_p).norm();
  const double wcs = (st.W_c * s).norm();
  if (!(wps > 0.0) || !(wcs > 0.0)) {
    throw Error(ErrorCode::singular_channel,
                "degenerate CR-PALP precoder output");
  }
  st.f_p = std::sqrt(P_p) / wps;
  st.f_c = std::sqrt(P_c) / wcs;
  out.x_c = st.f_c * (st.W_c * s);
  return out;
}

}  // namespace slpcr
