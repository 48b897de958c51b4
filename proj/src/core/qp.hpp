// SPDX-License-Identifier: Apache-2.0
//
// Minimum-norm quadratic program: minimize ||x||^2 subject to G x >= g.
// Dual active-set method; every solve carries a checkable certificate
// (KKT residuals when optimal, a Farkas vector when infeasible).
#ifndef SLPCR_CORE_QP_HPP
#define SLPCR_CORE_QP_HPP

#include "common.hpp"

namespace slpcr {

enum class QpStatus { optimal, infeasible, max_iterations };

struct QpOptions {
  double feas_tol = 1e-8;
  double stat_tol = 1e-8;
  double comp_tol = 1e-8;
  int max_iters = 0;  // 0 -> 10 * (rows + cols)
};

struct KktResiduals {
  double stationarity = 0.0;    // ||2x - G^T lambda||_inf
  double primal = 0.0;          // max(0, max_i g_i - (Gx)_i)
  double complementarity = 0.0; // max_i |lambda_i (Gx - g)_i|
  double dual_min = 0.0;        // min_i lambda_i
};

struct QpSolution {
  VectorXd x;
  QpStatus status = QpStatus::optimal;
  VectorXd duals;  // size m, zero on inactive rows
  KktResiduals kkt;
  int iterations = 0;
  // status == infeasible: y >= 0 with G^T y ~ 0 and g^T y > 0.
  VectorXd farkas;
};

QpSolution solve_min_norm(const MatrixXd& G, const VectorXd& g,
                          const QpOptions& opts = {});

// Recomputes the residuals from (G, g, x, duals) alone.
KktResiduals verify_kkt(const MatrixXd& G, const VectorXd& g,
                        const QpSolution& sol);

bool kkt_pass(const MatrixXd& G, const VectorXd& g, const QpSolution& sol,
              const QpOptions& opts = {});

}  // namespace slpcr

#endif  // SLPCR_CORE_QP_HPP
