// SPDX-License-Identifier: Apache-2.0
#include "qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slpcr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Columns of G^T for the active rows.
MatrixXd active_normals(const MatrixXd& G, const std::vector<int>& act) {
  MatrixXd N(G.cols(), Eigen::Index(act.size()));
  for (std::size_t j = 0; j < act.size(); ++j) {
    N.col(Eigen::Index(j)) = G.row(act[j]).transpose();
  }
  return N;
}

VectorXd active_rhs(const VectorXd& g, const std::vector<int>& act) {
  VectorXd ga(Eigen::Index(act.size()));
  for (std::size_t j = 0; j < act.size(); ++j) ga(Eigen::Index(j)) = g(act[j]);
  return ga;
}

}  // namespace

KktResiduals verify_kkt(const MatrixXd& G, const VectorXd& g,
                        const QpSolution& sol) {
  KktResiduals r;
  const VectorXd slack = G * sol.x - g;
  r.primal = std::max(0.0, -slack.minCoeff());
  r.stationarity = (2.0 * sol.x - G.transpose() * sol.duals)
                       .cwiseAbs()
                       .maxCoeff();
  r.complementarity = (sol.duals.array() * slack.array()).abs().maxCoeff();
  r.dual_min = sol.duals.minCoeff();
  return r;
}

bool kkt_pass(const MatrixXd& G, const VectorXd& g, const QpSolution& sol,
              const QpOptions& opts) {
  if (sol.status != QpStatus::optimal) return false;
  const KktResiduals r = verify_kkt(G, g, sol);
  const double gscale = 1.0 + g.cwiseAbs().maxCoeff();
  return r.primal <= opts.feas_tol * gscale &&
         r.stationarity <= opts.stat_tol * (1.0 + sol.x.norm()) &&
         r.complementarity <= opts.comp_tol &&
         r.dual_min >= -opts.comp_tol;
}

QpSolution solve_min_norm(const MatrixXd& G, const VectorXd& g,
                          const QpOptions& opts) {
  const Eigen::Index m = G.rows();
  const Eigen::Index n = G.cols();
  if (m < 1 || n < 1 || g.size() != m) {
    throw Error(ErrorCode::invalid_argument, "inconsistent QP dimensions");
  }
  if (!G.allFinite() || !g.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "QP data must be finite");
  }
  const int max_iters =
      opts.max_iters > 0 ? opts.max_iters : 10 * int(m + n);
  const double gscale = 1.0 + g.cwiseAbs().maxCoeff();
  const double feas = opts.feas_tol * gscale;

  QpSolution sol;
  sol.x = VectorXd::Zero(n);
  sol.duals = VectorXd::Zero(m);

  std::vector<int> act;          // active row indices
  std::vector<double> lam;       // multipliers for act
  VectorXd x = VectorXd::Zero(n);
  int iters = 0;

  auto finish = [&](QpStatus st) {
    sol.status = st;
    sol.x = x;
    sol.duals.setZero();
    for (std::size_t j = 0; j < act.size(); ++j) {
      sol.duals(act[j]) = std::max(0.0, lam[j]);
    }
    sol.iterations = iters;
    sol.kkt = verify_kkt(G, g, sol);
    return sol;
  };

  // Re-solve the equality subproblem on the active set. Keeps the
  // iterate exactly on the active face instead of drifting with the
  // incremental updates. Rank-revealing solves plus one refinement step
  // keep the active-row slack at machine level even when the active
  // normals are nearly dependent, which is what the complementarity
  // certificate needs.
  auto resync = [&]() {
    if (act.empty()) {
      x.setZero();
      return;
    }
    const MatrixXd N = active_normals(G, act);
    const VectorXd ga = active_rhs(g, act);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> rows(N.transpose());
    x = rows.solve(ga);
    x += rows.solve(ga - N.transpose() * x);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cols(N);
    VectorXd l = cols.solve(2.0 * x);
    l += cols.solve(2.0 * x - N * l);
    for (std::size_t j = 0; j < act.size(); ++j) lam[j] = l(Eigen::Index(j));
  };

  while (iters < max_iters) {
    resync();

    // Most violated inactive constraint.
    int p = -1;
    double worst = feas;
    const VectorXd resid = g - G * x;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(act.begin(), act.end(), int(i)) != act.end()) continue;
      if (resid(i) > worst) {
        worst = resid(i);
        p = int(i);
      }
    }
    if (p < 0) return finish(QpStatus::optimal);

    const VectorXd np = G.row(p).transpose();
    const double np_scale = 1.0 + np.norm();
    double lam_p = 0.0;

    // Dual iteration for constraint p: step until p becomes active or a
    // blocking multiplier is dropped.
    while (iters < max_iters) {
      ++iters;
      VectorXd r(Eigen::Index(act.size()));
      VectorXd z = np;
      if (!act.empty()) {
        const MatrixXd N = active_normals(G, act);
        r = N.completeOrthogonalDecomposition().solve(np);
        z -= N * r;
      }
      z *= 0.5;

      const bool dependent = z.norm() <= 1e-12 * np_scale;

      // Dual blocking step.
      double t1 = kInf;
      int drop = -1;
      for (std::size_t j = 0; j < act.size(); ++j) {
        if (r(Eigen::Index(j)) > 1e-12) {
          const double t = lam[j] / r(Eigen::Index(j));
          if (t < t1) {
            t1 = t;
            drop = int(j);
          }
        }
      }

      if (dependent) {
        if (drop < 0) {
          // Unbounded dual ray: the violated row's normal lies in the
          // cone of the active normals with nonpositive weights.
          VectorXd y = VectorXd::Zero(m);
          y(p) = 1.0;
          for (std::size_t j = 0; j < act.size(); ++j) {
            y(act[j]) = std::max(0.0, -r(Eigen::Index(j)));
          }
          auto out = finish(QpStatus::infeasible);
          out.farkas = y;
          sol = out;
          return sol;
        }
        for (std::size_t j = 0; j < act.size(); ++j) {
          lam[j] -= t1 * r(Eigen::Index(j));
        }
        lam_p += t1;
        act.erase(act.begin() + drop);
        lam.erase(lam.begin() + drop);
        continue;
      }

      const double viol = g(p) - np.dot(x);
      if (viol <= 0.0) break;  // became satisfied while dropping rows
      const double t2 = viol / np.dot(z);
      const double t = std::max(0.0, std::min(t1, t2));
      x += t * z;
      for (std::size_t j = 0; j < act.size(); ++j) {
        lam[j] -= t * r(Eigen::Index(j));
      }
      lam_p += t;
      if (t2 <= t1) {
        act.push_back(p);
        lam.push_back(lam_p);
        break;
      }
      act.erase(act.begin() + drop);
      lam.erase(lam.begin() + drop);
    }
  }
  return finish(QpStatus::max_iterations);
}

}  // namespace slpcr
