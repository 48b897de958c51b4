// SPDX-License-Identifier: Apache-2.0
//
// Imperfect shared CSI: Lloyd-Max scalar quantization of the primary
// channels with its additive-noise statistics, and norm-bounded error
// injection.
#ifndef SLPCR_CORE_QUANTIZER_HPP
#define SLPCR_CORE_QUANTIZER_HPP

#include <string>
#include <utility>

#include "common.hpp"

namespace slpcr {

// Optimal scalar quantizer for the standard Gaussian source. Trained on
// a deterministic density grid, so identical across runs.
struct LloydMaxCodebook {
  int bits = 0;
  std::vector<double> levels;      // 2^bits, increasing
  std::vector<double> thresholds;  // 2^bits - 1, cell boundaries
  double mse = 0.0;                // distortion for unit-variance input
  int iterations = 0;
  std::vector<double> mse_history;  // per-iteration distortion

  double quantize(double x) const;
  std::string to_json() const;
  static LloydMaxCodebook from_json(const std::string& text);
};

// Raised when training stalls; carries the last iterate and its
// residual so callers can inspect how far convergence got.
class LloydConvergenceError : public Error {
 public:
  LloydConvergenceError(const std::string& what, LloydMaxCodebook last_iter,
                        double resid)
      : Error(ErrorCode::convergence, what),
        last(std::move(last_iter)),
        residual(resid) {}
  LloydMaxCodebook last;
  double residual;
};

LloydMaxCodebook lloyd_max_train(int bits, int max_iters = 20000,
                                 double tol = 1e-10);

// Element-wise quantization of real and imaginary parts. Components are
// normalized by the ensemble std sqrt(beta/2), quantized, and rescaled.
VectorXcd quantize_channel(const VectorXcd& h, const LloydMaxCodebook& cb,
                           double beta);

// AQNM statistics for one shared-CSI link: quantizer output modeled as
// alpha * input + uncorrelated noise of per-entry variance
// alpha * rho * beta.
struct AqnmParams {
  double rho = 0.0;
  double alpha = 1.0;  // 1 - rho
  double beta = 1.0;   // channel entry variance
  int bits = 0;

  static AqnmParams from_codebook(const LloydMaxCodebook& cb, double beta);
};

enum class ErrorSampling { sphere, ball };

// Isotropic complex error of norm exactly epsilon (sphere) or uniform in
// the epsilon-ball.
VectorXcd sample_bounded_error(Eigen::Index M, double epsilon,
                               ErrorSampling sampling, Rng& rng);

}  // namespace slpcr

#endif  // SLPCR_CORE_QUANTIZER_HPP
