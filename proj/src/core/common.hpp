// SPDX-License-Identifier: Apache-2.0
#ifndef SLPCR_CORE_COMMON_HPP
#define SLPCR_CORE_COMMON_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace slpcr {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

enum class ErrorCode {
  invalid_argument,
  config,
  singular_channel,
  convergence,
  domain,
  unsupported,
  io,
  runtime,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Counter-based seed split: stream i of a master seed. Realizations get
// independent engines so serial and parallel runs agree bit-exactly.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(mix_seed(master, index));
}

// Sum in a fixed pairwise tree order, independent of how the slots were
// produced. Keeps aggregation identical across worker counts.
inline double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace slpcr

#endif  // SLPCR_CORE_COMMON_HPP
