// SPDX-License-Identifier: Apache-2.0
#include "constellation.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace slpcr {

namespace {
constexpr double kPi = std::numbers::pi;
}

int PskConstellation::bits_per_symbol() const {
  return std::countr_zero(static_cast<unsigned>(order));
}

PskConstellation psk_points(int order) {
  if (order < 2 || !std::has_single_bit(static_cast<unsigned>(order))) {
    throw Error(ErrorCode::invalid_argument,
                "PSK order must be a power of two >= 2, got " +
                    std::to_string(order));
  }
  PskConstellation c;
  c.order = order;
  c.theta = kPi / order;
  c.points.reserve(order);
  for (int d = 0; d < order; ++d) {
    const double ang = kPi * (2.0 * d + 1.0) / order;
    c.points.push_back(std::polar(1.0, ang));
  }
  return c;
}

int bit_errors(int d_sent, int d_detected) {
  return std::popcount(gray_code(static_cast<unsigned>(d_sent)) ^
                       gray_code(static_cast<unsigned>(d_detected)));
}

VectorXd realify(const VectorXcd& x) {
  const Eigen::Index m = x.size();
  VectorXd v(2 * m);
  v.head(m) = x.real();
  v.tail(m) = x.imag();
  return v;
}

VectorXcd unrealify(const VectorXd& v) {
  const Eigen::Index m = v.size() / 2;
  VectorXcd x(m);
  x.real() = v.head(m);
  x.imag() = v.tail(m);
  return x;
}

MatrixXd mho(const VectorXcd& x, double theta) {
  const Eigen::Index m = x.size();
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const VectorXd re = x.real();
  const VectorXd im = x.imag();
  MatrixXd out(2, 2 * m);
  out.row(0).head(m) = (re * st - im * ct).transpose();
  out.row(0).tail(m) = (-re * ct - im * st).transpose();
  out.row(1).head(m) = (re * st + im * ct).transpose();
  out.row(1).tail(m) = (re * ct - im * st).transpose();
  return out;
}

DetectResult detect(cxd y, const PskConstellation& constellation) {
  if (y == cxd(0.0, 0.0)) return {0, true};
  const int d = constellation.order;
  const double ang = std::arg(y);
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    double diff = std::remainder(ang - std::arg(constellation.points[i]),
                                 2.0 * kPi);
    diff = std::abs(diff);
    if (diff < best_dist) {  // strict: exact ties keep the lower index
      best_dist = diff;
      best = i;
    }
  }
  return {best, false};
}

}  // namespace slpcr
