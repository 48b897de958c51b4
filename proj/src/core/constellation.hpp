// SPDX-License-Identifier: Apache-2.0
//
// PSK constellation geometry: symbol points, safety margins, the 2x2M
// real lift of a rotated channel row, and nearest-sector detection.
#ifndef SLPCR_CORE_CONSTELLATION_HPP
#define SLPCR_CORE_CONSTELLATION_HPP

#include "common.hpp"

namespace slpcr {

// D points s_d = exp(j*pi*(2d+1)/D) on the unit circle, half-angle
// theta = pi/D. D must be a power of two so Gray bit labels exist.
struct PskConstellation {
  int order = 0;
  double theta = 0.0;
  std::vector<cxd> points;

  int bits_per_symbol() const;
};

PskConstellation psk_points(int order);

// Gray label of symbol index d.
inline unsigned gray_code(unsigned d) { return d ^ (d >> 1); }

// Differing bits between the Gray labels of two symbol indices.
int bit_errors(int d_sent, int d_detected);

// Distance of the rotated noise-free point z from the nearest decision
// boundary of the sector centered on the positive real axis:
//   Re{z} sin(theta) - |Im{z}| cos(theta).
// Negative when z lies outside its sector.
inline double safety_margin(cxd z, double theta) {
  return z.real() * std::sin(theta) - std::abs(z.imag()) * std::cos(theta);
}

// [Re{x}; Im{x}] stacked into a real vector of twice the length.
VectorXd realify(const VectorXcd& x);

// Inverse of realify.
VectorXcd unrealify(const VectorXd& v);

// The 2 x 2M lift of a complex row x of length M. Column layout matches
// realify (real parts first). Row 1 and row 2 applied to a realified
// vector give the two boundary distances whose minimum is the safety
// margin of the product.
MatrixXd mho(const VectorXcd& x, double theta);

struct DetectResult {
  int index = 0;
  bool degenerate = false;  // y was exactly zero
};

// Index of the constellation sector containing arg(y). Ties at a sector
// boundary go to the lower index.
DetectResult detect(cxd y, const PskConstellation& constellation);

}  // namespace slpcr

#endif  // SLPCR_CORE_CONSTELLATION_HPP
