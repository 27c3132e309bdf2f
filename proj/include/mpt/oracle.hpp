// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_ORACLE_HPP
#define MPT_ORACLE_HPP

#include <complex>

namespace mpt
{

struct SphereAnalytic
{
  double alpha = 0.01;       // radius, m
  double mu_r = 1.0;
  double sigma_star = 0.0;   // S/m
};

// Scalar m(omega) with MPT = m I for a conducting permeable sphere in a uniform
// time-harmonic field:
//   m = 2 pi alpha^3 (2 mu_r J - D) / (D + mu_r J),  J = j1(x)/x,  D = j0(x) - j1(x)/x,
// x = k alpha, k^2 = i omega mu0 mu_r sigma. Throws std::overflow_error when |x| > 1e8.
std::complex<double> SphereMptExact(const SphereAnalytic &cfg, double omega);

struct SphereLimits
{
  double static_value;  // 4 pi alpha^3 (mu_r - 1) / (mu_r + 2)
  double pec_value;     // -2 pi alpha^3
};

SphereLimits SphereLimitValues(const SphereAnalytic &cfg);

}  // namespace mpt

#endif  // MPT_ORACLE_HPP
