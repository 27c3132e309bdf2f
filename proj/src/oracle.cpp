// SPDX-License-Identifier: Apache-2.0

#include "mpt/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include "mpt/errors.hpp"
#include "mpt/transmission.hpp"

namespace mpt
{

namespace
{

constexpr double kPi = 3.14159265358979323846;
using C = std::complex<double>;

// J and D from the power series (small |x|).
void SeriesJD(C x, C &J, C &D)
{
  const C x2 = x * x;
  C j0 = 0.0, jx = 0.0, term = 1.0;  // term = (-1)^n x^{2n} / (2n+1)!
  for (int n = 0; n < 40; n++)
  {
    j0 += term;
    jx += term * (2.0 * (n + 1)) / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    term *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
  }
  J = jx;
  D = j0 - jx;
}

// J / sin x and D / sin x with cot x evaluated through exp(2ix), which stays bounded
// for Im x > 0.
void ScaledJD(C x, C &J, C &D)
{
  const C e = std::exp(C(0.0, 2.0) * x);
  const C cot = C(0.0, 1.0) * (e + 1.0) / (e - 1.0);
  const C x2 = x * x, x3 = x2 * x;
  J = 1.0 / x3 - cot / x2;
  D = 1.0 / x - 1.0 / x3 + cot / x2;
}

}  // namespace

std::complex<double> SphereMptExact(const SphereAnalytic &cfg, double omega)
{
  if (!(cfg.alpha > 0.0) || !(cfg.mu_r > 0.0) || !(cfg.sigma_star >= 0.0) || !(omega >= 0.0))
  {
    throw ConfigError("invalid sphere parameters");
  }
  const double a3 = cfg.alpha * cfg.alpha * cfg.alpha;
  const double mu = cfg.mu_r;
  if (omega == 0.0 || cfg.sigma_star == 0.0)
  {
    return 4.0 * kPi * a3 * (mu - 1.0) / (mu + 2.0);
  }
  const C k = std::sqrt(C(0.0, omega * kMu0 * mu * cfg.sigma_star));
  const C x = k * cfg.alpha;
  if (std::abs(x) > 1e8)
  {
    throw std::overflow_error("sphere argument |k alpha| too large");
  }
  C J, D;
  if (std::abs(x) < 2.0)
  {
    SeriesJD(x, J, D);
  }
  else
  {
    ScaledJD(x, J, D);
  }
  const C m = 2.0 * kPi * a3 * (2.0 * mu * J - D) / (D + mu * J);
  if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
  {
    throw std::overflow_error("sphere polarizability is not finite");
  }
  return m;
}

SphereLimits SphereLimitValues(const SphereAnalytic &cfg)
{
  const double a3 = cfg.alpha * cfg.alpha * cfg.alpha;
  return {4.0 * kPi * a3 * (cfg.mu_r - 1.0) / (cfg.mu_r + 2.0), -2.0 * kPi * a3};
}

}  // namespace mpt
