// SPDX-License-Identifier: Apache-2.0

#include "mpt/scaling.hpp"

#include <cmath>
#include "mpt/errors.hpp"

namespace mpt
{

namespace
{

void CheckFactor(double s)
{
  if (!(s > 0.0) || !std::isfinite(s))
  {
    throw ConfigError("scale factor must be positive and finite");
  }
}

Provenance Record(const Sweep &sweep, const std::string &lemma, double s)
{
  Provenance p;
  p.lemma = lemma;
  p.s = s;
  p.alpha_before = sweep.alpha;
  for (const auto &[tag, m] : sweep.materials.All())
  {
    if (m.is_object)
    {
      p.sigma_before[tag] = m.sigma_star;
    }
  }
  return p;
}

}  // namespace

void CheckSweep(const Sweep &sweep)
{
  double prev = 0.0;
  for (const auto &s : sweep.samples)
  {
    if (!(s.omega > prev))
    {
      throw ConfigError("sweep frequencies must be positive and strictly increasing");
    }
    prev = s.omega;
  }
}

Sweep ScaleConductivity(const Sweep &sweep, double s)
{
  CheckFactor(s);
  CheckSweep(sweep);
  Sweep out = sweep;
  out.provenance.push_back(Record(sweep, "conductivity", s));
  out.materials = sweep.materials.WithScaledConductivity(s);
  for (auto &sample : out.samples)
  {
    sample.omega = sample.omega / s;
  }
  return out;
}

Sweep ScaleSize(const Sweep &sweep, double s)
{
  CheckFactor(s);
  CheckSweep(sweep);
  Sweep out = sweep;
  out.provenance.push_back(Record(sweep, "size", s));
  out.alpha = s * sweep.alpha;
  const double s3 = s * s * s;
  for (auto &sample : out.samples)
  {
    sample.omega = sample.omega / (s * s);
    sample.N0 *= s3;
    sample.R *= s3;
    sample.I *= s3;
    sample.eig_real *= s3;
    sample.eig_imag *= s3;
    sample.asymmetry *= s3;
    if (sample.delta)
    {
      *sample.delta *= s3;
    }
  }
  return out;
}

}  // namespace mpt
