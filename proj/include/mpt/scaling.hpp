// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_SCALING_HPP
#define MPT_SCALING_HPP

#include <map>
#include <string>
#include <vector>
#include "mpt/mesh.hpp"
#include "mpt/tensors.hpp"

namespace mpt
{

// One transform applied to a sweep, with the configuration it started from.
struct Provenance
{
  std::string lemma;  // "conductivity" or "size"
  double s = 1.0;
  double alpha_before = 0.0;
  std::map<std::string, double> sigma_before;  // object regions only
};

struct Sweep
{
  double alpha = 0.0;
  MaterialTable materials;
  std::vector<MPTSample> samples;  // strictly increasing omega
  std::vector<Provenance> provenance;
};

// Throws ConfigError unless the frequencies are positive and strictly increasing.
void CheckSweep(const Sweep &sweep);

// sigma -> s sigma on every object region; omega -> omega / s; values unchanged.
Sweep ScaleConductivity(const Sweep &sweep, double s);

// alpha -> s alpha; omega -> omega / s^2; tensors and certificate radii times s^3.
Sweep ScaleSize(const Sweep &sweep, double s);

}  // namespace mpt

#endif  // MPT_SCALING_HPP
