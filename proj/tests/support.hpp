// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_TESTS_SUPPORT_HPP
#define MPT_TESTS_SUPPORT_HPP

#include <memory>
#include <doctest.h>
#include "mpt/mesh.hpp"
#include "mpt/transmission.hpp"

namespace mpt::test
{

// Cube object [-1,1]^3 in [-h,h]^3 on a grid of unit cells: a few hundred free dofs, small
// enough for dense reference computations.
struct SmallProblem
{
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const EdgeSpace> space;
  MaterialTable materials;
  Theta0Solution theta0;
  AffineSystem affine;
  double alpha = 0.01;
};

inline SmallProblem MakeSmallProblem(double mu_r = 1.5, double sigma = 5.96e6,
                                     double half_width = 2.0, double alpha = 0.01)
{
  SmallProblem p;
  const int n = static_cast<int>(2 * half_width);
  std::vector<TaggedShape> shapes{{Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, "obj"}};
  p.mesh = std::make_shared<const Mesh>(TagRegions(GenerateBoxMesh(half_width, n), shapes));
  p.space = std::make_shared<const EdgeSpace>(EdgeSpace::Build(p.mesh));
  p.materials.Add({"obj", mu_r, sigma, true});
  p.alpha = alpha;
  p.theta0 = SolveTheta0(p.space, p.materials, DefaultEpsilon(*p.space), 1e-12);
  p.affine = BuildAffineSystem(p.theta0, p.materials, alpha);
  return p;
}

inline double RelDiff(double a, double b)
{
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace mpt::test

#endif  // MPT_TESTS_SUPPORT_HPP
