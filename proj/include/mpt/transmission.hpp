// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_TRANSMISSION_HPP
#define MPT_TRANSMISSION_HPP

#include <array>
#include <memory>
#include <Eigen/Core>
#include "mpt/fem.hpp"
#include "mpt/mesh.hpp"

namespace mpt
{

inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;

// 1e-10 times the mean diagonal of the unit-weight curl-curl matrix on the free dofs.
double DefaultEpsilon(const EdgeSpace &space);

// Region weights derived from a material table.
RegionWeights InversePermeability(const Mesh &mesh, const MaterialTable &materials);
RegionWeights Conductivity(const Mesh &mesh, const MaterialTable &materials);
RegionWeights ExteriorIndicator(const Mesh &mesh, const MaterialTable &materials);

// Reduced magnetostatic field theta~_i = theta0_i - e_i x xi, i = 0, 1, 2, on free dofs.
struct Theta0Solution
{
  std::shared_ptr<const EdgeSpace> space;
  std::array<Eigen::VectorXd, 3> x;
  double epsilon = 0.0;
  RealSparse K;                 // curl-curl weighted by 1/mu_r (free dofs)
  double contrast_volume = 0.0; // int_B (1 - 1/mu_r)
};

Theta0Solution SolveTheta0(std::shared_ptr<const EdgeSpace> space,
                           const MaterialTable &materials, double epsilon, double tol = 1e-10);

// A(omega) = A0 + omega A1 and r(omega) = omega r1 for the eddy-current problem, restricted
// to free dofs, together with the pairings the tensor formulas need.
struct AffineSystem
{
  std::shared_ptr<const EdgeSpace> space;
  double alpha = 0.0;
  double epsilon = 0.0;

  RealSparse A0;      // K + eps * mass on the exterior
  ComplexSparse A1;   // -i alpha^2 mu0 * Msigma
  RealSparse K;       // curl-curl weighted by 1/mu_r
  RealSparse Msigma;  // conductivity-weighted mass on B
  std::array<Eigen::VectorXcd, 3> r1;  // i alpha^2 mu0 b_i

  // theta0_i = theta~_i + e_i x xi in edge coefficients. The Whitney space holds the
  // linear field e_i x xi exactly, so no quadrature is needed for the analytic part.
  std::array<Eigen::VectorXd, 3> theta0;
  std::array<Eigen::VectorXd, 3> b;  // Msigma theta0_i = int_B sigma theta0_i . N_k
  Eigen::Matrix3d c;                 // int_B sigma theta0_i . theta0_j

  int Size() const { return static_cast<int>(A0.rows()); }
  ComplexSparse Matrix(double omega) const;
  Eigen::VectorXcd Rhs(int direction, double omega) const { return omega * r1[direction]; }
};

// Edge coefficients of e_i x xi on every edge: (e_i x midpoint) . (x_b - x_a), exact for
// linear fields.
Eigen::VectorXd InterpolateCrossField(const Mesh &mesh, int direction);

// Throws ConfigError when a conducting tet has an edge on the outer boundary.
AffineSystem BuildAffineSystem(const Theta0Solution &theta0, const MaterialTable &materials,
                               double alpha);

// A(omega) assembled in one element loop, without the affine split.
ComplexSparse AssembleTheta1Matrix(const EdgeSpace &space, const MaterialTable &materials,
                                   double alpha, double epsilon, double omega);

// q_i(omega) for the three directions from a single factorisation of A(omega).
std::array<Eigen::VectorXcd, 3> SolveTheta1Full(const AffineSystem &affine, double omega,
                                                double tol = 1e-10);

}  // namespace mpt

#endif  // MPT_TRANSMISSION_HPP
