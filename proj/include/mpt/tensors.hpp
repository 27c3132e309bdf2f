// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_TENSORS_HPP
#define MPT_TENSORS_HPP

#include <array>
#include <optional>
#include <Eigen/Core>
#include "mpt/transmission.hpp"

namespace mpt
{

// One frequency of a signature. All tensors in m^3 and stored symmetrised.
struct MPTSample
{
  double omega = 0.0;
  Eigen::Matrix3d N0 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d I = Eigen::Matrix3d::Zero();
  Eigen::Vector3d eig_real = Eigen::Vector3d::Zero();  // of N0 + R, ascending
  Eigen::Vector3d eig_imag = Eigen::Vector3d::Zero();  // of I, ascending
  double asymmetry = 0.0;
  std::optional<Eigen::Matrix3d> delta;
};

struct TensorPair
{
  Eigen::Matrix3d R, I;
  double asymmetry = 0.0;  // max |T - T^T| over R and I before symmetrisation
};

// The small pairings R and I are built from: KK(i,j) = q_i^H K q_j and
// UU(i,j) = u_i^H Msigma u_j with u_i = q_i + theta0_i the total field in B.
struct Pairings
{
  Eigen::Matrix3cd KK, UU;
};

double AsymmetryNorm(const Eigen::Matrix3d &T);
Eigen::Matrix3d Symmetrise(const Eigen::Matrix3d &T);

// N0 = alpha^3 [delta_ij int_B (1 - 1/mu_r) + 1/4 theta~_i^T K theta~_j], symmetrised.
Eigen::Matrix3d ComputeN0(const Theta0Solution &theta0, double alpha,
                          double *asymmetry = nullptr);

TensorPair TensorsFromPairings(const Pairings &p, double alpha, double omega);

Pairings ComputePairings(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q);

// R from the curl-curl pairing over the domain, I from the conductivity pairing of the
// total field over B.
TensorPair ComputeRI(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q,
                     double omega);

// R and I from the pairings against theta0 only.
TensorPair ComputeRIAlt(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q,
                        double omega);

// Eigenvalues of (T + T^T)/2 in ascending order. Throws ConfigError when
// max |T - T^T| > rel_tol * ||T||.
Eigen::Vector3d TensorEigenvalues(const Eigen::Matrix3d &T, double rel_tol = 1e-9);

MPTSample MakeSample(double omega, const Eigen::Matrix3d &N0, const TensorPair &RI);

}  // namespace mpt

#endif  // MPT_TENSORS_HPP
