// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_CERTIFICATES_HPP
#define MPT_CERTIFICATES_HPP

#include <array>
#include <Eigen/Core>
#include "mpt/pod.hpp"
#include "mpt/tensors.hpp"
#include "mpt/transmission.hpp"

namespace mpt
{

// Unit-weight lowest-order mass on the free dofs; the Riesz inner product of the residuals.
RealSparse RieszMass(const EdgeSpace &space);

// Offline data for the output bounds. With W_i = [r1_i, A0 U_i, A1 U_i] and
// M0 = P^T L L^T P, the factor R is the triangular factor of a QR of L^{-1} P [W_1 W_2 W_3],
// so G(i,j) = W_i^H M0^{-1} W_j = R_i^H R_j for the column blocks R_i of R.
struct CertificateData
{
  std::array<int, 3> M{};
  std::array<int, 3> offset{};  // first column of block i
  Eigen::MatrixXcd Rfac;
  std::array<std::array<Eigen::MatrixXcd, 3>, 3> G;  // all nine blocks, G[j][i] = G[i][j]^H
  double lambda_min = 0.0;
  double omega_prime = 0.0;

  double AlphaLB(double omega) const;
};

// Smallest eigenvalue of H x = lambda M0 x with H = A0 + omega' alpha^2 mu0 Msigma, divided
// by sqrt(2), by inverse iteration to rel_tol. Throws CertificateError when it is not
// positive.
double StabilityConstant(const AffineSystem &affine, const RealSparse &M0, double omega_prime,
                         double rel_tol = 1e-8);

CertificateData BuildCertificateOffline(const AffineSystem &affine, const Bases &bases,
                                        const RealSparse &M0, double omega_prime);

// w_i(omega) = (omega, -p_i, -omega p_i).
Eigen::VectorXcd CertificateVector(const Eigen::VectorXcd &p, double omega);

// Squared residual norms: self(i) = ||r_i||^2, diff(i,j) = ||r_i - r_j||^2.
struct ResidualNorms
{
  Eigen::Vector3d self = Eigen::Vector3d::Zero();
  Eigen::Matrix3d diff = Eigen::Matrix3d::Zero();
};

// Through the triangular factor (no cancellation between large terms).
ResidualNorms ResidualNormsFactor(const CertificateData &cert,
                                  const std::array<Eigen::VectorXcd, 3> &p, double omega);
// Through the expansion w_i^H G(i,i) w_i + w_j^H G(j,j) w_j - 2 Re w_i^H G(i,j) w_j.
ResidualNorms ResidualNormsExpansion(const CertificateData &cert,
                                     const std::array<Eigen::VectorXcd, 3> &p, double omega);

// Delta_ij = alpha^3 / (8 alpha_LB) (||r_i||^2 + ||r_j||^2 + ||r_i - r_j||^2).
Eigen::Matrix3d OnlineDelta(const CertificateData &cert, const std::array<Eigen::VectorXcd, 3> &p,
                            double omega, double alpha);

struct CertificateBand
{
  Eigen::Matrix3d real_lo, real_hi;  // (N0 + R) -/+ Delta
  Eigen::Matrix3d imag_lo, imag_hi;  // I -/+ Delta
};

// Throws ConfigError when the sample carries no Delta.
CertificateBand MakeCertificateBand(const MPTSample &sample);

}  // namespace mpt

#endif  // MPT_CERTIFICATES_HPP
