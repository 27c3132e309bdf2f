// SPDX-License-Identifier: Apache-2.0

#include "mpt/tensors.hpp"

#include <algorithm>
#include <Eigen/Eigenvalues>

namespace mpt
{

double AsymmetryNorm(const Eigen::Matrix3d &T)
{
  return (T - T.transpose()).cwiseAbs().maxCoeff();
}

Eigen::Matrix3d Symmetrise(const Eigen::Matrix3d &T)
{
  return 0.5 * (T + T.transpose());
}

Eigen::Matrix3d ComputeN0(const Theta0Solution &theta0, double alpha, double *asymmetry)
{
  Eigen::Matrix3d N = theta0.contrast_volume * Eigen::Matrix3d::Identity();
  std::array<Eigen::VectorXd, 3> Kx;
  for (int j = 0; j < 3; j++)
  {
    Kx[j] = theta0.K * theta0.x[j];
  }
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      N(i, j) += 0.25 * theta0.x[i].dot(Kx[j]);
    }
  }
  N *= alpha * alpha * alpha;
  if (asymmetry)
  {
    *asymmetry = AsymmetryNorm(N);
  }
  return Symmetrise(N);
}

TensorPair TensorsFromPairings(const Pairings &p, double alpha, double omega)
{
  const double a3 = alpha * alpha * alpha;
  const double nu = alpha * alpha * omega * kMu0;
  Eigen::Matrix3d R, I;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      R(i, j) = -0.25 * a3 * p.KK(i, j).real();
      I(i, j) = 0.25 * a3 * nu * p.UU(i, j).real();
    }
  }
  TensorPair out;
  out.asymmetry = std::max(AsymmetryNorm(R), AsymmetryNorm(I));
  out.R = Symmetrise(R);
  out.I = Symmetrise(I);
  return out;
}

Pairings ComputePairings(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q)
{
  Pairings p;
  std::array<Eigen::VectorXcd, 3> u, Kq, Su;
  for (int j = 0; j < 3; j++)
  {
    u[j] = q[j] + affine.theta0[j].cast<Complex>();
    Kq[j] = affine.K * q[j];
    Su[j] = affine.Msigma * u[j];
  }
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      p.KK(i, j) = q[i].dot(Kq[j]);  // dot conjugates its left argument
      p.UU(i, j) = u[i].dot(Su[j]);
    }
  }
  return p;
}

TensorPair ComputeRI(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q,
                     double omega)
{
  return TensorsFromPairings(ComputePairings(affine, q), affine.alpha, omega);
}

TensorPair ComputeRIAlt(const AffineSystem &affine, const std::array<Eigen::VectorXcd, 3> &q,
                        double omega)
{
  const double a = affine.alpha;
  const double scale = 0.25 * a * a * a * a * a * omega * kMu0;
  Eigen::Matrix3d R, I;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      R(i, j) = -scale * affine.b[i].dot(q[j].imag());
      I(i, j) = scale * (affine.b[i].dot(q[j].real()) + affine.c(i, j));
    }
  }
  TensorPair out;
  out.asymmetry = std::max(AsymmetryNorm(R), AsymmetryNorm(I));
  out.R = Symmetrise(R);
  out.I = Symmetrise(I);
  return out;
}

Eigen::Vector3d TensorEigenvalues(const Eigen::Matrix3d &T, double rel_tol)
{
  const double norm = T.norm();
  if (norm == 0.0)
  {
    return Eigen::Vector3d::Zero();
  }
  if (AsymmetryNorm(T) > rel_tol * norm)
  {
    throw ConfigError("tensor is not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Symmetrise(T), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

MPTSample MakeSample(double omega, const Eigen::Matrix3d &N0, const TensorPair &RI)
{
  MPTSample s;
  s.omega = omega;
  s.N0 = N0;
  s.R = RI.R;
  s.I = RI.I;
  s.asymmetry = RI.asymmetry;
  s.eig_real = TensorEigenvalues(N0 + RI.R);
  s.eig_imag = TensorEigenvalues(RI.I);
  return s;
}

}  // namespace mpt
