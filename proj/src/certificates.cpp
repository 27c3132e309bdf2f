// SPDX-License-Identifier: Apache-2.0

#include "mpt/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace mpt
{

RealSparse RieszMass(const EdgeSpace &space)
{
  RegionWeights w;
  for (const auto &name : space.mesh->region_names)
  {
    w[name] = 1.0;
  }
  return RestrictToFree(AssembleMass(space, w), space);
}

double CertificateData::AlphaLB(double omega) const
{
  return lambda_min * std::min(1.0, omega / omega_prime);
}

double StabilityConstant(const AffineSystem &affine, const RealSparse &M0, double omega_prime,
                         double rel_tol)
{
  if (!(omega_prime > 0.0))
  {
    throw ConfigError("reference frequency must be positive");
  }
  const double a = affine.alpha;
  const RealSparse H = affine.A0 + (omega_prime * a * a * kMu0) * affine.Msigma;
  SparseSolver<double> solver(H);

  // Deterministic start with a component along every dof.
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(H.rows(), 1.0, 2.0);
  x /= std::sqrt(x.dot(M0 * x));
  double lambda = x.dot(H * x);
  // H is nearly singular on exterior gradients, so only a loose residual is attainable;
  // the Rayleigh quotient below uses H itself.
  for (int it = 0; it < 1000; it++)
  {
    Eigen::VectorXd y = solver.Solve(M0 * x, 1e-4);
    y /= std::sqrt(y.dot(M0 * y));
    const double next = y.dot(H * y);
    x = y;
    const bool done = std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    if (done)
    {
      break;
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda))
  {
    throw CertificateError("stability constant is not positive; no valid output bound");
  }
  return lambda / std::sqrt(2.0);
}

CertificateData BuildCertificateOffline(const AffineSystem &affine, const Bases &bases,
                                        const RealSparse &M0, double omega_prime)
{
  const int n = affine.Size();
  if (M0.rows() != n)
  {
    throw ConfigError("Riesz mass does not match the affine system");
  }
  CertificateData cert;
  int cols = 0;
  for (int i = 0; i < 3; i++)
  {
    if (bases[i].U.rows() != n)
    {
      throw ConfigError("basis size does not match the affine system");
    }
    cert.M[i] = bases[i].rank;
    cert.offset[i] = cols;
    cols += 2 * cert.M[i] + 1;
  }

  Eigen::MatrixXcd W(n, cols);
  for (int i = 0; i < 3; i++)
  {
    const Eigen::MatrixXcd &U = bases[i].U;
    const int o = cert.offset[i], m = cert.M[i];
    W.col(o) = affine.r1[i];
    W.middleCols(o + 1, m) = affine.A0 * U;
    W.middleCols(o + 1 + m, m) = affine.A1 * U;
  }

  Eigen::SimplicialLLT<RealSparse> llt(M0);
  if (llt.info() != Eigen::Success)
  {
    throw SolverError("Riesz mass factorisation failed", std::numeric_limits<double>::infinity());
  }
  const Eigen::MatrixXcd PW = llt.permutationP() * W;
  Eigen::MatrixXd re = PW.real(), im = PW.imag();
  llt.matrixL().solveInPlace(re);
  llt.matrixL().solveInPlace(im);
  Eigen::MatrixXcd Z(n, cols);
  Z.real() = re;
  Z.imag() = im;

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  const int k = std::min(n, cols);
  cert.Rfac = Eigen::MatrixXcd::Zero(k, cols);
  cert.Rfac = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      const auto Ri = cert.Rfac.middleCols(cert.offset[i], 2 * cert.M[i] + 1);
      const auto Rj = cert.Rfac.middleCols(cert.offset[j], 2 * cert.M[j] + 1);
      cert.G[i][j] = Ri.adjoint() * Rj;
    }
    cert.G[i][i] = 0.5 * (cert.G[i][i] + cert.G[i][i].adjoint()).eval();
  }

  cert.omega_prime = omega_prime;
  cert.lambda_min = StabilityConstant(affine, M0, omega_prime);
  return cert;
}

Eigen::VectorXcd CertificateVector(const Eigen::VectorXcd &p, double omega)
{
  const Eigen::Index m = p.size();
  Eigen::VectorXcd w(2 * m + 1);
  w(0) = omega;
  w.segment(1, m) = -p;
  w.segment(1 + m, m) = -omega * p;
  return w;
}

namespace
{

void CheckSizes(const CertificateData &cert, const std::array<Eigen::VectorXcd, 3> &p)
{
  for (int i = 0; i < 3; i++)
  {
    if (p[i].size() != cert.M[i])
    {
      throw ConfigError("reduced solution does not match the certificate data");
    }
  }
}

}  // namespace

ResidualNorms ResidualNormsFactor(const CertificateData &cert,
                                  const std::array<Eigen::VectorXcd, 3> &p, double omega)
{
  CheckSizes(cert, p);
  std::array<Eigen::VectorXcd, 3> v;
  for (int i = 0; i < 3; i++)
  {
    const int m = 2 * cert.M[i] + 1;
    const int rows = std::min<int>(cert.offset[i] + m, cert.Rfac.rows());
    v[i] = Eigen::VectorXcd::Zero(cert.Rfac.rows());
    v[i].head(rows) =
      cert.Rfac.block(0, cert.offset[i], rows, m) * CertificateVector(p[i], omega);
  }
  ResidualNorms out;
  for (int i = 0; i < 3; i++)
  {
    out.self(i) = v[i].squaredNorm();
    for (int j = 0; j < 3; j++)
    {
      out.diff(i, j) = (v[i] - v[j]).squaredNorm();
    }
  }
  return out;
}

ResidualNorms ResidualNormsExpansion(const CertificateData &cert,
                                     const std::array<Eigen::VectorXcd, 3> &p, double omega)
{
  CheckSizes(cert, p);
  std::array<Eigen::VectorXcd, 3> w;
  for (int i = 0; i < 3; i++)
  {
    w[i] = CertificateVector(p[i], omega);
  }
  ResidualNorms out;
  for (int i = 0; i < 3; i++)
  {
    out.self(i) = std::max(0.0, w[i].dot(cert.G[i][i] * w[i]).real());
  }
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      const double cross = w[i].dot(cert.G[i][j] * w[j]).real();
      out.diff(i, j) = i == j ? 0.0 : std::max(0.0, out.self(i) + out.self(j) - 2.0 * cross);
    }
  }
  return out;
}

Eigen::Matrix3d OnlineDelta(const CertificateData &cert, const std::array<Eigen::VectorXcd, 3> &p,
                            double omega, double alpha)
{
  const ResidualNorms r = ResidualNormsFactor(cert, p, omega);
  const double scale = alpha * alpha * alpha / (8.0 * cert.AlphaLB(omega));
  Eigen::Matrix3d delta;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      delta(i, j) = scale * (r.self(i) + r.self(j) + r.diff(i, j));
    }
  }
  return delta;
}

CertificateBand MakeCertificateBand(const MPTSample &sample)
{
  if (!sample.delta)
  {
    throw ConfigError("sample has no certificate");
  }
  const Eigen::Matrix3d &d = *sample.delta;
  const Eigen::Matrix3d re = sample.N0 + sample.R;
  return {re - d, re + d, sample.I - d, sample.I + d};
}

}  // namespace mpt
