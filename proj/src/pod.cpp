// SPDX-License-Identifier: Apache-2.0

#include "mpt/pod.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include "mpt/parallel.hpp"

namespace mpt
{

Spacing ParseSpacing(const std::string &name)
{
  if (name == "lin")
  {
    return Spacing::kLinear;
  }
  if (name == "log")
  {
    return Spacing::kLog;
  }
  throw ConfigError("spacing must be 'lin' or 'log', got '" + name + "'");
}

std::string SpacingName(Spacing s)
{
  return s == Spacing::kLinear ? "lin" : "log";
}

std::vector<double> FrequencySamples(double omega_min, double omega_max, int n, Spacing spacing)
{
  if (n < 1)
  {
    throw ConfigError("need at least one frequency");
  }
  if (!(omega_min > 0.0) || (n > 1 && !(omega_max > omega_min)))
  {
    throw ConfigError("frequency range must satisfy 0 < omega_min < omega_max");
  }
  if (n == 1)
  {
    return {omega_min};
  }
  std::vector<double> w(n);
  const double a = std::log10(omega_min), b = std::log10(omega_max);
  for (int k = 0; k < n; k++)
  {
    const double t = static_cast<double>(k) / (n - 1);
    w[k] = spacing == Spacing::kLinear ? omega_min + t * (omega_max - omega_min)
                                       : std::pow(10.0, a + t * (b - a));
  }
  w.front() = omega_min;
  w.back() = omega_max;
  return w;
}

std::vector<double> VerificationFrequencies(double omega_min, double omega_max, int n)
{
  if (n < 1 || !(omega_min > 0.0) || !(omega_max > omega_min))
  {
    throw ConfigError("invalid verification frequency range");
  }
  const double a = std::log10(omega_min), b = std::log10(omega_max);
  std::vector<double> w(n);
  for (int k = 0; k < n; k++)
  {
    w[k] = std::pow(10.0, a + (k + 0.5) * (b - a) / n);
  }
  return w;
}

namespace
{

std::vector<double> SortedUnique(std::vector<double> omegas)
{
  if (omegas.empty())
  {
    throw ConfigError("snapshot set needs at least one frequency");
  }
  std::sort(omegas.begin(), omegas.end());
  if (std::adjacent_find(omegas.begin(), omegas.end()) != omegas.end())
  {
    throw ConfigError("duplicate snapshot frequency");
  }
  return omegas;
}

}  // namespace

SnapshotSet BuildSnapshots(const FomSolve &solve, int n_dof, std::vector<double> omegas,
                           Spacing spacing, int threads)
{
  const auto start = std::chrono::steady_clock::now();
  SnapshotSet set;
  set.omega = SortedUnique(std::move(omegas));
  set.spacing = spacing;
  const int n = static_cast<int>(set.omega.size());
  for (auto &D : set.D)
  {
    D.resize(n_dof, n);
  }
  ParallelFor(n, threads, [&](int k) {
    const Theta1Solutions q = solve(set.omega[k]);
    for (int i = 0; i < 3; i++)
    {
      set.D[i].col(k) = q[i];
    }
  });
  set.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return set;
}

SnapshotSet BuildSnapshots(const AffineSystem &affine, std::vector<double> omegas,
                           Spacing spacing, double tol, int threads)
{
  return BuildSnapshots([&](double w) { return SolveTheta1Full(affine, w, tol); },
                        affine.Size(), std::move(omegas), spacing, threads);
}

TSVDBasis TruncatedSVD(const Eigen::MatrixXcd &D, double tol)
{
  if (D.size() == 0 || D.cwiseAbs().maxCoeff() == 0.0)
  {
    throw ConfigError("snapshot matrix is zero");
  }
  if (!(tol >= 0.0))
  {
    throw ConfigError("truncation tolerance must be non-negative");
  }
  const Eigen::Index rows = D.rows(), cols = D.cols();
  Eigen::MatrixXcd U, V;
  Eigen::VectorXd s;
  if (rows >= cols)
  {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(D);
    const Eigen::MatrixXcd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(rows, cols);
    Q = qr.householderQ() * Q;
    U = Q * svd.matrixU();
    V = svd.matrixV();
    s = svd.singularValues();
  }
  else
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U = svd.matrixU();
    V = svd.matrixV();
    s = svd.singularValues();
  }
  int M = 0;
  for (Eigen::Index k = 0; k < s.size(); k++)
  {
    if (s[k] / s[0] > tol)
    {
      M++;
    }
  }
  M = std::max(M, 1);
  TSVDBasis basis;
  basis.U = U.leftCols(M);
  basis.V = V.leftCols(M);
  basis.sigma = s;
  basis.rank = M;
  basis.tol = tol;
  return basis;
}

Bases TruncatedSVD(const SnapshotSet &snapshots, double tol)
{
  Bases b;
  for (int i = 0; i < 3; i++)
  {
    b[i] = TruncatedSVD(snapshots.D[i], tol);
  }
  return b;
}

namespace
{

// Factor of the conductivity pairing of [U_i theta0_i] restricted to supp(Msigma).
void ProjectConductivity(const AffineSystem &affine, const Bases &bases, ReducedSystem &red)
{
  int cols = 0;
  for (int i = 0; i < 3; i++)
  {
    red.T_offset[i] = cols;
    cols += bases[i].rank + 1;
  }
  std::vector<int> support;
  for (int k = 0; k < affine.Msigma.outerSize(); k++)
  {
    if (affine.Msigma.coeff(k, k) > 0.0)
    {
      support.push_back(k);
    }
  }
  const int ns = static_cast<int>(support.size());
  if (ns == 0)
  {
    red.T = Eigen::MatrixXcd::Zero(1, cols);
    return;
  }
  std::vector<int> local(affine.Size(), -1);
  for (int k = 0; k < ns; k++)
  {
    local[support[k]] = k;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < affine.Msigma.outerSize(); k++)
  {
    for (RealSparse::InnerIterator it(affine.Msigma, k); it; ++it)
    {
      if (local[it.row()] >= 0 && local[it.col()] >= 0)
      {
        trip.emplace_back(local[it.row()], local[it.col()], it.value());
      }
    }
  }
  RealSparse Ms(ns, ns);
  Ms.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<RealSparse> llt(Ms);
  if (llt.info() != Eigen::Success)
  {
    throw SolverError("conductivity mass factorisation failed",
                      std::numeric_limits<double>::infinity());
  }

  Eigen::MatrixXcd Y(ns, cols);
  for (int i = 0; i < 3; i++)
  {
    const int o = red.T_offset[i], m = bases[i].rank;
    for (int k = 0; k < ns; k++)
    {
      Y.row(k).segment(o, m) = bases[i].U.row(support[k]);
      Y(k, o + m) = affine.theta0[i][support[k]];
    }
  }
  const Eigen::MatrixXcd PY = llt.permutationP() * Y;
  Eigen::MatrixXd re = PY.real(), im = PY.imag();
  re = llt.matrixU() * re;
  im = llt.matrixU() * im;
  Eigen::MatrixXcd Z(ns, cols);
  Z.real() = re;
  Z.imag() = im;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  const int k = std::min(ns, cols);
  red.T = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

}  // namespace

ReducedSystem ProjectAffine(const AffineSystem &affine, const Bases &bases)
{
  for (const auto &basis : bases)
  {
    if (basis.U.rows() != affine.Size())
    {
      throw ConfigError("basis size does not match the affine system");
    }
  }
  ReducedSystem red;
  red.alpha = affine.alpha;
  std::array<Eigen::MatrixXcd, 3> KU;
  for (int i = 0; i < 3; i++)
  {
    const Eigen::MatrixXcd &U = bases[i].U;
    KU[i] = affine.K * U;
    red.A0[i] = U.adjoint() * (affine.A0 * U);
    red.A1[i] = U.adjoint() * (affine.A1 * U);
    red.r1[i] = U.adjoint() * affine.r1[i];
  }
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      red.K[i][j] = bases[i].U.adjoint() * KU[j];
    }
  }
  ProjectConductivity(affine, bases, red);
  return red;
}

OnlineResult ReducedSolve(const ReducedSystem &red, double omega)
{
  if (!(omega > 0.0))
  {
    throw ConfigError("omega must be positive");
  }
  OnlineResult out;
  for (int i = 0; i < 3; i++)
  {
    const Eigen::MatrixXcd A = red.Matrix(i, omega);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto &sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    out.kappa[i] = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (!(smin > 0.0) || !std::isfinite(out.kappa[i]))
    {
      throw SolverError("singular reduced matrix at omega=" + std::to_string(omega) +
                          ", kappa=" + std::to_string(out.kappa[i]),
                        std::numeric_limits<double>::infinity());
    }
    out.p[i] = A.partialPivLu().solve(omega * red.r1[i]);
  }
  return out;
}

TensorPair ReducedTensors(const ReducedSystem &red, const std::array<Eigen::VectorXcd, 3> &p,
                          double omega)
{
  std::array<Eigen::VectorXcd, 3> v;
  for (int i = 0; i < 3; i++)
  {
    const int m = red.Rank(i);
    if (p[i].size() != m)
    {
      throw ConfigError("reduced coefficients do not match the reduced system");
    }
    Eigen::VectorXcd z(m + 1);
    z.head(m) = p[i];
    z(m) = 1.0;
    v[i] = red.T.middleCols(red.T_offset[i], m + 1) * z;
  }
  Pairings pr;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      pr.KK(i, j) = p[i].dot(red.K[i][j] * p[j]);
      pr.UU(i, j) = v[i].dot(v[j]);
    }
  }
  return TensorsFromPairings(pr, red.alpha, omega);
}

OnlineResult OnlineSolve(const ReducedSystem &red, double omega)
{
  OnlineResult out = ReducedSolve(red, omega);
  out.tensors = ReducedTensors(red, out.p, omega);
  return out;
}

}  // namespace mpt
