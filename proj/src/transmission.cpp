// SPDX-License-Identifier: Apache-2.0

#include "mpt/transmission.hpp"

#include <string>
#include <Eigen/Dense>

namespace mpt
{

namespace
{

RegionWeights Uniform(const Mesh &mesh, double value)
{
  RegionWeights w;
  for (const auto &name : mesh.region_names)
  {
    w[name] = value;
  }
  return w;
}

bool AllZero(const RegionWeights &w)
{
  for (const auto &[tag, v] : w)
  {
    if (v != 0.0)
    {
      return false;
    }
  }
  return true;
}

Vec3 Cross(int direction, const Vec3 &x)
{
  return Vec3::Unit(direction).cross(x);
}

}  // namespace

Eigen::VectorXd InterpolateCrossField(const Mesh &mesh, int direction)
{
  if (direction < 0 || direction > 2)
  {
    throw ConfigError("direction must be 0, 1 or 2");
  }
  Eigen::VectorXd x(mesh.NumEdges());
  for (int e = 0; e < mesh.NumEdges(); e++)
  {
    const Vec3 &a = mesh.vertices[mesh.edges[e][0]];
    const Vec3 &b = mesh.vertices[mesh.edges[e][1]];
    x[e] = Cross(direction, 0.5 * (a + b)).dot(b - a);
  }
  return x;
}

RegionWeights InversePermeability(const Mesh &mesh, const MaterialTable &materials)
{
  RegionWeights w;
  for (const auto &name : mesh.region_names)
  {
    w[name] = 1.0 / materials.Get(name).mu_r;
  }
  return w;
}

RegionWeights Conductivity(const Mesh &mesh, const MaterialTable &materials)
{
  RegionWeights w;
  for (const auto &name : mesh.region_names)
  {
    const Material &m = materials.Get(name);
    w[name] = m.is_object ? m.sigma_star : 0.0;
  }
  return w;
}

RegionWeights ExteriorIndicator(const Mesh &mesh, const MaterialTable &materials)
{
  RegionWeights w;
  for (const auto &name : mesh.region_names)
  {
    w[name] = materials.Get(name).is_object ? 0.0 : 1.0;
  }
  return w;
}

double DefaultEpsilon(const EdgeSpace &space)
{
  const RealSparse K = RestrictToFree(AssembleCurlCurl(space, Uniform(*space.mesh, 1.0)), space);
  return 1e-10 * MeanDiagonal(K);
}

Theta0Solution SolveTheta0(std::shared_ptr<const EdgeSpace> space,
                           const MaterialTable &materials, double epsilon, double tol)
{
  if (!(epsilon > 0.0))
  {
    throw ConfigError("regularisation epsilon must be positive");
  }
  const Mesh &mesh = *space->mesh;
  Theta0Solution sol;
  sol.space = space;
  sol.epsilon = epsilon;
  sol.K = RestrictToFree(AssembleCurlCurl(*space, InversePermeability(mesh, materials)), *space);
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    const Material &m = materials.Get(mesh.RegionOf(t));
    if (m.is_object)
    {
      sol.contrast_volume += (1.0 - 1.0 / m.mu_r) * mesh.SignedVolume(t);
    }
  }

  std::array<Eigen::VectorXd, 3> rhs;
  bool any = false;
  for (int i = 0; i < 3; i++)
  {
    rhs[i] = RestrictToFree(AssembleTheta0Rhs(*space, i, materials), *space);
    any = any || rhs[i].squaredNorm() > 0.0;
  }
  if (!any)
  {
    for (auto &x : sol.x)
    {
      x = Eigen::VectorXd::Zero(space->n_dof);
    }
    return sol;
  }
  const RealSparse A =
    sol.K + epsilon * RestrictToFree(AssembleMass(*space, Uniform(mesh, 1.0)), *space);
  SparseSolver<double> solver(A);
  for (int i = 0; i < 3; i++)
  {
    sol.x[i] = solver.Solve(rhs[i], tol);
  }
  return sol;
}

ComplexSparse AffineSystem::Matrix(double omega) const
{
  return A0.cast<Complex>() + omega * A1;
}

AffineSystem BuildAffineSystem(const Theta0Solution &theta0, const MaterialTable &materials,
                               double alpha)
{
  if (!(alpha > 0.0))
  {
    throw ConfigError("object size alpha must be positive");
  }
  const EdgeSpace &space = *theta0.space;
  const Mesh &mesh = *space.mesh;
  for (const auto &x : theta0.x)
  {
    if (x.size() != space.n_dof)
    {
      throw ConfigError("theta0 does not belong to this edge space");
    }
  }
  AffineSystem sys;
  sys.space = theta0.space;
  sys.alpha = alpha;
  sys.epsilon = theta0.epsilon;
  sys.K = theta0.K;

  const RegionWeights exterior = ExteriorIndicator(mesh, materials);
  sys.A0 = sys.K;
  if (!AllZero(exterior))
  {
    sys.A0 += theta0.epsilon * RestrictToFree(AssembleMass(space, exterior), space);
  }
  const RegionWeights sigma = Conductivity(mesh, materials);
  sys.Msigma = AllZero(sigma) ? RealSparse(space.n_dof, space.n_dof)
                              : RestrictToFree(AssembleMass(space, sigma), space);
  const double scale = alpha * alpha * kMu0;
  sys.A1 = Complex(0.0, -scale) * sys.Msigma.cast<Complex>();

  for (int t = 0; t < mesh.NumTets(); t++)
  {
    if (sigma.at(mesh.RegionOf(t)) == 0.0)
    {
      continue;
    }
    for (int e : mesh.tet_edges[t])
    {
      if (space.dirichlet[e])
      {
        throw ConfigError("conducting region touches the outer boundary");
      }
    }
  }
  for (int i = 0; i < 3; i++)
  {
    sys.theta0[i] = theta0.x[i] + RestrictToFree(InterpolateCrossField(mesh, i), space);
    sys.b[i] = sys.Msigma * sys.theta0[i];
    sys.r1[i] = Complex(0.0, scale) * sys.b[i].cast<Complex>();
  }
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      sys.c(i, j) = sys.theta0[i].dot(sys.b[j]);
    }
  }
  return sys;
}

ComplexSparse AssembleTheta1Matrix(const EdgeSpace &space, const MaterialTable &materials,
                                   double alpha, double epsilon, double omega)
{
  const Mesh &mesh = *space.mesh;
  std::vector<double> inv_mu(mesh.region_names.size());
  std::vector<Complex> mass(mesh.region_names.size());
  for (std::size_t r = 0; r < inv_mu.size(); r++)
  {
    const Material &m = materials.Get(mesh.region_names[r]);
    inv_mu[r] = 1.0 / m.mu_r;
    mass[r] = m.is_object ? Complex(0.0, -alpha * alpha * omega * kMu0 * m.sigma_star)
                          : Complex(epsilon, 0.0);
  }
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.NumTets()) * 36);
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    TetGeometry geo(mesh, t);
    const int r = mesh.tet_region[t];
    Eigen::Matrix<double, 6, 6> Kl, Ml = Eigen::Matrix<double, 6, 6>::Zero();
    std::array<Vec3, 6> curl;
    for (int k = 0; k < 6; k++)
    {
      curl[k] = geo.Curl(k);
    }
    for (int k = 0; k < 6; k++)
    {
      for (int l = 0; l < 6; l++)
      {
        Kl(k, l) = geo.volume * curl[k].dot(curl[l]);
      }
    }
    for (const auto &p : TetRule::Points())
    {
      std::array<Vec3, 6> n;
      for (int k = 0; k < 6; k++)
      {
        n[k] = geo.Basis(k, p);
      }
      for (int k = 0; k < 6; k++)
      {
        for (int l = 0; l < 6; l++)
        {
          Ml(k, l) += TetRule::kWeight * geo.volume * n[k].dot(n[l]);
        }
      }
    }
    for (int k = 0; k < 6; k++)
    {
      for (int l = 0; l < 6; l++)
      {
        const Complex v = inv_mu[r] * Kl(k, l) + mass[r] * Ml(k, l);
        trip.emplace_back(mesh.tet_edges[t][k], mesh.tet_edges[t][l], v);
      }
    }
  }
  ComplexSparse A(mesh.NumEdges(), mesh.NumEdges());
  A.setFromTriplets(trip.begin(), trip.end());
  return RestrictToFree(A, space);
}

std::array<Eigen::VectorXcd, 3> SolveTheta1Full(const AffineSystem &affine, double omega,
                                                double tol)
{
  if (!(omega > 0.0))
  {
    throw ConfigError("omega must be positive");
  }
  std::array<Eigen::VectorXcd, 3> q;
  bool any = false;
  for (const auto &r : affine.r1)
  {
    any = any || r.squaredNorm() > 0.0;
  }
  if (!any)
  {
    for (auto &v : q)
    {
      v = Eigen::VectorXcd::Zero(affine.Size());
    }
    return q;
  }
  SparseSolver<Complex> solver(affine.Matrix(omega));
  for (int i = 0; i < 3; i++)
  {
    try
    {
      q[i] = solver.Solve(affine.Rhs(i, omega), tol);
    }
    catch (const SolverError &e)
    {
      throw SolverError("theta1 solve failed at omega=" + std::to_string(omega) +
                          ", direction " + std::to_string(i + 1) + ": " + e.what(),
                        e.achieved_residual);
    }
  }
  return q;
}

}  // namespace mpt
