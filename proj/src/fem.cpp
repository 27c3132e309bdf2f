// SPDX-License-Identifier: Apache-2.0

#include "mpt/fem.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <Eigen/Dense>

namespace mpt
{

namespace
{

std::vector<double> WeightsPerRegion(const Mesh &mesh, const RegionWeights &weight)
{
  std::vector<double> w(mesh.region_names.size(), 0.0);
  std::vector<char> used(mesh.region_names.size(), 0);
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    used[mesh.tet_region[t]] = 1;
  }
  for (std::size_t r = 0; r < w.size(); r++)
  {
    auto it = weight.find(mesh.region_names[r]);
    if (it == weight.end())
    {
      if (used[r])
      {
        throw ConfigError("no weight given for region '" + mesh.region_names[r] + "'");
      }
      continue;
    }
    w[r] = it->second;
  }
  return w;
}

template <typename LocalFn>
RealSparse AssembleEdgeForm(const EdgeSpace &space, const RegionWeights &weight,
                            LocalFn &&local)
{
  const Mesh &mesh = *space.mesh;
  const auto w = WeightsPerRegion(mesh, weight);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.NumTets()) * 36);
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    const double wt = w[mesh.tet_region[t]];
    if (wt == 0.0)
    {
      continue;
    }
    TetGeometry geo(mesh, t);
    Eigen::Matrix<double, 6, 6> K = local(geo);
    for (int k = 0; k < 6; k++)
    {
      for (int l = 0; l < 6; l++)
      {
        trip.emplace_back(mesh.tet_edges[t][k], mesh.tet_edges[t][l], wt * K(k, l));
      }
    }
  }
  RealSparse A(mesh.NumEdges(), mesh.NumEdges());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

}  // namespace

EdgeSpace EdgeSpace::Build(std::shared_ptr<const Mesh> mesh)
{
  EdgeSpace space;
  space.mesh = mesh;
  space.dirichlet.assign(mesh->NumEdges(), 0);

  std::map<std::pair<int, int>, int> edge_lookup;
  for (int e = 0; e < mesh->NumEdges(); e++)
  {
    edge_lookup[{mesh->edges[e][0], mesh->edges[e][1]}] = e;
  }
  for (const auto &f : mesh->boundary_faces)
  {
    // Face vertices are sorted, so every pair is already ascending.
    for (auto [a, b] : {std::pair{f[0], f[1]}, std::pair{f[0], f[2]}, std::pair{f[1], f[2]}})
    {
      space.dirichlet[edge_lookup.at({a, b})] = 1;
    }
  }
  space.dof_of_edge.assign(mesh->NumEdges(), -1);
  for (int e = 0; e < mesh->NumEdges(); e++)
  {
    if (!space.dirichlet[e])
    {
      space.dof_of_edge[e] = space.n_dof++;
      space.edge_of_dof.push_back(e);
    }
  }
  return space;
}

TetGeometry::TetGeometry(const Mesh &mesh, int tet)
{
  const auto &v = mesh.tets[tet];
  const Vec3 &x0 = mesh.vertices[v[0]];
  Eigen::Matrix3d J;
  J << mesh.vertices[v[1]] - x0, mesh.vertices[v[2]] - x0, mesh.vertices[v[3]] - x0;
  volume = J.determinant() / 6.0;
  const Eigen::Matrix3d Jinv = J.inverse();
  grad[1] = Jinv.row(0).transpose();
  grad[2] = Jinv.row(1).transpose();
  grad[3] = Jinv.row(2).transpose();
  grad[0] = -(grad[1] + grad[2] + grad[3]);
  for (int k = 0; k < 6; k++)
  {
    sign[k] = v[kTetEdge[k][0]] < v[kTetEdge[k][1]] ? 1.0 : -1.0;
  }
}

Vec3 TetGeometry::Basis(int k, const Eigen::Vector4d &l) const
{
  const int a = kTetEdge[k][0], b = kTetEdge[k][1];
  return sign[k] * (l[a] * grad[b] - l[b] * grad[a]);
}

Vec3 TetGeometry::Curl(int k) const
{
  const int a = kTetEdge[k][0], b = kTetEdge[k][1];
  return 2.0 * sign[k] * grad[a].cross(grad[b]);
}

const std::array<Eigen::Vector4d, 4> &TetRule::Points()
{
  static const std::array<Eigen::Vector4d, 4> pts = [] {
    const double a = 0.5854101966249685, b = 0.1381966011250105;
    return std::array<Eigen::Vector4d, 4>{Eigen::Vector4d(a, b, b, b),
                                          Eigen::Vector4d(b, a, b, b),
                                          Eigen::Vector4d(b, b, a, b),
                                          Eigen::Vector4d(b, b, b, a)};
  }();
  return pts;
}

RealSparse AssembleCurlCurl(const EdgeSpace &space, const RegionWeights &weight)
{
  for (const auto &[tag, w] : weight)
  {
    if (!(w > 0.0))
    {
      throw ConfigError("curl-curl weight for '" + tag + "' must be positive");
    }
  }
  return AssembleEdgeForm(space, weight, [](const TetGeometry &geo) {
    Eigen::Matrix<double, 6, 6> K;
    std::array<Vec3, 6> c;
    for (int k = 0; k < 6; k++)
    {
      c[k] = geo.Curl(k);
    }
    for (int k = 0; k < 6; k++)
    {
      for (int l = 0; l < 6; l++)
      {
        K(k, l) = geo.volume * c[k].dot(c[l]);
      }
    }
    return K;
  });
}

RealSparse AssembleMass(const EdgeSpace &space, const RegionWeights &weight)
{
  bool any_positive = false;
  for (const auto &[tag, w] : weight)
  {
    if (!(w >= 0.0))
    {
      throw ConfigError("mass weight for '" + tag + "' must be non-negative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive)
  {
    throw ConfigError("mass weights are all zero");
  }
  return AssembleEdgeForm(space, weight, [](const TetGeometry &geo) {
    Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
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
          M(k, l) += TetRule::kWeight * geo.volume * n[k].dot(n[l]);
        }
      }
    }
    return M;
  });
}

Eigen::VectorXd AssembleTheta0Rhs(const EdgeSpace &space, int direction,
                                  const MaterialTable &materials)
{
  if (direction < 0 || direction > 2)
  {
    throw ConfigError("direction must be 0, 1 or 2");
  }
  const Mesh &mesh = *space.mesh;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.NumEdges());
  std::vector<double> contrast(mesh.region_names.size(), 0.0);
  for (std::size_t r = 0; r < contrast.size(); r++)
  {
    const Material &m = materials.Get(mesh.region_names[r]);
    contrast[r] = m.is_object ? 1.0 - 1.0 / m.mu_r : 0.0;
  }
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    const double c = contrast[mesh.tet_region[t]];
    if (c == 0.0)
    {
      continue;
    }
    TetGeometry geo(mesh, t);
    for (int k = 0; k < 6; k++)
    {
      rhs[mesh.tet_edges[t][k]] += 2.0 * c * geo.volume * geo.Curl(k)[direction];
    }
  }
  return rhs;
}

Eigen::VectorXd DiscreteGradient(const Mesh &mesh, int vertex)
{
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh.NumEdges());
  for (int e = 0; e < mesh.NumEdges(); e++)
  {
    if (mesh.edges[e][0] == vertex)
    {
      g[e] = -1.0;
    }
    else if (mesh.edges[e][1] == vertex)
    {
      g[e] = 1.0;
    }
  }
  return g;
}

template <typename Scalar>
SparseMatrix<Scalar> RestrictToFree(const SparseMatrix<Scalar> &A, const EdgeSpace &space)
{
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(A.nonZeros());
  for (int col = 0; col < A.outerSize(); col++)
  {
    const int j = space.dof_of_edge[col];
    if (j < 0)
    {
      continue;
    }
    for (typename SparseMatrix<Scalar>::InnerIterator it(A, col); it; ++it)
    {
      const int i = space.dof_of_edge[it.row()];
      if (i >= 0)
      {
        trip.emplace_back(i, j, it.value());
      }
    }
  }
  SparseMatrix<Scalar> R(space.n_dof, space.n_dof);
  R.setFromTriplets(trip.begin(), trip.end());
  return R;
}

template <typename Scalar>
Vector<Scalar> RestrictToFree(const Vector<Scalar> &x, const EdgeSpace &space)
{
  Vector<Scalar> r(space.n_dof);
  for (int d = 0; d < space.n_dof; d++)
  {
    r[d] = x[space.edge_of_dof[d]];
  }
  return r;
}

template <typename Scalar>
Vector<Scalar> ExtendByZero(const Vector<Scalar> &x, const EdgeSpace &space)
{
  Vector<Scalar> full = Vector<Scalar>::Zero(space.NumEdges());
  for (int d = 0; d < space.n_dof; d++)
  {
    full[space.edge_of_dof[d]] = x[d];
  }
  return full;
}

template <typename Scalar>
SparseSolver<Scalar>::SparseSolver(const SparseMatrix<Scalar> &A) : A_(A)
{
  if (A_.rows() != A_.cols())
  {
    throw ConfigError("sparse solve needs a square matrix");
  }
  if (A_.rows() == 0)
  {
    return;
  }
  A_.makeCompressed();
  if constexpr (std::is_same_v<Scalar, double>)
  {
    const RealSparse At = A_.transpose();
    const double norm = A_.cwiseAbs().sum();
    if ((A_ - At).cwiseAbs().sum() <= 1e-14 * norm)
    {
      ldlt_ = std::make_unique<Eigen::CholmodSimplicialLDLT<RealSparse>>(A_);
      if (ldlt_->info() != Eigen::Success)
      {
        throw SolverError("sparse LDL^T factorisation failed",
                          std::numeric_limits<double>::infinity());
      }
      return;
    }
    slu_ = std::make_unique<Eigen::SparseLU<RealSparse>>(A_);
    if (slu_->info() != Eigen::Success)
    {
      throw SolverError("sparse LU factorisation failed: " + slu_->lastErrorMessage(),
                        std::numeric_limits<double>::infinity());
    }
    return;
  }
  lu_ = std::make_unique<Eigen::UmfPackLU<SparseMatrix<Scalar>>>();
  lu_->analyzePattern(A_);
  lu_->factorize(A_);
  // A zero pivot is only a warning here; the residual check in Solve decides.
  const int code = lu_->umfpackFactorizeReturncode();
  if (code < 0)
  {
    throw SolverError("sparse factorisation failed (UMFPACK status " + std::to_string(code) + ")",
                      std::numeric_limits<double>::infinity());
  }
}

template <typename Scalar>
Vector<Scalar> SparseSolver<Scalar>::Apply(const Vector<Scalar> &r) const
{
  if constexpr (std::is_same_v<Scalar, double>)
  {
    if (ldlt_)
    {
      return ldlt_->solve(r);
    }
    return slu_->solve(r);
  }
  return lu_->solve(r);
}

template <typename Scalar>
Vector<Scalar> SparseSolver<Scalar>::Solve(const Vector<Scalar> &b, double tol) const
{
  if (b.size() != A_.rows())
  {
    throw ConfigError("right-hand side size does not match the matrix");
  }
  Vector<Scalar> x = Vector<Scalar>::Zero(b.size());
  const double nb = b.norm();
  if (nb == 0.0)
  {
    return x;
  }
  Vector<Scalar> r = b;
  double res = 1.0;
  for (int step = 0; step < 4; step++)
  {
    x += Apply(r);
    r = b - A_ * x;
    res = r.norm() / nb;
    if (!std::isfinite(res))
    {
      break;
    }
    if (res <= tol)
    {
      return x;
    }
  }
  throw SolverError("sparse solve did not reach the requested residual", res);
}

double MeanDiagonal(const RealSparse &A)
{
  return A.rows() > 0 ? A.diagonal().mean() : 0.0;
}

template RealSparse RestrictToFree(const RealSparse &, const EdgeSpace &);
template ComplexSparse RestrictToFree(const ComplexSparse &, const EdgeSpace &);
template Eigen::VectorXd RestrictToFree(const Eigen::VectorXd &, const EdgeSpace &);
template Eigen::VectorXcd RestrictToFree(const Eigen::VectorXcd &, const EdgeSpace &);
template Eigen::VectorXd ExtendByZero(const Eigen::VectorXd &, const EdgeSpace &);
template Eigen::VectorXcd ExtendByZero(const Eigen::VectorXcd &, const EdgeSpace &);
template class SparseSolver<double>;
template class SparseSolver<Complex>;

}  // namespace mpt
