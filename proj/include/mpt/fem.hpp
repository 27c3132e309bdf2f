// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_FEM_HPP
#define MPT_FEM_HPP

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>
#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/CholmodSupport>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include "mpt/errors.hpp"
#include "mpt/mesh.hpp"

namespace mpt
{

using Complex = std::complex<double>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RealSparse = SparseMatrix<double>;
using ComplexSparse = SparseMatrix<Complex>;

// Per-region coefficient, keyed by region tag.
using RegionWeights = std::map<std::string, double>;

// Lowest-order (Whitney) edge element space on a mesh. Edges lying on the outer boundary
// carry the essential condition n x u = 0 and have no degree of freedom.
struct EdgeSpace
{
  std::shared_ptr<const Mesh> mesh;
  std::vector<char> dirichlet;    // per edge
  std::vector<int> dof_of_edge;   // -1 on constrained edges
  std::vector<int> edge_of_dof;
  int n_dof = 0;

  static EdgeSpace Build(std::shared_ptr<const Mesh> mesh);
  int NumEdges() const { return mesh->NumEdges(); }
};

// Affine element data: barycentric gradients, volume, and the sign mapping each local
// edge onto its globally ascending orientation.
struct TetGeometry
{
  std::array<Vec3, 4> grad;
  double volume;
  std::array<double, 6> sign;

  TetGeometry(const Mesh &mesh, int tet);

  // Whitney function of local edge k at barycentric point l, globally oriented.
  Vec3 Basis(int k, const Eigen::Vector4d &l) const;
  // Its (constant) curl.
  Vec3 Curl(int k) const;
};

// Symmetric 4-point rule, exact for quadratics on a tet (barycentric points, unit weights
// summing to one).
struct TetRule
{
  static constexpr int kPoints = 4;
  static const std::array<Eigen::Vector4d, 4> &Points();
  static constexpr double kWeight = 0.25;
};

// sum_T w(region) int_T curl N_k . curl N_l over all edges (constrained ones included).
RealSparse AssembleCurlCurl(const EdgeSpace &space, const RegionWeights &weight);

// sum_T w(region) int_T N_k . N_l over all edges.
RealSparse AssembleMass(const EdgeSpace &space, const RegionWeights &weight);

// 2 int_B (1 - 1/mu_r) e_i . curl N_k for all edges; direction is 0, 1 or 2.
Eigen::VectorXd AssembleTheta0Rhs(const EdgeSpace &space, int direction,
                                  const MaterialTable &materials);

// Gradient of the hat function of vertex v expressed in edge coefficients.
Eigen::VectorXd DiscreteGradient(const Mesh &mesh, int vertex);

// Restriction of an all-edge operator to the free degrees of freedom.
template <typename Scalar>
struct LinearSystem
{
  SparseMatrix<Scalar> A;
  Vector<Scalar> b;
};

template <typename Scalar>
SparseMatrix<Scalar> RestrictToFree(const SparseMatrix<Scalar> &A, const EdgeSpace &space);

template <typename Scalar>
Vector<Scalar> RestrictToFree(const Vector<Scalar> &x, const EdgeSpace &space);

template <typename Scalar>
Vector<Scalar> ExtendByZero(const Vector<Scalar> &x, const EdgeSpace &space);

template <typename Scalar>
LinearSystem<Scalar> ApplyDirichlet(const SparseMatrix<Scalar> &A, const Vector<Scalar> &b,
                                    const EdgeSpace &space)
{
  return {RestrictToFree(A, space), RestrictToFree(b, space)};
}

// Sparse direct factorisation with residual-checked solves: LDL^T (CHOLMOD) for real
// symmetric matrices, Eigen's SparseLU for other real matrices and LU (UMFPACK) for complex
// ones, complex symmetric included.
template <typename Scalar>
class SparseSolver
{
public:
  explicit SparseSolver(const SparseMatrix<Scalar> &A);

  // Solve with up to a few steps of iterative refinement; throws SolverError if the
  // relative residual stays above tol.
  Vector<Scalar> Solve(const Vector<Scalar> &b, double tol = 1e-10) const;

  int Size() const { return static_cast<int>(A_.rows()); }

private:
  Vector<Scalar> Apply(const Vector<Scalar> &r) const;

  SparseMatrix<Scalar> A_;
  std::unique_ptr<Eigen::UmfPackLU<SparseMatrix<Scalar>>> lu_;
  std::unique_ptr<Eigen::CholmodSimplicialLDLT<RealSparse>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<RealSparse>> slu_;
};

template <typename Scalar>
Vector<Scalar> SolveSparse(const SparseMatrix<Scalar> &A, const Vector<Scalar> &b,
                           double tol = 1e-10)
{
  return SparseSolver<Scalar>(A).Solve(b, tol);
}

// Relative residual ||A x - b|| / ||b|| (0 when b = 0 and x = 0).
template <typename Scalar>
double RelativeResidual(const SparseMatrix<Scalar> &A, const Vector<Scalar> &x,
                        const Vector<Scalar> &b)
{
  const double nb = b.norm();
  const double nr = (A * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

double MeanDiagonal(const RealSparse &A);

}  // namespace mpt

#endif  // MPT_FEM_HPP
