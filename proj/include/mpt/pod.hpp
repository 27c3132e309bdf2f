// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_POD_HPP
#define MPT_POD_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>
#include <Eigen/Core>
#include "mpt/tensors.hpp"
#include "mpt/transmission.hpp"

namespace mpt
{

enum class Spacing
{
  kLinear,
  kLog
};

Spacing ParseSpacing(const std::string &name);  // "lin" or "log"
std::string SpacingName(Spacing s);

// n frequencies from omega_min to omega_max inclusive; n = 1 gives {omega_min}.
std::vector<double> FrequencySamples(double omega_min, double omega_max, int n, Spacing spacing);

// n log-spaced points at the centres of n equal sub-intervals of [log w_min, log w_max].
// They avoid the endpoints and every point of the 13- and 21-point log grids.
std::vector<double> VerificationFrequencies(double omega_min, double omega_max, int n);

using Theta1Solutions = std::array<Eigen::VectorXcd, 3>;
using FomSolve = std::function<Theta1Solutions(double omega)>;

struct SnapshotSet
{
  std::vector<double> omega;           // strictly increasing
  std::array<Eigen::MatrixXcd, 3> D;   // column n is q_i(omega_n)
  Spacing spacing = Spacing::kLog;
  double seconds = 0.0;
};

// One FOM solve per frequency (three directions each). The frequencies are sorted first;
// duplicates are rejected.
SnapshotSet BuildSnapshots(const AffineSystem &affine, std::vector<double> omegas,
                           Spacing spacing, double tol = 1e-10, int threads = 1);
SnapshotSet BuildSnapshots(const FomSolve &solve, int n_dof, std::vector<double> omegas,
                           Spacing spacing, int threads = 1);

struct TSVDBasis
{
  Eigen::MatrixXcd U;            // N_d x M, orthonormal columns
  Eigen::VectorXd sigma;         // all min(N_d, N) singular values, descending
  Eigen::MatrixXcd V;            // N x M
  int rank = 0;                  // M
  double tol = 0.0;

  Eigen::VectorXd Ratios() const { return sigma / sigma[0]; }
};

// D = U S V^H by a Householder QR of D followed by an SVD of the small triangular factor.
// M = #{i : sigma_i / sigma_1 > tol}, at least 1. Throws ConfigError on a zero matrix.
TSVDBasis TruncatedSVD(const Eigen::MatrixXcd &D, double tol);

using Bases = std::array<TSVDBasis, 3>;
Bases TruncatedSVD(const SnapshotSet &snapshots, double tol);

// Per-direction reduced operators plus the output contractions, so that online work never
// touches an N_d-sized object.
struct ReducedSystem
{
  double alpha = 0.0;
  std::array<Eigen::MatrixXcd, 3> A0, A1;  // U_i^H A0 U_i, U_i^H A1 U_i
  std::array<Eigen::VectorXcd, 3> r1;      // U_i^H r1_i
  std::array<std::array<Eigen::MatrixXcd, 3>, 3> K;  // U_i^H K U_j

  // Triangular factor of L^T P [U_0 theta0_0 | U_1 theta0_1 | U_2 theta0_2] on the support
  // of Msigma, where Msigma = P^T L L^T P there. Block i starts at column T_offset[i] and
  // has M_i + 1 columns, so u_i^H Msigma u_j = (T_i z_i)^H (T_j z_j) with z_i = [p_i; 1].
  Eigen::MatrixXcd T;
  std::array<int, 3> T_offset{};

  int Rank(int i) const { return static_cast<int>(A0[i].rows()); }
  Eigen::MatrixXcd Matrix(int i, double omega) const { return A0[i] + omega * A1[i]; }
};

ReducedSystem ProjectAffine(const AffineSystem &affine, const Bases &bases);

struct OnlineResult
{
  std::array<Eigen::VectorXcd, 3> p;
  TensorPair tensors;
  std::array<double, 3> kappa{};  // 2-norm condition number of A^M(omega)
};

// Dense M x M solve per direction; fills p and kappa. Throws SolverError on a singular
// reduced matrix.
OnlineResult ReducedSolve(const ReducedSystem &reduced, double omega);

// R and I from the stored contractions and the reduced coefficients.
TensorPair ReducedTensors(const ReducedSystem &reduced, const std::array<Eigen::VectorXcd, 3> &p,
                          double omega);

// ReducedSolve followed by ReducedTensors.
OnlineResult OnlineSolve(const ReducedSystem &reduced, double omega);

}  // namespace mpt

#endif  // MPT_POD_HPP
