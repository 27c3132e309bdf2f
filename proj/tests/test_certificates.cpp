// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <doctest.h>
#include "mpt/certificates.hpp"
#include "mpt/errors.hpp"
#include "support.hpp"

using namespace mpt;

namespace
{

struct Fixture
{
  test::SmallProblem p = test::MakeSmallProblem();
  RealSparse M0 = RieszMass(*p.space);
  SnapshotSet snaps =
    BuildSnapshots(p.affine, FrequencySamples(1e2, 1e8, 8, Spacing::kLog), Spacing::kLog, 1e-12);
  Bases bases = TruncatedSVD(snaps, 1e-3);
  ReducedSystem red = ProjectAffine(p.affine, bases);
  CertificateData cert = BuildCertificateOffline(p.affine, bases, M0, 1e2);
};

const Fixture &Shared()
{
  static const Fixture f;
  return f;
}

Eigen::MatrixXcd DenseW(const Fixture &f, int i)
{
  const int m = f.bases[i].rank;
  const Eigen::MatrixXcd A0 = Eigen::MatrixXd(f.p.affine.A0).cast<Complex>();
  const Eigen::MatrixXcd A1 = Eigen::MatrixXcd(f.p.affine.A1);
  Eigen::MatrixXcd W(f.p.affine.Size(), 2 * m + 1);
  W.col(0) = f.p.affine.r1[i];
  W.middleCols(1, m) = A0 * f.bases[i].U;
  W.middleCols(1 + m, m) = A1 * f.bases[i].U;
  return W;
}

}  // namespace

TEST_SUITE("certificates")
{
  TEST_CASE("Gram blocks against a dense Riesz solve")
  {
    const Fixture &f = Shared();
    const Eigen::MatrixXd M0 = Eigen::MatrixXd(f.M0);
    const Eigen::LLT<Eigen::MatrixXd> llt(M0);
    for (int i = 0; i < 3; i++)
    {
      const Eigen::MatrixXcd Wi = DenseW(f, i);
      const Eigen::MatrixXcd Xi = llt.solve(Wi.real()).cast<Complex>() +
                                  Complex(0, 1) * llt.solve(Wi.imag()).cast<Complex>();
      for (int j = 0; j < 3; j++)
      {
        const Eigen::MatrixXcd Gij = Xi.adjoint() * DenseW(f, j);
        CAPTURE(i);
        CAPTURE(j);
        CHECK((f.cert.G[i][j].adjoint() - Gij.adjoint()).norm() <= 1e-10 * Gij.norm());
      }
    }
  }

  TEST_CASE("residual norms against the lifted residual")
  {
    const Fixture &f = Shared();
    const Eigen::MatrixXd M0 = Eigen::MatrixXd(f.M0);
    const Eigen::LLT<Eigen::MatrixXd> llt(M0);
    for (double omega : {5e2, 2e5, 6e7})
    {
      const OnlineResult on = ReducedSolve(f.red, omega);
      const ResidualNorms fac = ResidualNormsFactor(f.cert, on.p, omega);
      const ResidualNorms exp = ResidualNormsExpansion(f.cert, on.p, omega);
      const Eigen::MatrixXcd A = Eigen::MatrixXcd(f.p.affine.Matrix(omega));
      std::array<Eigen::VectorXcd, 3> r;
      for (int i = 0; i < 3; i++)
      {
        r[i] = f.p.affine.Rhs(i, omega) - A * (f.bases[i].U * on.p[i]);
      }
      auto riesz = [&](const Eigen::VectorXcd &v) {
        return v.real().dot(llt.solve(v.real())) + v.imag().dot(llt.solve(v.imag()));
      };
      CAPTURE(omega);
      for (int i = 0; i < 3; i++)
      {
        const double ref = riesz(r[i]);
        CHECK(test::RelDiff(fac.self(i), ref) < 1e-6);
        CHECK(test::RelDiff(exp.self(i), ref) < 1e-3);
        for (int j = 0; j < 3; j++)
        {
          const double dref = riesz(r[i] - r[j]);
          CHECK(std::abs(fac.diff(i, j) - dref) <= 1e-6 * std::max(ref, dref));
        }
      }
    }
  }

  TEST_CASE("stability constant against a dense generalized eigensolve")
  {
    const Fixture &f = Shared();
    const double a = f.p.alpha;
    const Eigen::MatrixXd H =
      Eigen::MatrixXd(f.p.affine.A0) + 1e2 * a * a * kMu0 * Eigen::MatrixXd(f.p.affine.Msigma);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::MatrixXd(f.M0),
                                                                 Eigen::EigenvaluesOnly);
    const double ref = es.eigenvalues()[0] / std::sqrt(2.0);
    CHECK(test::RelDiff(f.cert.lambda_min, ref) < 1e-4);
    CHECK(f.cert.AlphaLB(1e3) == f.cert.lambda_min);
    CHECK(f.cert.AlphaLB(50.0) == doctest::Approx(0.5 * f.cert.lambda_min));
    CHECK_THROWS_AS(StabilityConstant(f.p.affine, f.M0, 0.0), ConfigError);
  }

  TEST_CASE("bounds contain the reduced-order error")
  {
    const Fixture &f = Shared();
    CHECK(f.bases[0].rank < 8);
    const Eigen::Matrix3d N0 = ComputeN0(f.p.theta0, f.p.alpha);
    for (double omega : VerificationFrequencies(1e2, 1e8, 7))
    {
      const TensorPair full =
        ComputeRI(f.p.affine, SolveTheta1Full(f.p.affine, omega, 1e-12), omega);
      const OnlineResult on = OnlineSolve(f.red, omega);
      const Eigen::Matrix3d delta = OnlineDelta(f.cert, on.p, omega, f.p.alpha);
      MPTSample s = MakeSample(omega, N0, on.tensors);
      s.delta = delta;
      const CertificateBand band = MakeCertificateBand(s);
      CAPTURE(omega);
      for (int k = 0; k < 9; k++)
      {
        CHECK(std::abs(on.tensors.R(k) - full.R(k)) <= delta(k));
        CHECK(std::abs(on.tensors.I(k) - full.I(k)) <= delta(k));
        CHECK(band.real_lo(k) <= N0(k) + full.R(k));
        CHECK(band.real_hi(k) >= N0(k) + full.R(k));
        CHECK(band.imag_lo(k) <= full.I(k));
        CHECK(band.imag_hi(k) >= full.I(k));
      }
    }
  }

  TEST_CASE("certificate vector and input checks")
  {
    const Eigen::VectorXcd p = Eigen::Vector2cd(Complex(1, 2), Complex(3, 0));
    const Eigen::VectorXcd w = CertificateVector(p, 10.0);
    REQUIRE(w.size() == 5);
    CHECK(w(0) == Complex(10, 0));
    CHECK(w(1) == Complex(-1, -2));
    CHECK(w(4) == Complex(-30, 0));
    const Fixture &f = Shared();
    std::array<Eigen::VectorXcd, 3> wrong{p, p, p};
    CHECK_THROWS_AS(ResidualNormsFactor(f.cert, wrong, 1.0), ConfigError);
    CHECK_THROWS_AS(MakeCertificateBand(MPTSample{}), ConfigError);
  }
}
