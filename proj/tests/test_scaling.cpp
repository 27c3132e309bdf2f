// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include "mpt/certificates.hpp"
#include "mpt/errors.hpp"
#include "mpt/scaling.hpp"
#include "support.hpp"

using namespace mpt;

namespace
{

Sweep Direct(double sigma, double alpha, const std::vector<double> &omegas)
{
  const auto p = test::MakeSmallProblem(1.5, sigma, 2.0, alpha);
  Sweep sweep;
  sweep.alpha = alpha;
  sweep.materials = p.materials;
  const Eigen::Matrix3d N0 = ComputeN0(p.theta0, alpha);
  for (double w : omegas)
  {
    sweep.samples.push_back(
      MakeSample(w, N0, ComputeRI(p.affine, SolveTheta1Full(p.affine, w, 1e-12), w)));
  }
  return sweep;
}

void CheckSame(const Sweep &a, const Sweep &b, double tol)
{
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); k++)
  {
    const MPTSample &x = a.samples[k], &y = b.samples[k];
    CAPTURE(x.omega);
    CHECK(test::RelDiff(x.omega, y.omega) < 1e-14);
    const double scale = (x.N0 + x.R).norm() + x.I.norm();
    CHECK((x.N0 - y.N0).norm() <= tol * scale);
    CHECK((x.R - y.R).norm() <= tol * scale);
    CHECK((x.I - y.I).norm() <= tol * scale);
    CHECK((x.eig_real - y.eig_real).norm() <= tol * scale);
    CHECK((x.eig_imag - y.eig_imag).norm() <= tol * scale);
  }
}

}  // namespace

TEST_SUITE("scaling")
{
  TEST_CASE("conductivity lemma matches a recomputation")
  {
    const double s = 4.0;
    const std::vector<double> w{1e3, 1e5, 1e7};
    const Sweep base = Direct(5.96e6, 0.01, w);
    const Sweep scaled = ScaleConductivity(base, s);
    std::vector<double> ws;
    for (double x : w)
    {
      ws.push_back(x / s);
    }
    CheckSame(scaled, Direct(s * 5.96e6, 0.01, ws), 1e-8);
    CHECK(scaled.materials.Get("obj").sigma_star == s * 5.96e6);
    CHECK(scaled.alpha == 0.01);
  }

  TEST_CASE("size lemma matches a recomputation")
  {
    const double s = 2.5;
    const std::vector<double> w{1e3, 1e5, 1e7};
    Sweep base = Direct(5.96e6, 0.01, w);
    base.samples[1].delta = Eigen::Matrix3d::Constant(1e-9);
    const Sweep scaled = ScaleSize(base, s);
    std::vector<double> ws;
    for (double x : w)
    {
      ws.push_back(x / (s * s));
    }
    CheckSame(scaled, Direct(5.96e6, s * 0.01, ws), 1e-8);
    CHECK(scaled.alpha == doctest::Approx(0.025));
    CHECK((*scaled.samples[1].delta - Eigen::Matrix3d::Constant(s * s * s * 1e-9)).norm() <
          1e-20);
  }

  TEST_CASE("provenance and round trip")
  {
    const Sweep base = Direct(1e6, 0.01, {1e4, 1e6});
    const Sweep a = ScaleSize(ScaleConductivity(base, 3.0), 2.0);
    REQUIRE(a.provenance.size() == 2);
    CHECK(a.provenance[0].lemma == "conductivity");
    CHECK(a.provenance[0].sigma_before.at("obj") == 1e6);
    CHECK(a.provenance[0].sigma_before.count(kExteriorTag) == 0);
    CHECK(a.provenance[1].lemma == "size");
    CHECK(a.provenance[1].alpha_before == 0.01);
    CHECK(a.provenance[1].sigma_before.at("obj") == 3e6);
    const Sweep back = ScaleConductivity(ScaleSize(a, 0.5), 1.0 / 3.0);
    CheckSame(back, base, 1e-14);
    CHECK(back.materials.Get("obj").sigma_star == doctest::Approx(1e6));
  }

  TEST_CASE("transported certificates still bound the error")
  {
    const auto p = test::MakeSmallProblem(1.5, 1e6);
    const Bases bases = TruncatedSVD(
      BuildSnapshots(p.affine, FrequencySamples(1e2, 1e8, 6, Spacing::kLog), Spacing::kLog, 1e-12),
      1e-3);
    const ReducedSystem red = ProjectAffine(p.affine, bases);
    const CertificateData cert = BuildCertificateOffline(p.affine, bases, RieszMass(*p.space), 1e2);
    const Eigen::Matrix3d N0 = ComputeN0(p.theta0, p.alpha);
    Sweep rom;
    rom.alpha = p.alpha;
    rom.materials = p.materials;
    for (double w : VerificationFrequencies(1e2, 1e8, 5))
    {
      const OnlineResult on = OnlineSolve(red, w);
      MPTSample s = MakeSample(w, N0, on.tensors);
      s.delta = OnlineDelta(cert, on.p, w, p.alpha);
      rom.samples.push_back(s);
    }
    const double sc = 10.0, ss = 1.5;
    const auto pc = test::MakeSmallProblem(1.5, sc * 1e6);
    const auto ps = test::MakeSmallProblem(1.5, 1e6, 2.0, ss * p.alpha);
    const Sweep byc = ScaleConductivity(rom, sc);
    const Sweep bys = ScaleSize(rom, ss);
    int covered = 0, total = 0;
    for (std::size_t k = 0; k < rom.samples.size(); k++)
    {
      for (const auto &[sweep, prob] :
           {std::pair{&byc, &pc.affine}, std::pair{&bys, &ps.affine}})
      {
        const MPTSample &s = sweep->samples[k];
        const TensorPair f = ComputeRI(*prob, SolveTheta1Full(*prob, s.omega, 1e-12), s.omega);
        for (int e = 0; e < 9; e++)
        {
          total++;
          covered += (*s.delta)(e) >= std::abs(f.R(e) - s.R(e)) &&
                     (*s.delta)(e) >= std::abs(f.I(e) - s.I(e));
        }
      }
    }
    CHECK(covered == total);
  }

  TEST_CASE("invalid input")
  {
    const Sweep base = Direct(1e6, 0.01, {1e4});
    for (double s : {0.0, -1.0, std::nan(""), std::numeric_limits<double>::infinity()})
    {
      CHECK_THROWS_AS(ScaleConductivity(base, s), ConfigError);
      CHECK_THROWS_AS(ScaleSize(base, s), ConfigError);
    }
    Sweep bad = base;
    bad.samples.push_back(bad.samples[0]);
    CHECK_THROWS_AS(CheckSweep(bad), ConfigError);
    CHECK_THROWS_AS(ScaleSize(bad, 2.0), ConfigError);
  }
}
