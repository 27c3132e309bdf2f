// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "mpt/certificates.hpp"
#include "mpt/cli.hpp"
#include "mpt/mesh.hpp"
#include "mpt/oracle.hpp"
#include "mpt/pod.hpp"
#include "mpt/scaling.hpp"
#include "mpt/tensors.hpp"
#include "mpt/transmission.hpp"

using namespace mpt;

namespace
{

constexpr double kAlpha = 0.01;
constexpr double kMu = 1.5;
constexpr double kSigma = 5.96e6;
constexpr double kWmin = 1e2, kWmax = 1e8;
constexpr int kDeskLevel = 6;

double Now()
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
    .count();
}

std::vector<TaggedShape> UnitSphere()
{
  return {{Sphere{Vec3::Zero(), 1.0}, "obj"}};
}

// Mesh, magnetostatic solve and affine system for one object and material.
struct Problem
{
  std::shared_ptr<const EdgeSpace> space;
  MaterialTable materials;
  Theta0Solution theta0;
  AffineSystem affine;
  Eigen::Matrix3d N0;
  RealSparse M0;
  std::map<double, Theta1Solutions> cache;

  Problem(const std::vector<TaggedShape> &shapes, int level, double mu, double sigma,
          double alpha, double half_width = 100.0)
  {
    auto mesh = std::make_shared<const Mesh>(
      TagRegions(RefineTowardObject(GenerateBoxMesh(half_width, 4), shapes, level), shapes));
    space = std::make_shared<const EdgeSpace>(EdgeSpace::Build(mesh));
    materials.Add({shapes.front().tag, mu, sigma, true});
    theta0 = SolveTheta0(space, materials, DefaultEpsilon(*space));
    affine = BuildAffineSystem(theta0, materials, alpha);
    N0 = ComputeN0(theta0, alpha);
    M0 = RieszMass(*space);
  }

  const Theta1Solutions &Fom(double omega)
  {
    auto it = cache.find(omega);
    if (it == cache.end())
    {
      it = cache.emplace(omega, SolveTheta1Full(affine, omega)).first;
    }
    return it->second;
  }

  MPTSample FomSample(double omega)
  {
    return MakeSample(omega, N0, ComputeRI(affine, Fom(omega), omega));
  }

  SnapshotSet Snapshots(int n, Spacing spacing)
  {
    return BuildSnapshots([this](double w) { return Fom(w); }, affine.Size(),
                          FrequencySamples(kWmin, kWmax, n, spacing), spacing);
  }
};

Problem &Desk()
{
  static Problem p(UnitSphere(), kDeskLevel, kMu, kSigma, kAlpha);
  return p;
}

// ||M_a - M_b||_F / ||M_a||_F for M = N0 + R + i I.
double TensorRel(const MPTSample &a, const MPTSample &b)
{
  auto full = [](const MPTSample &s) {
    Eigen::Matrix3cd m = (s.N0 + s.R).cast<Complex>();
    m += Complex(0, 1) * s.I.cast<Complex>();
    return m;
  };
  return (full(a) - full(b)).norm() / full(a).norm();
}

// Largest relative difference over the six eigenvalues.
double EigenRel(const MPTSample &ref, const MPTSample &s)
{
  const Eigen::Vector3d re =
    (ref.eig_real - s.eig_real).cwiseAbs().cwiseQuotient(ref.eig_real.cwiseAbs());
  const Eigen::Vector3d im =
    (ref.eig_imag - s.eig_imag).cwiseAbs().cwiseQuotient(ref.eig_imag.cwiseAbs());
  return std::max(re.maxCoeff(), im.maxCoeff());
}

struct Rom
{
  Bases bases;
  ReducedSystem reduced;
  CertificateData cert;
};

Rom BuildRom(Problem &p, int n, Spacing spacing, double tol)
{
  Rom rom;
  rom.bases = TruncatedSVD(p.Snapshots(n, spacing), tol);
  rom.reduced = ProjectAffine(p.affine, rom.bases);
  rom.cert = BuildCertificateOffline(p.affine, rom.bases, p.M0, kWmin);
  return rom;
}

MPTSample RomSample(const Problem &p, const Rom &rom, double omega)
{
  const OnlineResult on = OnlineSolve(rom.reduced, omega);
  MPTSample s = MakeSample(omega, p.N0, on.tensors);
  s.delta = OnlineDelta(rom.cert, on.p, omega, kAlpha);
  return s;
}

struct Outcome
{
  bool pass;
  std::string detail;
};

std::string Fmt(const char *f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

Outcome Reproduction()
{
  Problem &p = Desk();
  const Rom rom = BuildRom(p, 13, Spacing::kLog, 0.0);
  double worst = 0.0;
  for (double w : FrequencySamples(kWmin, kWmax, 13, Spacing::kLog))
  {
    worst = std::max(worst, TensorRel(p.FomSample(w), RomSample(p, rom, w)));
  }
  return {worst <= 1e-8, Fmt("max tensor rel %.3g at snapshots, M=%g (limit 1e-8)", worst,
                             rom.bases[0].rank)};
}

Outcome OffSnapshot()
{
  Problem &p = Desk();
  const Rom rom = BuildRom(p, 13, Spacing::kLog, 1e-4);
  double worst = 0.0, at = 0.0;
  for (double w : VerificationFrequencies(kWmin, kWmax, 20))
  {
    const double e = EigenRel(p.FomSample(w), RomSample(p, rom, w));
    if (e > worst)
    {
      worst = e;
      at = w;
    }
  }
  return {worst <= 1e-3, Fmt("max eigenvalue rel %.3g at omega %.3g, M=%g (limit 1e-3)", worst,
                             at, rom.bases[0].rank)};
}

Outcome Certificates()
{
  Problem &p = Desk();
  const Rom rom = BuildRom(p, 13, Spacing::kLog, 1e-4);
  int ok = 0, total = 0;
  double off_max = 0.0;
  for (double w : VerificationFrequencies(kWmin, kWmax, 20))
  {
    const MPTSample f = p.FomSample(w), r = RomSample(p, rom, w);
    for (int k = 0; k < 9; k++)
    {
      total++;
      ok += (*r.delta)(k) >= std::abs(f.R(k) - r.R(k)) && (*r.delta)(k) >= std::abs(f.I(k) - r.I(k));
    }
    off_max = std::max(off_max, r.delta->maxCoeff());
  }
  // Full-rank basis: the bound collapses at the snapshots.
  const Rom full = BuildRom(p, 13, Spacing::kLog, 0.0);
  double snap_max = 0.0;
  for (double w : FrequencySamples(kWmin, kWmax, 13, Spacing::kLog))
  {
    snap_max = std::max(snap_max, RomSample(p, full, w).delta->maxCoeff());
  }
  const double ratio = snap_max / off_max;
  return {ok == total && ratio <= 1e-6,
          Fmt("%g/%g entries bounded; snapshot Delta at TOL=0 is %.3g of the off-snapshot "
              "Delta (limit 1e-6)",
              ok, total, ratio)};
}

Outcome Tightening()
{
  Problem &p = Desk();
  double mx[2] = {0.0, 0.0};
  int M[2];
  for (int k = 0; k < 2; k++)
  {
    const Rom rom = BuildRom(p, k == 0 ? 13 : 21, Spacing::kLog, 1e-6);
    M[k] = rom.bases[0].rank;
    for (double w : VerificationFrequencies(kWmin, kWmax, 20))
    {
      mx[k] = std::max(mx[k], (*RomSample(p, rom, w).delta)(0, 0));
    }
  }
  return {mx[1] <= mx[0], Fmt("max Delta11 %.3g (N=13, M=%g) -> %.3g (N=21, M=%g)", mx[0], M[0],
                              mx[1], M[1])};
}

Outcome Decay()
{
  Problem &p = Desk();
  const Bases log = TruncatedSVD(p.Snapshots(13, Spacing::kLog), 0.0);
  const Bases lin = TruncatedSVD(p.Snapshots(13, Spacing::kLinear), 0.0);
  bool pass = true;
  double worst_log = 0.0, best_lin = 1.0, worst_min = 0.0;
  for (int i = 0; i < 3; i++)
  {
    const Eigen::VectorXd a = log[i].Ratios(), b = lin[i].Ratios();
    pass = pass && a[a.size() - 1] < b[b.size() - 1] && a.minCoeff() < 1e-3;
    worst_log = std::max(worst_log, a[a.size() - 1]);
    best_lin = std::min(best_lin, b[b.size() - 1]);
    worst_min = std::max(worst_min, a.minCoeff());
  }
  return {pass, Fmt("sigma_N/sigma_1 log %.3g vs lin %.3g; smallest log ratio %.3g (limit 1e-3)",
                    worst_log, best_lin, worst_min)};
}

// Full-order sweep of one configuration.
Sweep FomSweep(Problem &p, double alpha, const std::vector<double> &omegas)
{
  Sweep s;
  s.alpha = alpha;
  s.materials = p.materials;
  for (double w : omegas)
  {
    s.samples.push_back(p.FomSample(w));
  }
  return s;
}

Outcome Scaling()
{
  const std::vector<double> w = FrequencySamples(kWmin, kWmax, 7, Spacing::kLog);
  auto scaled = [](const std::vector<double> &in, double f) {
    std::vector<double> out;
    for (double x : in)
    {
      out.push_back(x / f);
    }
    return out;
  };
  auto worst = [](const Sweep &a, const Sweep &b) {
    double e = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); k++)
    {
      e = std::max(e, TensorRel(b.samples[k], a.samples[k]));
      e = std::max(e, std::abs(a.samples[k].omega - b.samples[k].omega) / b.samples[k].omega);
    }
    return e;
  };

  Problem sphere(UnitSphere(), 5, kMu, 1e7, kAlpha);
  Problem sphere10(UnitSphere(), 5, kMu, 1e8, kAlpha);
  const Sweep c = ScaleConductivity(FomSweep(sphere, kAlpha, w), 10.0);
  const double ec = worst(c, FomSweep(sphere10, kAlpha, scaled(w, 10.0)));

  const std::vector<TaggedShape> tet{
    {Tetrahedron{{Vec3(0, 0, 0), Vec3(7, 0, 0), Vec3(5.5, 4.6, 0), Vec3(3.3, 2, 5)}}, "obj"}};
  Problem small(tet, 5, 1.0, 5.8e6, 0.01);
  Problem big(tet, 5, 1.0, 5.8e6, 0.015);
  const Sweep s = ScaleSize(FomSweep(small, 0.01, w), 1.5);
  const double es = worst(s, FomSweep(big, 0.015, scaled(w, 2.25)));
  return {ec <= 1e-10 && es <= 1e-10,
          Fmt("conductivity s=10 rel %.3g, size s=1.5 rel %.3g (limit 1e-10)", ec, es)};
}

Outcome SphereOracle()
{
  const double exact = SphereLimitValues({kAlpha, kMu, kSigma}).static_value;
  const double pec = SphereLimitValues({kAlpha, kMu, kSigma}).pec_value;
  std::vector<double> err;
  std::string levels;
  double high = 0.0;
  for (int level = 5; level <= 8; level++)
  {
    const auto shapes = UnitSphere();
    auto mesh = std::make_shared<const Mesh>(
      TagRegions(RefineTowardObject(GenerateBoxMesh(100.0, 4), shapes, level), shapes));
    auto space = std::make_shared<const EdgeSpace>(EdgeSpace::Build(mesh));
    MaterialTable mat;
    mat.Add({"obj", kMu, kSigma, true});
    const Theta0Solution t0 = SolveTheta0(space, mat, DefaultEpsilon(*space));
    const Eigen::Matrix3d N0 = ComputeN0(t0, kAlpha);
    const Eigen::Vector3d e = TensorEigenvalues(N0);
    err.push_back((e - Eigen::Vector3d::Constant(exact)).cwiseAbs().maxCoeff() / exact);
    levels += Fmt(" L%g:%.3g", level, err.back());
    if (level == 8)
    {
      const AffineSystem aff = BuildAffineSystem(t0, mat, kAlpha);
      const MPTSample s =
        MakeSample(kWmax, N0, ComputeRI(aff, SolveTheta1Full(aff, kWmax), kWmax));
      high = (s.eig_real - Eigen::Vector3d::Constant(pec)).cwiseAbs().maxCoeff() / std::abs(pec);
    }
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < err.size(); k++)
  {
    decreasing = decreasing && err[k] < err[k - 1];
  }
  return {decreasing && err.back() <= 0.10 && high <= 0.15,
          "N0 rel error" + levels + Fmt(" (finest limit 0.1); N0+R at 1e8 rel %.3g (limit 0.15)",
                                         high)};
}

Outcome Invariants()
{
  Problem &p = Desk();
  // Curl-curl annihilates gradients.
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mesh &mesh = *p.space->mesh;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh.NumEdges());
  for (int v = 0; v < mesh.NumVertices(); v += 7)
  {
    g += u(rng) * DiscreteGradient(mesh, v);
  }
  RegionWeights nu;
  for (const auto &name : mesh.region_names)
  {
    nu[name] = 1.0 / p.materials.Get(name).mu_r;
  }
  const RealSparse K = AssembleCurlCurl(*p.space, nu);
  const RealSparse Kabs = K.cwiseAbs();
  const double grad = (K * g).norm() / (Kabs * g.cwiseAbs()).norm();

  // Affine identity against a one-pass assembly.
  double affine = 0.0;
  for (double w : {1e2, 1e5, 1e8})
  {
    const ComplexSparse A = AssembleTheta1Matrix(*p.space, p.materials, kAlpha, p.affine.epsilon, w);
    const ComplexSparse B = p.affine.Matrix(w);
    affine = std::max(affine, (A - B).norm() / A.norm());
  }

  // Tensor identities on every cached full-order solution.
  double dissipation = std::numeric_limits<double>::infinity(), alt = 0.0, asym = 0.0;
  for (double w : VerificationFrequencies(kWmin, kWmax, 20))
  {
    p.Fom(w);
  }
  for (const auto &[w, q] : p.cache)
  {
    const TensorPair a = ComputeRI(p.affine, q, w);
    const TensorPair b = ComputeRIAlt(p.affine, q, w);
    dissipation = std::min(dissipation, a.I.diagonal().minCoeff());
    alt = std::max({alt, (a.R - b.R).cwiseAbs().maxCoeff(), (a.I - b.I).cwiseAbs().maxCoeff()});
    asym = std::max(asym, a.asymmetry / std::max(a.R.norm(), a.I.norm()));
  }
  double n0asym = 0.0;
  ComputeN0(p.theta0, kAlpha, &n0asym);
  asym = std::max(asym, n0asym / p.N0.norm());
  const bool pass = grad <= 1e-12 && affine <= 1e-12 && dissipation >= 0.0 && alt <= 1e-8 &&
                    asym <= 1e-8;
  return {pass, Fmt("gradient %.2g, affine %.2g, min I_ii %.3g, pairing diff %.2g m^3", grad,
                    affine, dissipation, alt) +
                  Fmt(", asymmetry %.2g over %g frequencies", asym, p.cache.size())};
}

Outcome Performance()
{
  Problem &p = Desk();
  const Rom rom = BuildRom(p, 13, Spacing::kLog, 1e-4);
  const std::vector<double> ws = VerificationFrequencies(kWmin, kWmax, 20);
  const double t0 = Now();
  const Theta1Solutions q = SolveTheta1Full(p.affine, 0.5 * (ws[3] + ws[4]));
  const double fom = Now() - t0;
  (void)q;

  const int reps = 200;
  double online = 0.0, delta = 0.0;
  double sink = 0.0;
  for (int r = 0; r < reps; r++)
  {
    for (double w : ws)
    {
      const double a = Now();
      const OnlineResult on = OnlineSolve(rom.reduced, w);
      const double b = Now();
      const Eigen::Matrix3d d = OnlineDelta(rom.cert, on.p, w, kAlpha);
      const double c = Now();
      online += c - a;
      delta += c - b;
      sink += d(0, 0) + on.tensors.R(0, 0);
    }
  }
  const double n = reps * static_cast<double>(ws.size());
  online /= n;
  delta /= n;
  const double speedup = fom / online;
  const double share = delta / online;
  return {speedup >= 10.0 && share < 0.10 && std::isfinite(sink),
          Fmt("FOM solve %.3g s, online %.3g s (speedup %.3g, limit 10); Delta share %.3g "
              "(limit 0.1)",
              fom, online, speedup, share)};
}

}  // namespace

int main(int argc, char **argv)
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"galerkin-reproduction", Reproduction}, {"rom-accuracy-off-snapshot", OffSnapshot},
    {"certificate-validity", Certificates},  {"certificate-tightening", Tightening},
    {"singular-value-decay", Decay},         {"scaling-lemmas", Scaling},
    {"sphere-oracle", SphereOracle},         {"structural-invariants", Invariants},
    {"performance", Performance}};
  std::set<int> chosen;
  for (int a = 1; a < argc; a++)
  {
    chosen.insert(std::atoi(argv[a]));
  }
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); k++)
  {
    const int id = static_cast<int>(k) + 1;
    if (!chosen.empty() && !chosen.count(id))
    {
      continue;
    }
    const double start = Now();
    Outcome o;
    try
    {
      o = criteria[k].second();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %d %s: %s [%.0f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[k].first.c_str(), o.detail.c_str(), Now() - start);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
