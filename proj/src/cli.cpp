// SPDX-License-Identifier: Apache-2.0

#include "mpt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include "mpt/certificates.hpp"
#include "mpt/errors.hpp"
#include "mpt/fem.hpp"
#include "mpt/oracle.hpp"
#include "mpt/parallel.hpp"
#include "mpt/transmission.hpp"

namespace mpt
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kPairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};

double Seconds(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void CheckKeys(const Json &j, const std::set<std::string> &allowed, const std::string &where)
{
  if (!j.is_object())
  {
    throw ConfigError(where + " must be an object");
  }
  for (const auto &[key, value] : j.items())
  {
    if (!allowed.count(key))
    {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const Json &j, const char *key, T &out)
{
  if (j.contains(key) && !j.at(key).is_null())
  {
    out = j.at(key).get<T>();
  }
}

Vec3 ReadVec3(const Json &j)
{
  if (!j.is_array() || j.size() != 3)
  {
    throw ConfigError("expected a 3-vector");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json Vec3Json(const Vec3 &v)
{
  return Json::array({v.x(), v.y(), v.z()});
}

TaggedShape ParseShape(const Json &j)
{
  const std::string type = j.at("type").get<std::string>();
  TaggedShape s;
  s.tag = j.at("tag").get<std::string>();
  if (type == "sphere")
  {
    CheckKeys(j, {"type", "tag", "center", "radius"}, "sphere shape");
    s.shape = Sphere{j.contains("center") ? ReadVec3(j.at("center")) : Vec3::Zero(),
                     j.at("radius").get<double>()};
  }
  else if (type == "box")
  {
    CheckKeys(j, {"type", "tag", "min", "max"}, "box shape");
    s.shape = Box{ReadVec3(j.at("min")), ReadVec3(j.at("max"))};
  }
  else if (type == "tetrahedron")
  {
    CheckKeys(j, {"type", "tag", "vertices"}, "tetrahedron shape");
    const Json &v = j.at("vertices");
    if (!v.is_array() || v.size() != 4)
    {
      throw ConfigError("tetrahedron needs 4 vertices");
    }
    Tetrahedron t;
    for (int k = 0; k < 4; k++)
    {
      t.v[k] = ReadVec3(v[k]);
    }
    s.shape = t;
  }
  else
  {
    throw ConfigError("unknown shape type '" + type + "'");
  }
  return s;
}

Json ShapeJson(const TaggedShape &s)
{
  Json j;
  j["tag"] = s.tag;
  if (const auto *sp = std::get_if<Sphere>(&s.shape))
  {
    j["type"] = "sphere";
    j["center"] = Vec3Json(sp->center);
    j["radius"] = sp->radius;
  }
  else if (const auto *b = std::get_if<Box>(&s.shape))
  {
    j["type"] = "box";
    j["min"] = Vec3Json(b->min);
    j["max"] = Vec3Json(b->max);
  }
  else
  {
    const auto &t = std::get<Tetrahedron>(s.shape);
    j["type"] = "tetrahedron";
    j["vertices"] = Json::array();
    for (const auto &v : t.v)
    {
      j["vertices"].push_back(Vec3Json(v));
    }
  }
  return j;
}

}  // namespace

void RunConfig::Validate() const
{
  auto require = [](bool ok, const std::string &what) {
    if (!ok)
    {
      throw ConfigError(what);
    }
  };
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(omega_min > 0.0 && omega_max > omega_min && std::isfinite(omega_max),
          "sweep must satisfy 0 < omega_min < omega_max");
  require(snapshots >= 1, "snapshots must be at least 1");
  require(outputs >= snapshots, "outputs (N0) must be at least the number of snapshots");
  require(tol >= 0.0, "tol must be non-negative");
  require(!epsilon || *epsilon > 0.0, "epsilon must be positive");
  require(solver_tol > 0.0, "solver_tol must be positive");
  require(verification_count >= 1, "verification_count must be at least 1");
  require(!omega_prime || *omega_prime > 0.0, "omega_prime must be positive");
  require(threads >= 1, "threads must be at least 1");
  require(mesh.half_width > 0.0, "mesh half_width must be positive");
  require(mesh.divisions >= 1, "mesh divisions must be at least 1");
  require(!mesh.refine_levels || *mesh.refine_levels >= 0, "refine_levels must be >= 0");
  std::set<std::string> tags;
  for (const auto &m : materials)
  {
    require(m.tag != kExteriorTag, "the exterior material is fixed");
    require(tags.insert(m.tag).second, "material '" + m.tag + "' defined twice");
    require(m.mu_r > 0.0, "mu_r must be positive for '" + m.tag + "'");
    require(m.sigma_star >= 0.0, "sigma must be non-negative for '" + m.tag + "'");
  }
  for (const auto &s : shapes)
  {
    require(tags.count(s.tag) > 0, "shape tag '" + s.tag + "' has no material");
  }
  require(mesh.file || !shapes.empty(), "a generated mesh needs at least one shape");
}

RunConfig ParseConfig(const Json &j)
{
  RunConfig cfg;
  try
  {
    CheckKeys(j,
              {"mesh", "shapes", "materials", "alpha", "sweep", "tol", "epsilon", "solver_tol",
               "verification_count", "omega_prime", "both_spacings", "out_dir", "threads"},
              "config");
    if (j.contains("mesh"))
    {
      const Json &m = j.at("mesh");
      CheckKeys(m, {"half_width", "divisions", "refine_levels", "file"}, "mesh");
      Read(m, "half_width", cfg.mesh.half_width);
      Read(m, "divisions", cfg.mesh.divisions);
      if (m.contains("refine_levels") && !m.at("refine_levels").is_null())
      {
        cfg.mesh.refine_levels = m.at("refine_levels").get<int>();
      }
      if (m.contains("file") && !m.at("file").is_null())
      {
        cfg.mesh.file = m.at("file").get<std::string>();
      }
    }
    for (const auto &s : j.value("shapes", Json::array()))
    {
      cfg.shapes.push_back(ParseShape(s));
    }
    for (const auto &m : j.value("materials", Json::array()))
    {
      CheckKeys(m, {"tag", "mu_r", "sigma"}, "material");
      Material mat;
      mat.tag = m.at("tag").get<std::string>();
      Read(m, "mu_r", mat.mu_r);
      Read(m, "sigma", mat.sigma_star);
      mat.is_object = true;
      cfg.materials.push_back(mat);
    }
    Read(j, "alpha", cfg.alpha);
    if (j.contains("sweep"))
    {
      const Json &s = j.at("sweep");
      CheckKeys(s, {"omega_min", "omega_max", "snapshots", "spacing", "outputs"}, "sweep");
      Read(s, "omega_min", cfg.omega_min);
      Read(s, "omega_max", cfg.omega_max);
      Read(s, "snapshots", cfg.snapshots);
      Read(s, "outputs", cfg.outputs);
      if (s.contains("spacing"))
      {
        cfg.spacing = ParseSpacing(s.at("spacing").get<std::string>());
      }
    }
    Read(j, "tol", cfg.tol);
    if (j.contains("epsilon") && !j.at("epsilon").is_null())
    {
      cfg.epsilon = j.at("epsilon").get<double>();
    }
    Read(j, "solver_tol", cfg.solver_tol);
    Read(j, "verification_count", cfg.verification_count);
    if (j.contains("omega_prime") && !j.at("omega_prime").is_null())
    {
      cfg.omega_prime = j.at("omega_prime").get<double>();
    }
    Read(j, "both_spacings", cfg.both_spacings);
    if (j.contains("out_dir"))
    {
      cfg.out_dir = j.at("out_dir").get<std::string>();
    }
    Read(j, "threads", cfg.threads);
  }
  catch (const Json::exception &e)
  {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config " + path.string());
  }
  Json j;
  try
  {
    j = Json::parse(in);
  }
  catch (const Json::exception &e)
  {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return ParseConfig(j);
}

Json ToJson(const RunConfig &cfg)
{
  Json j;
  j["mesh"] = {{"half_width", cfg.mesh.half_width}, {"divisions", cfg.mesh.divisions}};
  j["mesh"]["refine_levels"] = cfg.mesh.refine_levels ? Json(*cfg.mesh.refine_levels) : Json();
  j["mesh"]["file"] = cfg.mesh.file ? Json(cfg.mesh.file->string()) : Json();
  j["shapes"] = Json::array();
  for (const auto &s : cfg.shapes)
  {
    j["shapes"].push_back(ShapeJson(s));
  }
  j["materials"] = Json::array();
  for (const auto &m : cfg.materials)
  {
    j["materials"].push_back({{"tag", m.tag}, {"mu_r", m.mu_r}, {"sigma", m.sigma_star}});
  }
  j["alpha"] = cfg.alpha;
  j["sweep"] = {{"omega_min", cfg.omega_min},
                {"omega_max", cfg.omega_max},
                {"snapshots", cfg.snapshots},
                {"spacing", SpacingName(cfg.spacing)},
                {"outputs", cfg.outputs}};
  j["tol"] = cfg.tol;
  j["epsilon"] = cfg.epsilon ? Json(*cfg.epsilon) : Json();
  j["solver_tol"] = cfg.solver_tol;
  j["verification_count"] = cfg.verification_count;
  j["omega_prime"] = cfg.omega_prime ? Json(*cfg.omega_prime) : Json();
  j["both_spacings"] = cfg.both_spacings;
  j["out_dir"] = cfg.out_dir.string();
  j["threads"] = cfg.threads;
  return j;
}

std::string ConfigHelp()
{
  return R"(Config file: one JSON object, every key optional.
  mesh.half_width      100     box [-h, h]^3 in object units
  mesh.divisions       4       cells per axis before refinement
  mesh.refine_levels   5       red refinement levels toward the shapes (0 for mesh.file)
  mesh.file            null    neutral ASCII mesh instead of the generated box
  shapes               []      {type: sphere|box|tetrahedron, tag, center/radius | min/max | vertices}
  materials            []      {tag, mu_r = 1, sigma = 0 (S/m)} for each object region
  alpha                0.01    object size (m)
  sweep.omega_min      1e2     rad/s
  sweep.omega_max      1e8     rad/s
  sweep.snapshots      13      N
  sweep.spacing        "log"   log | lin, for snapshots and outputs
  sweep.outputs        20      N0 >= N output frequencies
  tol                  1e-4    truncation: keep sigma_i / sigma_1 > tol
  epsilon              null    regularisation; default 1e-10 * mean curl-curl diagonal
  solver_tol           1e-10   relative residual of every full-order solve
  verification_count   20      half-step offset frequencies used by checks
  omega_prime          null    certificate reference frequency; default omega_min
  both_spacings        false   compare-oracle: also run the other spacing
  out_dir              "out"
  threads              1)";
}

Mesh BuildMesh(const RunConfig &cfg)
{
  std::vector<std::string> tags;
  for (const auto &m : cfg.materials)
  {
    tags.push_back(m.tag);
  }
  if (cfg.mesh.file)
  {
    Mesh mesh = ReadMeshFile(*cfg.mesh.file, tags);
    const int levels = cfg.mesh.refine_levels.value_or(0);
    return levels > 0 ? RefineTowardObject(std::move(mesh), levels) : mesh;
  }
  Mesh mesh = GenerateBoxMesh(cfg.mesh.half_width, cfg.mesh.divisions);
  mesh = RefineTowardObject(std::move(mesh), cfg.shapes, cfg.mesh.refine_levels.value_or(5));
  return TagRegions(std::move(mesh), cfg.shapes);
}

MaterialTable BuildMaterials(const RunConfig &cfg)
{
  MaterialTable table;
  for (const auto &m : cfg.materials)
  {
    table.Add(m);
  }
  return table;
}

namespace
{

struct Prepared
{
  std::shared_ptr<const EdgeSpace> space;
  MaterialTable materials;
  Theta0Solution theta0;
  AffineSystem affine;
  Eigen::Matrix3d N0;
  double seconds = 0.0;
};

Prepared Prepare(const RunConfig &cfg)
{
  const auto start = std::chrono::steady_clock::now();
  Prepared p;
  auto mesh = std::make_shared<const Mesh>(BuildMesh(cfg));
  p.space = std::make_shared<const EdgeSpace>(EdgeSpace::Build(mesh));
  p.materials = BuildMaterials(cfg);
  for (const auto &name : mesh->region_names)
  {
    if (!p.materials.Contains(name))
    {
      throw ConfigError("mesh region '" + name + "' has no material");
    }
  }
  double object_volume = 0.0;
  for (const auto &m : cfg.materials)
  {
    object_volume += mesh->RegionVolume(m.tag);
  }
  if (!(object_volume > 0.0))
  {
    throw ConfigError("no tet is tagged as object; increase mesh.refine_levels");
  }
  const double eps = cfg.epsilon.value_or(DefaultEpsilon(*p.space));
  p.theta0 = SolveTheta0(p.space, p.materials, eps, cfg.solver_tol);
  p.N0 = ComputeN0(p.theta0, cfg.alpha);
  p.affine = BuildAffineSystem(p.theta0, p.materials, cfg.alpha);
  p.seconds = Seconds(start);
  return p;
}

SweepReport NewReport(const std::string &command, const RunConfig &cfg, const Prepared &p)
{
  SweepReport r;
  r.command = command;
  r.config = cfg;
  r.sweep.alpha = cfg.alpha;
  r.sweep.materials = p.materials;
  r.n_dof = p.affine.Size();
  r.epsilon = p.affine.epsilon;
  r.offline_seconds["theta0"] = p.seconds;
  return r;
}

bool ZeroSource(const AffineSystem &affine)
{
  for (const auto &r : affine.r1)
  {
    if (r.squaredNorm() > 0.0)
    {
      return false;
    }
  }
  return true;
}

SweepReport PodSweep(const RunConfig &cfg, const Prepared &prep, Spacing spacing)
{
  SweepReport report = NewReport("sweep-pod", cfg, prep);
  report.config.spacing = spacing;
  const std::vector<double> outputs =
    FrequencySamples(cfg.omega_min, cfg.omega_max, cfg.outputs, spacing);
  double t_solve = 0.0, t_out = 0.0, t_delta = 0.0;

  if (ZeroSource(prep.affine))
  {
    // No conducting region: q = 0 exactly, so the reduced model is empty and exact.
    for (auto &s : report.sigma_ratios)
    {
      s = Eigen::VectorXd::Zero(0);
    }
    for (double w : outputs)
    {
      MPTSample sample = MakeSample(w, prep.N0, TensorPair{Eigen::Matrix3d::Zero(),
                                                           Eigen::Matrix3d::Zero(), 0.0});
      sample.delta = Eigen::Matrix3d::Zero();
      report.sweep.samples.push_back(sample);
    }
    report.online_seconds = {{"solves", 0.0}, {"outputs", 0.0}, {"delta", 0.0}};
    return report;
  }

  const SnapshotSet snaps =
    BuildSnapshots(prep.affine, FrequencySamples(cfg.omega_min, cfg.omega_max, cfg.snapshots,
                                                 spacing),
                   spacing, cfg.solver_tol, cfg.threads);
  report.offline_seconds["snapshots"] = snaps.seconds;

  auto t = std::chrono::steady_clock::now();
  const Bases bases = TruncatedSVD(snaps, cfg.tol);
  report.offline_seconds["svd"] = Seconds(t);
  for (int i = 0; i < 3; i++)
  {
    report.rank[i] = bases[i].rank;
    report.sigma_ratios[i] = bases[i].Ratios();
  }

  t = std::chrono::steady_clock::now();
  const ReducedSystem red = ProjectAffine(prep.affine, bases);
  report.offline_seconds["projection"] = Seconds(t);

  t = std::chrono::steady_clock::now();
  const CertificateData cert = BuildCertificateOffline(
    prep.affine, bases, RieszMass(*prep.space), cfg.omega_prime.value_or(cfg.omega_min));
  report.offline_seconds["certificate"] = Seconds(t);
  report.lambda_min = cert.lambda_min;

  for (double w : outputs)
  {
    auto t0 = std::chrono::steady_clock::now();
    const OnlineResult on = ReducedSolve(red, w);
    auto t1 = std::chrono::steady_clock::now();
    const TensorPair tp = ReducedTensors(red, on.p, w);
    MPTSample sample = MakeSample(w, prep.N0, tp);
    auto t2 = std::chrono::steady_clock::now();
    sample.delta = OnlineDelta(cert, on.p, w, cfg.alpha);
    auto t3 = std::chrono::steady_clock::now();
    t_solve += std::chrono::duration<double>(t1 - t0).count();
    t_out += std::chrono::duration<double>(t2 - t1).count();
    t_delta += std::chrono::duration<double>(t3 - t2).count();
    report.sweep.samples.push_back(sample);
  }
  report.online_seconds = {{"solves", t_solve}, {"outputs", t_out}, {"delta", t_delta}};
  return report;
}

}  // namespace

SweepReport RunSweepFull(const RunConfig &cfg)
{
  cfg.Validate();
  const Prepared prep = Prepare(cfg);
  SweepReport report = NewReport("sweep-full", cfg, prep);
  const std::vector<double> outputs =
    FrequencySamples(cfg.omega_min, cfg.omega_max, cfg.outputs, cfg.spacing);
  const int n = static_cast<int>(outputs.size());
  std::vector<MPTSample> samples(n);
  std::vector<double> t_solve(n), t_out(n);
  ParallelFor(n, cfg.threads, [&](int k) {
    auto t0 = std::chrono::steady_clock::now();
    const auto q = SolveTheta1Full(prep.affine, outputs[k], cfg.solver_tol);
    auto t1 = std::chrono::steady_clock::now();
    samples[k] = MakeSample(outputs[k], prep.N0, ComputeRI(prep.affine, q, outputs[k]));
    t_solve[k] = std::chrono::duration<double>(t1 - t0).count();
    t_out[k] = Seconds(t1);
  });
  report.sweep.samples = std::move(samples);
  double ts = 0.0, to = 0.0;
  for (int k = 0; k < n; k++)
  {
    ts += t_solve[k];
    to += t_out[k];
  }
  report.online_seconds = {{"solves", ts}, {"outputs", to}};
  return report;
}

SweepReport RunSweepPod(const RunConfig &cfg)
{
  cfg.Validate();
  return PodSweep(cfg, Prepare(cfg), cfg.spacing);
}

SweepReport ScaleReport(const SweepReport &in, const std::string &lemma, double s)
{
  const auto start = std::chrono::steady_clock::now();
  SweepReport out = in;
  out.command = "scale";
  out.offline_seconds.clear();
  out.online_seconds.clear();
  RunConfig &cfg = out.config;
  if (lemma == "conductivity")
  {
    out.sweep = ScaleConductivity(in.sweep, s);
    for (auto &m : cfg.materials)
    {
      m.sigma_star *= s;
    }
    cfg.omega_min /= s;
    cfg.omega_max /= s;
    if (cfg.omega_prime)
    {
      *cfg.omega_prime /= s;
    }
  }
  else if (lemma == "size")
  {
    out.sweep = ScaleSize(in.sweep, s);
    cfg.alpha *= s;
    cfg.omega_min /= s * s;
    cfg.omega_max /= s * s;
    if (cfg.omega_prime)
    {
      *cfg.omega_prime /= s * s;
    }
  }
  else
  {
    throw ConfigError("lemma must be 'conductivity' or 'size', got '" + lemma + "'");
  }
  out.online_seconds["scale"] = Seconds(start);
  return out;
}

const std::vector<std::string> &CsvColumns()
{
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"omega"};
    const char *idx[6] = {"11", "22", "33", "12", "13", "23"};
    for (const char *ij : idx)
    {
      c.push_back(std::string("R") + ij);
      c.push_back(std::string("I") + ij);
    }
    for (const char *ij : idx)
    {
      c.push_back(std::string("N0_") + ij);
    }
    for (int k = 1; k <= 3; k++)
    {
      c.push_back("eig_re_" + std::to_string(k));
    }
    for (int k = 1; k <= 3; k++)
    {
      c.push_back("eig_im_" + std::to_string(k));
    }
    for (const char *ij : idx)
    {
      c.push_back(std::string("delta_") + ij);
    }
    c.push_back("asymmetry");
    return c;
  }();
  return cols;
}

std::array<double, 32> CsvRow(const MPTSample &s)
{
  std::array<double, 32> row;
  int k = 0;
  row[k++] = s.omega;
  for (const auto &ij : kPairs)
  {
    row[k++] = s.R(ij[0], ij[1]);
    row[k++] = s.I(ij[0], ij[1]);
  }
  for (const auto &ij : kPairs)
  {
    row[k++] = s.N0(ij[0], ij[1]);
  }
  for (int e = 0; e < 3; e++)
  {
    row[k++] = s.eig_real[e];
  }
  for (int e = 0; e < 3; e++)
  {
    row[k++] = s.eig_imag[e];
  }
  for (const auto &ij : kPairs)
  {
    row[k++] = s.delta ? (*s.delta)(ij[0], ij[1]) : kNaN;
  }
  row[k++] = s.asymmetry;
  return row;
}

MPTSample SampleFromRow(const std::array<double, 32> &row)
{
  MPTSample s;
  int k = 0;
  s.omega = row[k++];
  for (const auto &ij : kPairs)
  {
    s.R(ij[0], ij[1]) = s.R(ij[1], ij[0]) = row[k++];
    s.I(ij[0], ij[1]) = s.I(ij[1], ij[0]) = row[k++];
  }
  for (const auto &ij : kPairs)
  {
    s.N0(ij[0], ij[1]) = s.N0(ij[1], ij[0]) = row[k++];
  }
  for (int e = 0; e < 3; e++)
  {
    s.eig_real[e] = row[k++];
  }
  for (int e = 0; e < 3; e++)
  {
    s.eig_imag[e] = row[k++];
  }
  Eigen::Matrix3d d;
  bool any = false;
  for (const auto &ij : kPairs)
  {
    const double v = row[k++];
    any = any || !std::isnan(v);
    d(ij[0], ij[1]) = d(ij[1], ij[0]) = v;
  }
  if (any)
  {
    s.delta = d;
  }
  s.asymmetry = row[k++];
  return s;
}

void WriteCsv(std::ostream &out, const std::vector<MPTSample> &samples)
{
  const auto &cols = CsvColumns();
  for (std::size_t c = 0; c < cols.size(); c++)
  {
    out << (c ? "," : "") << cols[c];
  }
  out << '\n';
  char buf[32];
  for (const auto &s : samples)
  {
    const auto row = CsvRow(s);
    for (std::size_t c = 0; c < row.size(); c++)
    {
      out << (c ? "," : "");
      if (std::isnan(row[c]))
      {
        out << "nan";
        continue;
      }
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << buf;
    }
    out << '\n';
  }
}

Json ReportToJson(const SweepReport &r)
{
  Json j;
  j["command"] = r.command;
  j["config"] = ToJson(r.config);
  j["alpha"] = r.sweep.alpha;
  j["materials"] = Json::array();
  for (const auto &[tag, m] : r.sweep.materials.All())
  {
    if (m.is_object)
    {
      j["materials"].push_back({{"tag", tag}, {"mu_r", m.mu_r}, {"sigma", m.sigma_star}});
    }
  }
  j["n_dof"] = r.n_dof;
  j["epsilon"] = r.epsilon;
  j["columns"] = CsvColumns();
  j["rows"] = Json::array();
  for (const auto &s : r.sweep.samples)
  {
    Json row = Json::array();
    for (double v : CsvRow(s))
    {
      row.push_back(std::isnan(v) ? Json() : Json(v));
    }
    j["rows"].push_back(row);
  }
  j["basis"]["rank"] = r.rank;
  j["basis"]["sigma_ratios"] = Json::array();
  for (const auto &s : r.sigma_ratios)
  {
    j["basis"]["sigma_ratios"].push_back(std::vector<double>(s.data(), s.data() + s.size()));
  }
  j["certificate"]["lambda_min"] = r.lambda_min ? Json(*r.lambda_min) : Json();
  j["timings"]["offline"] = r.offline_seconds;
  j["timings"]["online"] = r.online_seconds;
  j["provenance"] = Json::array();
  for (const auto &p : r.sweep.provenance)
  {
    j["provenance"].push_back({{"lemma", p.lemma},
                               {"s", p.s},
                               {"alpha_before", p.alpha_before},
                               {"sigma_before", p.sigma_before}});
  }
  return j;
}

SweepReport ReportFromJson(const Json &j)
{
  SweepReport r;
  try
  {
    r.command = j.at("command").get<std::string>();
    r.config = ParseConfig(j.at("config"));
    r.sweep.alpha = j.at("alpha").get<double>();
    for (const auto &m : j.at("materials"))
    {
      r.sweep.materials.Add(
        {m.at("tag").get<std::string>(), m.at("mu_r").get<double>(), m.at("sigma").get<double>(),
         true});
    }
    r.n_dof = j.value("n_dof", 0);
    r.epsilon = j.value("epsilon", 0.0);
    if (j.at("columns").get<std::vector<std::string>>() != CsvColumns())
    {
      throw ConfigError("report columns do not match this version");
    }
    for (const auto &row : j.at("rows"))
    {
      if (!row.is_array() || row.size() != 32)
      {
        throw ConfigError("report row does not have 32 values");
      }
      std::array<double, 32> v;
      for (int c = 0; c < 32; c++)
      {
        v[c] = row[c].is_null() ? kNaN : row[c].get<double>();
      }
      r.sweep.samples.push_back(SampleFromRow(v));
    }
    if (j.contains("basis"))
    {
      r.rank = j["basis"].at("rank").get<std::array<int, 3>>();
      const auto &ratios = j["basis"].at("sigma_ratios");
      for (int i = 0; i < 3 && i < static_cast<int>(ratios.size()); i++)
      {
        const auto v = ratios[i].get<std::vector<double>>();
        r.sigma_ratios[i] = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
      }
    }
    if (j.contains("certificate") && !j["certificate"]["lambda_min"].is_null())
    {
      r.lambda_min = j["certificate"]["lambda_min"].get<double>();
    }
    if (j.contains("timings"))
    {
      r.offline_seconds = j["timings"].at("offline").get<std::map<std::string, double>>();
      r.online_seconds = j["timings"].at("online").get<std::map<std::string, double>>();
    }
    for (const auto &p : j.value("provenance", Json::array()))
    {
      Provenance pv;
      pv.lemma = p.at("lemma").get<std::string>();
      pv.s = p.at("s").get<double>();
      pv.alpha_before = p.at("alpha_before").get<double>();
      pv.sigma_before = p.at("sigma_before").get<std::map<std::string, double>>();
      r.sweep.provenance.push_back(pv);
    }
  }
  catch (const Json::exception &e)
  {
    throw ConfigError(std::string("malformed sweep report: ") + e.what());
  }
  CheckSweep(r.sweep);
  return r;
}

SweepReport LoadReport(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open sweep report " + path.string());
  }
  try
  {
    return ReportFromJson(Json::parse(in));
  }
  catch (const Json::exception &e)
  {
    throw ConfigError("malformed sweep report " + path.string() + ": " + e.what());
  }
}

std::filesystem::path WriteReport(const SweepReport &report, const std::filesystem::path &dir,
                                  const std::string &stem)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"));
    WriteCsv(csv, report.sweep.samples);
  }
  const auto path = dir / (stem + ".json");
  std::ofstream js(path);
  js << ReportToJson(report).dump(2) << '\n';
  if (!js)
  {
    throw ConfigError("cannot write " + path.string());
  }
  return path;
}

OracleTable RunCompareOracle(const RunConfig &cfg)
{
  cfg.Validate();
  if (cfg.shapes.size() != 1 || !std::holds_alternative<Sphere>(cfg.shapes[0].shape) ||
      cfg.materials.size() != 1)
  {
    throw ConfigError("compare-oracle needs a single sphere with a single material");
  }
  const Sphere &sphere = std::get<Sphere>(cfg.shapes[0].shape);
  const Material &mat = cfg.materials[0];
  const SphereAnalytic exact{cfg.alpha * sphere.radius, mat.mu_r, mat.sigma_star};

  const Prepared prep = Prepare(cfg);
  OracleTable table;
  table.spacing = cfg.spacing;
  const SweepReport main = PodSweep(cfg, prep, cfg.spacing);
  std::optional<SweepReport> other;
  if (cfg.both_spacings)
  {
    other = PodSweep(cfg, prep, cfg.spacing == Spacing::kLog ? Spacing::kLinear : Spacing::kLog);
  }

  auto lambda1 = [](const MPTSample &s) {
    return std::complex<double>(s.eig_real[0], s.eig_imag[0]);
  };
  auto error = [](std::complex<double> e, std::complex<double> c) {
    return std::abs(e) == 0.0 ? kNaN : std::abs(e - c) / std::abs(e);
  };
  table.degenerate = true;
  for (std::size_t k = 0; k < main.sweep.samples.size(); k++)
  {
    OracleRow row;
    row.omega = main.sweep.samples[k].omega;
    row.exact = SphereMptExact(exact, row.omega);
    row.computed = lambda1(main.sweep.samples[k]);
    row.error = error(row.exact, row.computed);
    if (other)
    {
      row.error_other = error(row.exact, lambda1(other->sweep.samples[k]));
    }
    table.degenerate = table.degenerate && std::abs(row.exact) == 0.0;
    table.rows.push_back(row);
  }
  return table;
}

void WriteOracleCsv(std::ostream &out, const OracleTable &table)
{
  const std::string name = SpacingName(table.spacing);
  const std::string other = table.spacing == Spacing::kLog ? "lin" : "log";
  const bool both = !table.rows.empty() && table.rows[0].error_other.has_value();
  out << "omega,exact_re,exact_im,computed_re,computed_im,error_" << name;
  if (both)
  {
    out << ",error_" << other;
  }
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    if (std::isnan(v))
    {
      out << "nan";
      return;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (const auto &r : table.rows)
  {
    put(r.omega);
    for (double v : {r.exact.real(), r.exact.imag(), r.computed.real(), r.computed.imag(),
                     r.error})
    {
      out << ',';
      put(v);
    }
    if (both)
    {
      out << ',';
      put(*r.error_other);
    }
    out << '\n';
  }
}

}  // namespace mpt
