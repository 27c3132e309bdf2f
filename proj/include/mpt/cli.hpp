// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_CLI_HPP
#define MPT_CLI_HPP

#include <array>
#include <complex>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>
#include <Eigen/Core>
#include <json.hpp>
#include "mpt/mesh.hpp"
#include "mpt/pod.hpp"
#include "mpt/scaling.hpp"
#include "mpt/tensors.hpp"

namespace mpt
{

using Json = nlohmann::json;

// Either a generated box mesh refined toward the shapes, or a mesh file.
struct MeshSource
{
  double half_width = 100.0;
  int divisions = 4;
  std::optional<int> refine_levels;  // 5 for generated meshes, 0 for files
  std::optional<std::filesystem::path> file;
};

struct RunConfig
{
  MeshSource mesh;
  std::vector<TaggedShape> shapes;
  std::vector<Material> materials;  // object regions
  double alpha = 0.01;
  double omega_min = 1e2;
  double omega_max = 1e8;
  int snapshots = 13;
  Spacing spacing = Spacing::kLog;
  int outputs = 20;  // N0
  double tol = 1e-4;
  std::optional<double> epsilon;
  double solver_tol = 1e-10;
  int verification_count = 20;
  std::optional<double> omega_prime;  // defaults to omega_min
  bool both_spacings = false;         // compare-oracle only
  std::filesystem::path out_dir = "out";
  int threads = 1;

  // Throws ConfigError naming the first invalid field.
  void Validate() const;
};

// Every key is optional; see ConfigHelp() for the defaults.
RunConfig ParseConfig(const Json &j);
RunConfig LoadConfig(const std::filesystem::path &path);
Json ToJson(const RunConfig &cfg);
std::string ConfigHelp();

Mesh BuildMesh(const RunConfig &cfg);
MaterialTable BuildMaterials(const RunConfig &cfg);

struct SweepReport
{
  std::string command;
  RunConfig config;
  Sweep sweep;
  int n_dof = 0;
  double epsilon = 0.0;
  std::array<int, 3> rank{};
  std::array<Eigen::VectorXd, 3> sigma_ratios;
  std::optional<double> lambda_min;
  std::map<std::string, double> offline_seconds;  // theta0, snapshots, svd, projection, certificate
  std::map<std::string, double> online_seconds;   // solves, outputs, delta
};

SweepReport RunSweepFull(const RunConfig &cfg);
SweepReport RunSweepPod(const RunConfig &cfg);

// Applies one scaling lemma ("conductivity" or "size") to a report read back from JSON.
SweepReport ScaleReport(const SweepReport &in, const std::string &lemma, double s);

// Column order of the sweep CSV.
const std::vector<std::string> &CsvColumns();
std::array<double, 32> CsvRow(const MPTSample &sample);
MPTSample SampleFromRow(const std::array<double, 32> &row);
void WriteCsv(std::ostream &out, const std::vector<MPTSample> &samples);

Json ReportToJson(const SweepReport &report);
SweepReport ReportFromJson(const Json &j);
SweepReport LoadReport(const std::filesystem::path &path);

// Writes <stem>.csv and <stem>.json into dir and returns the JSON path.
std::filesystem::path WriteReport(const SweepReport &report, const std::filesystem::path &dir,
                                  const std::string &stem);

// Lambda_1 = lambda_1(N0 + R) + i lambda_1(I), eigenvalues ascending, against the exact
// sphere value. error is NaN when the exact value is zero (degenerate case).
struct OracleRow
{
  double omega = 0.0;
  std::complex<double> exact, computed;
  double error = 0.0;
  std::optional<double> error_other;  // other snapshot spacing when both are requested
};

struct OracleTable
{
  Spacing spacing = Spacing::kLog;
  bool degenerate = false;
  std::vector<OracleRow> rows;
};

// Throws ConfigError unless the object is a single sphere with one material.
OracleTable RunCompareOracle(const RunConfig &cfg);
void WriteOracleCsv(std::ostream &out, const OracleTable &table);

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitCertificate = 4;

}  // namespace mpt

#endif  // MPT_CLI_HPP
