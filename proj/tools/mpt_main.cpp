// SPDX-License-Identifier: Apache-2.0

// Command-line front end: sweep-full, sweep-pod, scale, compare-oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <CLI11.hpp>
#include "mpt/cli.hpp"
#include "mpt/errors.hpp"

namespace
{

struct Overrides
{
  std::string config;
  std::string out;
  std::optional<int> threads, snapshots, outputs;
  std::optional<double> tol;
  std::optional<std::string> spacing;
};

mpt::RunConfig Load(const Overrides &o)
{
  mpt::RunConfig cfg = mpt::LoadConfig(o.config);
  if (!o.out.empty())
  {
    cfg.out_dir = o.out;
  }
  if (o.threads)
  {
    cfg.threads = *o.threads;
  }
  if (o.snapshots)
  {
    cfg.snapshots = *o.snapshots;
  }
  if (o.outputs)
  {
    cfg.outputs = *o.outputs;
  }
  if (o.tol)
  {
    cfg.tol = *o.tol;
  }
  if (o.spacing)
  {
    cfg.spacing = mpt::ParseSpacing(*o.spacing);
  }
  cfg.Validate();
  return cfg;
}

void Summary(const mpt::SweepReport &r, const std::filesystem::path &path)
{
  std::printf("%s: %zu rows, %d dofs -> %s\n", r.command.c_str(), r.sweep.samples.size(), r.n_dof,
              path.string().c_str());
  if (r.rank[0] > 0)
  {
    std::printf("  M = %d %d %d\n", r.rank[0], r.rank[1], r.rank[2]);
  }
  for (const auto &[stage, t] : r.offline_seconds)
  {
    std::printf("  offline %-12s %.3f s\n", stage.c_str(), t);
  }
  for (const auto &[stage, t] : r.online_seconds)
  {
    std::printf("  online  %-12s %.6f s\n", stage.c_str(), t);
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Magnetic polarizability tensor sweeps: full order, reduced order with output "
               "certificates, scaling and analytic comparison"};
  app.footer(mpt::ConfigHelp());
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory (overrides out_dir)");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "truncation tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--snapshots", o.snapshots, "number of snapshots N")->check(CLI::PositiveNumber);
  app.add_option("--spacing", o.spacing, "snapshot and output spacing")
    ->check(CLI::IsMember({"log", "lin"}));
  app.add_option("--outputs", o.outputs, "number of output frequencies N0")
    ->check(CLI::PositiveNumber);

  auto *full = app.add_subcommand("sweep-full", "full-order sweep at N0 frequencies");
  auto *pod = app.add_subcommand("sweep-pod", "reduced-order sweep with certificates");
  auto *oracle = app.add_subcommand("compare-oracle", "reduced sweep against the exact sphere");
  auto *scale = app.add_subcommand("scale", "apply a scaling lemma to a sweep report");
  std::string input, lemma;
  double s = 1.0;
  scale->add_option("--input", input, "sweep report (.json) written by this tool")
    ->required()
    ->check(CLI::ExistingFile);
  scale->add_option("--lemma", lemma, "conductivity or size")
    ->required()
    ->check(CLI::IsMember({"conductivity", "size"}));
  scale->add_option("--s", s, "scale factor")->required()->check(CLI::PositiveNumber);
  for (auto *sub : {full, pod, oracle, scale})
  {
    sub->fallthrough();
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? mpt::kExitOk : mpt::kExitConfig;
  }

  try
  {
    if (scale->parsed())
    {
      const mpt::SweepReport in = mpt::LoadReport(input);
      const mpt::SweepReport out = mpt::ScaleReport(in, lemma, s);
      const std::filesystem::path dir =
        o.out.empty() ? std::filesystem::path(input).parent_path() : std::filesystem::path(o.out);
      const std::string stem = std::filesystem::path(input).stem().string() + "_" + lemma;
      Summary(out, mpt::WriteReport(out, dir, stem));
      return mpt::kExitOk;
    }
    if (o.config.empty())
    {
      std::cerr << "--config is required\n";
      return mpt::kExitConfig;
    }
    const mpt::RunConfig cfg = Load(o);
    if (full->parsed())
    {
      const mpt::SweepReport r = mpt::RunSweepFull(cfg);
      Summary(r, mpt::WriteReport(r, cfg.out_dir, "sweep_full"));
    }
    else if (pod->parsed())
    {
      const mpt::SweepReport r = mpt::RunSweepPod(cfg);
      Summary(r, mpt::WriteReport(r, cfg.out_dir, "sweep_pod"));
    }
    else
    {
      const mpt::OracleTable t = mpt::RunCompareOracle(cfg);
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = cfg.out_dir / "oracle.csv";
      std::ofstream csv(path);
      mpt::WriteOracleCsv(csv, t);
      mpt::WriteOracleCsv(std::cout, t);
      if (t.degenerate)
      {
        std::cout << "degenerate: the exact tensor is zero at every frequency\n";
      }
    }
    return mpt::kExitOk;
  }
  catch (const mpt::ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return mpt::kExitConfig;
  }
  catch (const mpt::MeshError &e)
  {
    std::cerr << "mesh error: " << e.what() << '\n';
    return mpt::kExitConfig;
  }
  catch (const mpt::SolverError &e)
  {
    std::cerr << "solver error: " << e.what() << " (residual " << e.achieved_residual << ")\n";
    return mpt::kExitSolver;
  }
  catch (const mpt::CertificateError &e)
  {
    std::cerr << "certificate unavailable: " << e.what() << '\n';
    return mpt::kExitCertificate;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return mpt::kExitSolver;
  }
}
