#include "trslab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "trslab/errors.hpp"
#include "trslab/experiments.hpp"
#include "trslab/gltr.hpp"
#include "trslab/matrix_market.hpp"
#include "trslab/verify.hpp"

namespace trslab {
namespace {

using nlohmann::json;

struct SolveArgs {
  std::string matrix;
  std::string gradient;
  std::optional<std::uint64_t> seedGradient;
  double delta = 1.0;
  double tol = 1e-12;
  std::size_t kMax = 1000;
  std::string solutionOut;
};

struct ExperimentArgs {
  std::string name;
  std::string specPath;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<std::size_t> reflectors;
  std::size_t kMax = 300;
  double residTol = 1e-15;
  std::size_t checkpointEvery = 5;
  bool gamma = false;
  std::string outDir = ".";
};

json kktJson(const KktReport& k) {
  return {{"feasibility_gap", k.feasibilityGap},
          {"stationarity", k.stationarity},
          {"complementarity", k.complementarity},
          {"curvature_margin", k.curvatureMargin},
          {"pass", k.pass}};
}

int cmdSolve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  SymmetricLinearOperator mat = readMatrixMarket(std::filesystem::path(a.matrix));
  Vector g;
  if (a.seedGradient) {
    g = seededUnitVector(mat.dimension(), *a.seedGradient);
  } else {
    g = readVector(std::filesystem::path(a.gradient));
    if (g.size() != mat.dimension())
      throw ParseError("gradient has " + std::to_string(g.size()) + " entries, matrix order is " +
                           std::to_string(mat.dimension()),
                       1);
  }

  GltrOptions opts;
  opts.residTol = a.tol;
  opts.kMax = a.kMax;
  GltrResult res;
  try {
    res = gltrSolve(mat, g, a.delta, opts);
  } catch (const NearHardCase& e) {
    json j{{"case", "near-hard"},
           {"error", e.what()},
           {"lambda", e.lambda()},
           {"theta_min", e.thetaMin()},
           {"gap", e.gap()}};
    out << j.dump(2) << "\n";
    err << "trslab: " << e.what() << "\n";
    return kExitNearHard;
  }

  const KktReport kkt = checkKkt(mat, g, a.delta, res.lambda, res.s, std::max(a.tol, 1e-12) * 1e2);
  const CaseTag tag = res.history.empty() ? CaseTag::Boundary : res.history.back().caseTag;
  json j{{"lambda", res.lambda},
         {"s_norm", norm2(res.s)},
         {"q", objectiveDirect(mat, g, res.s)},
         {"case", std::string(caseName(tag))},
         {"iterations", res.history.size()},
         {"termination", std::string(terminationName(res.termination))},
         {"kkt", kktJson(kkt)}};
  out << j.dump(2) << "\n";
  if (!a.solutionOut.empty()) writeVector(a.solutionOut, res.s);
  if (res.termination == Termination::KMax) {
    err << "trslab: residual tolerance not reached within " << a.kMax << " iterations\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmdExperiment(const ExperimentArgs& a, std::ostream& out) {
  ProblemSpec spec;
  std::string name;
  if (!a.specPath.empty()) {
    spec = specFromJson(readFile(a.specPath));
    name = std::filesystem::path(a.specPath).stem().string();
  } else {
    spec = ProblemSpec::defaults(parseFamily(a.name));
    name = std::string(familyName(spec.family));
  }
  if (a.n) spec.n = *a.n;
  if (a.seed) spec.seed = *a.seed;
  if (a.delta) spec.delta = *a.delta;
  if (a.reflectors) spec.params["reflectors"] = static_cast<double>(*a.reflectors);
  spec.validate();

  ExperimentOptions opts;
  opts.kMax = a.kMax;
  opts.residTol = a.residTol;
  opts.checkpointEvery = a.checkpointEvery;
  opts.gammaTilde = a.gamma;
  const ExperimentTable table = runExperiment(spec, opts);
  std::filesystem::create_directories(a.outDir);
  writeExperimentOutputs(table, a.outDir, name);

  const auto& sd = table.spectrum;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "alpha1 %.4f  alpha_n %.4f  kappa %.4f  t %.4f  lambda_opt %.4f  q(s_opt) %.4f\n",
                sd.alpha1, sd.alphaN, sd.kappa, sd.t, sd.lambdaOpt, table.reference.qOpt);
  out << buf;
  const std::filesystem::path dir(a.outDir);
  out << "iterations " << table.rows.size() << " (" << terminationName(table.termination) << ")\n";
  out << "wrote " << (dir / (name + ".csv")).string() << ", " << (dir / (name + ".plt")).string()
      << ", " << (dir / (name + ".summary.json")).string() << "\n";
  return kExitOk;
}

int cmdVerify(const std::string& scale, std::ostream& out) {
  const VerifyScale s = scale == "full" ? VerifyScale::Full : VerifyScale::Quick;
  const VerifyReport report = runVerification(s);
  out << formatReport(report);
  return report.pass() ? kExitOk : kExitFailure;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lanczos trust-region solver and convergence experiments", "trslab"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve min g's + s'As/2 subject to ||s|| <= delta");
  solve->add_option("matrix", sa.matrix, "Symmetric matrix in Matrix Market format")
      ->required()
      ->check(CLI::ExistingFile);
  auto* gradOpt = solve->add_option("gradient", sa.gradient, "Gradient as whitespace-separated reals");
  auto* seedOpt = solve->add_option("--seed-gradient", sa.seedGradient,
                                    "Use a seeded random unit gradient instead of a file");
  gradOpt->excludes(seedOpt);
  solve->add_option("--delta", sa.delta, "Trust-region radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  solve->add_option("--tol", sa.tol, "Stopping tolerance on the residual estimate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  solve->add_option("--kmax", sa.kMax, "Maximum Lanczos steps")->capture_default_str();
  solve->add_option("--solution", sa.solutionOut, "Write the solution vector to this file");

  ExperimentArgs ea;
  auto* exper = app.add_subcommand("experiment", "Run a convergence experiment and write CSV, plot script and summary");
  exper->add_option("name", ea.name, "Problem family: 1a, 1b, 2, 3 or 4")
      ->check(CLI::IsMember({"1a", "1b", "2", "3", "4"}));
  auto* specOpt = exper->add_option("--spec", ea.specPath, "Problem spec as JSON (family, n, delta, seed, params)")
                      ->check(CLI::ExistingFile);
  exper->add_option("--n", ea.n, "Problem order")->check(CLI::Range(2ul, 100000000ul));
  exper->add_option("--seed", ea.seed, "Random seed");
  exper->add_option("--delta", ea.delta, "Trust-region radius")->check(CLI::PositiveNumber);
  exper->add_option("--reflectors", ea.reflectors,
                    "Apply a random orthogonal similarity built from this many Householder reflectors");
  exper->add_option("--kmax", ea.kMax, "Maximum Lanczos steps")->capture_default_str();
  exper->add_option("--resid-tol", ea.residTol, "Stop once the residual estimate falls below this")
      ->capture_default_str();
  exper->add_option("--checkpoint-every", ea.checkpointEvery,
                    "Evaluate the separation-based bound every this many steps")
      ->capture_default_str();
  exper->add_flag("--gamma", ea.gamma, "Also evaluate the projected-coupling norm at checkpoints");
  exper->add_option("--out", ea.outDir, "Output directory")->capture_default_str();

  std::string scale = "quick";
  auto* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("scale", scale, "quick or full")
      ->capture_default_str()
      ->check(CLI::IsMember({"quick", "full"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "trslab: " << e.what() << "\n";
    err << "run 'trslab --help' for usage\n";
    return kExitInput;
  }

  try {
    if (solve->parsed()) {
      if (sa.gradient.empty() && !sa.seedGradient) {
        err << "trslab: solve needs a gradient file or --seed-gradient\n";
        return kExitInput;
      }
      return cmdSolve(sa, out, err);
    }
    if (exper->parsed()) {
      if (ea.name.empty() == specOpt->empty()) {
        err << "trslab: experiment needs exactly one of a family name or --spec\n";
        return kExitInput;
      }
      return cmdExperiment(ea, out);
    }
    if (verify->parsed()) return cmdVerify(scale, out);
  } catch (const ParseError& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidSpec& e) {
    err << "trslab: invalid spec: " << e.what() << "\n";
    return kExitInput;
  } catch (const IoError& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitInput;
  } catch (const NearHardCase& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitNearHard;
  } catch (const HardOrIndefiniteShift& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitNearHard;
  } catch (const NoConvergence& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "trslab: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace trslab
