// medsolve: minimum-error discrimination of linearly independent ensembles from the shell.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "medsolve/baselines.hpp"
#include "medsolve/io.hpp"
#include "medsolve/rotation_map.hpp"

using namespace medsolve;

namespace {

struct Options {
  double tol = 1e-8;
  int max_iter = 200;
  std::string solver = "newton";
  std::uint64_t seed = 0;
  std::string out;

  std::string input;
  std::string second_input;
  std::string profile;
  std::string sizes = "4,8,12,16";
  std::string solvers = "newton,homotopy,barrier";
  int repeats = 3;
};

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPositiveSemidefinite:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::RankMismatch:
    case ErrorKind::ProfileMismatch:
    case ErrorKind::InvalidProfile:
    case ErrorKind::InvalidEnsemble:
    case ErrorKind::ParseError:
      return true;
    default:
      return false;
  }
}

std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw MedError(ErrorKind::ParseError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw MedError(ErrorKind::ParseError, "cannot write '" + o.out + "'");
  f << text;
}

void write_json(const Options& o, const json& j) { write_text(o, j.dump(2) + "\n"); }

std::vector<int> int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw MedError(ErrorKind::ParseError, std::string("bad entry '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw MedError(ErrorKind::ParseError, std::string("empty ") + what);
  return out;
}

std::vector<std::string> string_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.max_iters = o.max_iter;
  return cfg;
}

Method method_of(const Options& o) {
  if (o.solver == "newton") return Method::Newton;
  if (o.solver == "homotopy") return Method::Homotopy;
  throw MedError(ErrorKind::ParseError, "solver '" + o.solver + "' does not produce a POVM here");
}

Ensemble load_ensemble(const std::string& path) { return ensemble_from_json(parse_json(read_text(path))); }

int cmd_solve(const Options& o) {
  const Ensemble e = load_ensemble(o.input);
  if (o.solver == "barrier") {
    BarrierConfig cfg;
    cfg.max_inner = o.max_iter;
    const auto res = barrier_solve(e, cfg);
    const auto dual = dual_objective(e, res.z);
    write_json(o, {{"z", matrix_to_json(res.z)},
                   {"p_success", res.p_success_upper},
                   {"iterations", res.inner_iterations},
                   {"feasibility_margin", dual.feasibility_margin}});
    return dual.feasibility_margin >= -o.tol ? 0 : 2;
  }
  const MedResult r = solve_ensemble(e, method_of(o), solver_config(o));
  const Certificate cert = check_optimal(e, r.povm, o.tol);
  json doc = povm_to_json(r.povm);
  doc["p_success"] = r.p_success;
  doc["residual"] = r.solution.residual;
  doc["iterations"] = r.solution.iterations;
  doc["certificate"] = certificate_to_json(cert);
  write_json(o, doc);
  return cert.passed ? 0 : 2;
}

int cmd_verify(const Options& o) {
  const Ensemble e = load_ensemble(o.input);
  const Povm p = povm_from_json(parse_json(read_text(o.second_input)), e.profile);
  const Certificate cert = check_optimal(e, p, o.tol);
  write_json(o, certificate_to_json(cert));
  return cert.passed ? 0 : 2;
}

int cmd_map(const Options& o) {
  const Ensemble e = load_ensemble(o.input);
  const MedResult r = solve_ensemble(e, method_of(o), solver_config(o));
  write_json(o, ensemble_to_json(map_r(e, r.solution, r.decomposition).ensemble));
  return 0;
}

int cmd_invmap(const Options& o) {
  write_json(o, ensemble_to_json(map_r_inverse(load_ensemble(o.input))));
  return 0;
}

int cmd_pgm(const Options& o) {
  write_json(o, povm_to_json(pgm(load_ensemble(o.input))));
  return 0;
}

int cmd_gen(const Options& o) {
  const RankProfile profile(int_list(o.profile, "--profile"));
  const Ensemble e = random_ensemble(profile, o.seed);
  write_json(o, ensemble_to_json(e, EnsembleMetadata{o.seed, profile.ranks()}));
  return 0;
}

int cmd_bench(const Options& o) {
  BenchConfig cfg;
  cfg.sizes = int_list(o.sizes, "--sizes");
  cfg.repeats = o.repeats;
  cfg.seed = o.seed;
  cfg.solvers = string_list(o.solvers);
  const ScalingReport rep = bench_scaling(cfg);
  write_text(o, rep.to_csv());
  for (const auto& [solver, slope] : rep.slopes) {
    std::cerr << "slope " << solver << ' ' << slope << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-error discrimination of linearly independent quantum ensembles"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "Certificate tolerance")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Iteration limit")->capture_default_str();
  app.add_option("--solver", o.solver, "newton, homotopy or barrier")
      ->check(CLI::IsMember({"newton", "homotopy", "barrier"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Optimal POVM, success probability and certificate");
  solve->add_option("ensemble", o.input, "Ensemble JSON (default stdin)");
  auto* verify = app.add_subcommand("verify", "Check a POVM for optimality");
  verify->add_option("ensemble", o.input, "Ensemble JSON")->required();
  verify->add_option("povm", o.second_input, "POVM JSON (default stdin)");
  auto* map = app.add_subcommand("map", "Image of an ensemble under the rotation map");
  map->add_option("ensemble", o.input, "Ensemble JSON (default stdin)");
  auto* invmap = app.add_subcommand("invmap", "Preimage of an ensemble under the rotation map");
  invmap->add_option("ensemble", o.input, "Ensemble JSON (default stdin)");
  auto* pgm_cmd = app.add_subcommand("pgm", "Pretty good measurement of an ensemble");
  pgm_cmd->add_option("ensemble", o.input, "Ensemble JSON (default stdin)");
  auto* gen = app.add_subcommand("gen", "Random ensemble with a given rank profile");
  gen->add_option("--profile", o.profile, "Ranks r1,r2,...")->required();
  auto* bench = app.add_subcommand("bench", "Timing of the solvers across dimensions (CSV)");
  bench->add_option("--sizes", o.sizes, "Dimensions n")->capture_default_str();
  bench->add_option("--repeats", o.repeats, "Instances per size")->capture_default_str();
  bench->add_option("--solvers", o.solvers, "Subset of newton,homotopy,barrier")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*verify) return cmd_verify(o);
    if (*map) return cmd_map(o);
    if (*invmap) return cmd_invmap(o);
    if (*pgm_cmd) return cmd_pgm(o);
    if (*gen) return cmd_gen(o);
    if (*bench) return cmd_bench(o);
  } catch (const MedError& e) {
    std::cout << error_to_json(e).dump(2) << '\n';
    return is_input_error(e.kind()) ? 1 : 2;
  }
  return 1;
}
