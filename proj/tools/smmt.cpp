#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smmt/netbench.hpp"
#include "smmt/pipeline.hpp"

namespace fs = std::filesystem;
using namespace smmt;

namespace {

constexpr int kSat = 10, kUnsat = 20, kVerified = 0, kRejected = 1, kUsage = 2, kInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input, output, cnf, proof;
  bool no_backward_check = false, no_proof_logging = false, minimize = false, decoy = false, tier = false;
  std::uint64_t seed = 0, conflict_budget = 0;
  int jobs = 1, verbose = 0;
  std::size_t layers = 3, per_layer = 3, width = 8;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void need_file(const std::string& p) {
  if (!fs::is_regular_file(p)) throw UsageError("no such file: " + p);
}

void need_dir(const std::string& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw UsageError("cannot create directory " + p);
}

Instance load(const std::string& path) {
  try {
    return parse_instance(slurp(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

ProveOptions prove_options(const RunConfig& c) {
  ProveOptions o;
  o.backward_check = !c.no_backward_check;
  o.minimize = c.minimize;
  o.jobs = c.jobs;
  o.log_proof = !c.no_proof_logging;
  o.seed = c.seed;
  o.conflict_budget = c.conflict_budget;
  return o;
}

const char* status_line(SolveStatus s) {
  return s == SolveStatus::Sat ? "s SATISFIABLE" : s == SolveStatus::Unsat ? "s UNSATISFIABLE" : "s UNKNOWN";
}

int exit_for(SolveStatus s) { return s == SolveStatus::Sat ? kSat : s == SolveStatus::Unsat ? kUnsat : 0; }

int cmd_solve(const RunConfig& c) {
  need_file(c.input);
  Instance inst = load(c.input);
  ProveOptions o = prove_options(c);
  o.backward_check = false;
  o.log_proof = false;
  ProveResult r = prove(inst, o);
  std::cout << status_line(r.status) << '\n';
  if (r.status == SolveStatus::Sat) {
    std::cout << 'v';
    for (Var v = 1; v <= inst.cnf.num_vars(); ++v) std::cout << ' ' << (r.model.is_true(Lit::pos(v)) ? "" : "-") << v;
    std::cout << " 0\n";
  }
  if (c.verbose) std::cerr << report_to_string(r.report);
  return exit_for(r.status);
}

int cmd_prove(const RunConfig& c) {
  need_file(c.input);
  need_dir(c.output);
  Instance inst = load(c.input);
  if (c.no_proof_logging) throw UsageError("prove needs proof logging");
  ProveResult r = prove(inst, prove_options(c));
  const fs::path base = fs::path(c.output) / fs::path(c.input).stem();
  spill(base.string() + ".report", report_to_string(r.report));
  std::cout << status_line(r.status) << '\n';
  if (r.status == SolveStatus::Unsat) {
    spill(base.string() + ".final.cnf", to_dimacs(r.final_cnf));
    spill(base.string() + ".drat", certificate_to_string(r.drat));
    spill(base.string() + ".cert", certificate_to_string(r.certificate));
    std::cout << (r.report.verified ? "s VERIFIED" : "s NOT VERIFIED") << '\n';
    if (!r.report.verified) {
      std::cerr << "error: final proof rejected: " << r.report.reject_reason << '\n';
      return kInternal;
    }
  }
  if (c.verbose) std::cerr << report_to_string(r.report);
  return exit_for(r.status);
}

int cmd_check(const RunConfig& c) {
  need_file(c.cnf);
  need_file(c.proof);
  CnfFormula f;
  ProofCertificate p;
  try {
    f = parse_dimacs(slurp(c.cnf));
    p = parse_certificate(slurp(c.proof));
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  Verdict v = check_drat(f, p);
  if (v.verified) {
    std::cout << "s VERIFIED\n";
    return kVerified;
  }
  std::cout << "s REJECTED " << to_string(v.reason) << " at record " << v.record << '\n';
  return kRejected;
}

int cmd_gen(const RunConfig& c) {
  need_dir(c.output);
  std::vector<netbench::TierEntry> entries;
  if (c.tier)
    entries = netbench::oracle_tier();
  else
    entries.push_back({c.seed, c.layers, c.per_layer, c.width, c.decoy});
  for (const netbench::TierEntry& e : entries) {
    Instance inst;
    try {
      inst = netbench::encode(netbench::generate(e.seed, e.layers, e.per_layer, e.width, e.decoy));
    } catch (const Error& err) {
      throw UsageError(err.what());
    }
    spill(fs::path(c.output) / (e.name() + ".smmt"), write_instance(inst));
    if (c.verbose) std::cerr << e.name() << ": " << inst.cnf.num_vars() << " vars\n";
  }
  spill(fs::path(c.output) / "manifest.txt", netbench::manifest_to_string(entries));
  return 0;
}

int cmd_bitblast(const RunConfig& c) {
  need_file(c.input);
  Instance inst = load(c.input);
  CnfFormula f = eager_encode(inst);
  spill(c.output, to_dimacs(f));
  if (c.verbose) std::cerr << f.num_vars() << " vars, " << f.size() << " clauses\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT modulo monotonic theories: solve, prove, check"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  app.add_flag("-v,--verbose", c.verbose, "Print the run report to stderr");

  auto solver_flags = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "Solver seed");
    s->add_option("--conflict-budget", c.conflict_budget, "Give up after this many conflicts (0: none)");
    s->add_flag("--no-proof-logging", c.no_proof_logging, "Do not record a proof");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve an instance (exit 10 SAT, 20 UNSAT)");
  solve->add_option("instance", c.input, "Instance file")->required();
  solver_flags(solve);

  CLI::App* prove_cmd = app.add_subcommand("prove", "Solve and write final.cnf, drat, cert and report");
  prove_cmd->add_option("instance", c.input, "Instance file")->required();
  prove_cmd->add_option("-o,--out", c.output, "Output directory")->required();
  prove_cmd->add_flag("--no-backward-check", c.no_backward_check, "Keep every proof record");
  prove_cmd->add_flag("--minimize", c.minimize, "Drop proof records that are not needed");
  prove_cmd->add_option("-j,--jobs", c.jobs, "Threads for lemma discharge")->check(CLI::Range(1, 1024));
  solver_flags(prove_cmd);

  CLI::App* check = app.add_subcommand("check", "Check a DRAT proof (exit 0 verified, 1 rejected)");
  check->add_option("cnf", c.cnf, "DIMACS formula")->required();
  check->add_option("proof", c.proof, "DRAT proof")->required();

  CLI::App* gen = app.add_subcommand("gen-bench", "Generate network reachability instances");
  gen->add_option("--seed", c.seed, "Generator seed");
  gen->add_option("--layers", c.layers, "Component layers")->check(CLI::PositiveNumber);
  gen->add_option("--per-layer", c.per_layer, "Components per layer")->check(CLI::PositiveNumber);
  gen->add_option("--width", c.width, "Address width in bits")->check(CLI::Range(1, 20));
  gen->add_flag("--decoy", c.decoy, "Add an unrelated reachability constraint");
  gen->add_flag("--tier", c.tier, "Write the 24-instance desk suite instead");
  gen->add_option("-o,--out", c.output, "Output directory")->required();

  CLI::App* blast = app.add_subcommand("bitblast", "Eagerly encode every predicate into plain CNF");
  blast->add_option("instance", c.input, "Instance file")->required();
  blast->add_option("-o,--out", c.output, "Output DIMACS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (*solve) return cmd_solve(c);
    if (*prove_cmd) return cmd_prove(c);
    if (*check) return cmd_check(c);
    if (*gen) return cmd_gen(c);
    if (*blast) return cmd_bitblast(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
