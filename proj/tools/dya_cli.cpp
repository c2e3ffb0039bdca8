#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dya/anonymity.hpp"
#include "dya/checker.hpp"
#include "dya/parse.hpp"
#include "dya/protocol.hpp"
#include "dya/runtime.hpp"
#include "dya/sequent_file.hpp"

using namespace dya;

namespace {

enum Status { kOk = 0, kNegative = 1, kUsage = 2, kInconclusive = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

const std::vector<std::string> kExamples{"foo", "foo_mutant", "helios", "leak"};

std::string example_text(const std::string& name) {
  if (name == "foo") return foo_source();
  if (name == "foo_mutant") return foo_mutant_source();
  if (name == "helios") return helios_source(2);
  if (name == "leak") return leak_sequent_source();
  throw UsageError("unknown example '" + name + "'");
}

// A built-in model name or a path.
Protocol load_protocol(const std::string& arg, int helios_voters = 2) {
  if (arg == "foo") return builtin_foo();
  if (arg == "foo_mutant") return builtin_foo_mutant();
  if (arg == "helios") return builtin_helios(helios_voters);
  return parse_protocol(slurp(arg));
}

std::string load_sequent_text(const std::string& arg) {
  return arg == "leak" ? leak_sequent_source() : slurp(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dolev-Yao reasoning with assertions"};
  app.require_subcommand(1, 1);

  std::string file, trace_file, out_file, sessions, policy = "forward";
  bool safe = false, show_proof = false, any_cast = false;
  int budget_depth = 2, seeds = 20, tests = 500, test_depth = 3, voters = 2;
  std::size_t branches = 4096, steps = 1000;
  std::uint64_t seed = 0;

  auto* derive_cmd = app.add_subcommand("derive", "decide X, Phi |- goal for a sequent file");
  derive_cmd->add_option("file", file, "sequent file")->required();
  derive_cmd->add_flag("--safe", safe, "disallow or-elimination and exists-elimination");
  derive_cmd->add_option("--budget-depth", budget_depth, "witness depth budget");
  derive_cmd->add_option("--budget-branches", branches, "case-split branch cap");
  derive_cmd->add_flag("--proof", show_proof, "print the proof");

  auto* validate_cmd = app.add_subcommand("validate", "check a protocol file");
  validate_cmd->add_option("file", file, "protocol file")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "simulate a run");
  sim_cmd->add_option("file", file, "protocol file")->required();
  sim_cmd->add_option("--sessions", sessions, "sessions, e.g. \"voter(V0, v0) authority(A, V0)\"");
  sim_cmd->add_option("--voters", voters, "voting setup with this many voters (when --sessions is absent)");
  sim_cmd->add_option("--seed", seed, "scheduler seed");
  sim_cmd->add_option("--steps", steps, "maximum run length");
  sim_cmd->add_option("--policy", policy, "receive recipes: forward or synth2")
      ->check(CLI::IsMember({"forward", "synth2"}));
  sim_cmd->add_option("--trace", out_file, "write the trace here instead of stdout");

  auto* replay_cmd = app.add_subcommand("replay", "validate a trace against a protocol");
  replay_cmd->add_option("file", file, "protocol file")->required();
  replay_cmd->add_option("trace", trace_file, "trace file")->required();

  auto* anon_cmd = app.add_subcommand("anonymity", "run the vote-swap anonymity pipeline");
  anon_cmd->add_option("file", file, "protocol file")->required();
  anon_cmd->add_option("--seeds", seeds, "number of seeds (0..n-1)");
  anon_cmd->add_option("--tests", tests, "tests per seed");
  anon_cmd->add_option("--depth", test_depth, "test assertion depth");
  anon_cmd->add_option("--report", out_file, "report file; traces are written next to it");
  anon_cmd->add_flag("--any-cast", any_cast, "accept casts that are not anonymous sends");

  auto* ex_cmd = app.add_subcommand("examples", "list or dump the built-in models");
  std::vector<std::string> ex_args;
  ex_cmd->add_option("args", ex_args, "list | dump NAME")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }

  SearchBudget budget;
  budget.witness_depth = budget_depth;
  budget.branch_cap = branches;

  try {
    if (*derive_cmd) {
      SequentFile f = parse_sequent_file(load_sequent_text(file));
      Verdict v = derive(f.sequent.X, f.sequent.Phi, f.sequent.goal, safe ? Mode::Safe : Mode::Full, budget);
      if (v.derivable) {
        std::string why;
        const bool ok = check_proof(f.sequent.X, f.sequent.Phi, v.proof, f.sequent.goal, &why);
        std::cout << "Derivable (" << v.branches << " branch(es), proof " << (ok ? "checked" : "REJECTED: " + why)
                  << ")\n";
        if (show_proof) std::cout << to_string(v.proof);
        return ok ? kOk : kNegative;
      }
      if (v.exhausted) {
        std::cout << "Inconclusive: " << v.note << '\n';
        return kInconclusive;
      }
      std::cout << "NotDerivable" << (safe ? " (safe rules only)" : "") << '\n';
      return kNegative;
    }

    if (*validate_cmd) {
      Protocol p = load_protocol(file);
      auto diags = validate_protocol(p);
      for (const Diagnostic& d : diags) std::cout << to_string(d) << '\n';
      std::cout << p.name << ": " << p.roles.size() << " role(s), " << diags.size() << " diagnostic(s)\n";
      return diags.empty() ? kOk : kNegative;
    }

    if (*sim_cmd) {
      Protocol p = load_protocol(file, voters);
      InitialSetup setup = voting_setup(p, voters);
      if (!sessions.empty()) {
        setup.sessions = parse_sessions(sessions, p);
      }
      Recipes r;
      r.policy = policy == "synth2" ? RecipePolicy::Synth : RecipePolicy::Forward;
      Run run = simulate(p, setup, seed, r, steps, budget);
      const std::string text = write_trace(run);
      if (out_file.empty())
        std::cout << text;
      else
        spit(out_file, text);
      return kOk;
    }

    if (*replay_cmd) {
      Protocol p = load_protocol(file);
      Run run = parse_trace(slurp(trace_file), p);
      RunCheck rc = validate_run(p, run, budget);
      for (const std::string& w : rc.warnings) std::cerr << "warning: " << w << '\n';
      if (rc.ok) {
        std::cout << "valid run of " << run.actions.size() << " step(s)\n";
        return kOk;
      }
      std::cout << "invalid at " << rc.detail << '\n';
      return kNegative;
    }

    if (*anon_cmd) {
      Protocol p = load_protocol(file);
      AnonymityConfig cfg;
      for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
      cfg.tests = tests;
      cfg.depth = test_depth;
      cfg.budget = budget;
      cfg.require_anonymous = !any_cast;
      AnonymityReport rep = check_anonymity_foo(p, cfg);
      std::string text = format_report(rep);
      if (!out_file.empty()) {
        std::string paths;
        for (const SeedReport& s : rep.seeds) {
          const std::string base = out_file + ".seed" + std::to_string(s.seed);
          spit(base + ".trace", s.trace);
          spit(base + ".swapped.trace", s.swapped_trace);
          paths += "trace seed=" + std::to_string(s.seed) + " " + base + ".trace " + base + ".swapped.trace\n";
        }
        text += paths;
        spit(out_file, text);
      }
      std::size_t passed = 0;
      for (const SeedReport& s : rep.seeds) passed += s.pass();
      std::cout << (out_file.empty() ? text : "") << passed << '/' << rep.seeds.size() << " seeds pass\n";
      if (rep.all_pass()) return kOk;
      const bool only_inconclusive = std::all_of(rep.seeds.begin(), rep.seeds.end(), [](const SeedReport& s) {
        return s.pass() || (s.failure.empty() && s.tests.indistinguishable && s.tests.inconclusive > 0 &&
                            s.run_valid && s.swapped_valid && s.swp_X && s.swp_phi && s.safety_left &&
                            s.safety_right);
      });
      return only_inconclusive ? kInconclusive : kNegative;
    }

    if (*ex_cmd) {
      if (ex_args[0] == "list" && ex_args.size() == 1) {
        for (const std::string& n : kExamples) std::cout << n << '\n';
        return kOk;
      }
      if (ex_args[0] == "dump" && ex_args.size() == 2) {
        std::cout << example_text(ex_args[1]);
        return kOk;
      }
      throw UsageError("usage: examples list | examples dump NAME");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNegative;
  }
  return kUsage;
}
