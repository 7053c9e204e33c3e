// coxgates: low elements, gates and reduced-word automata of Coxeter systems.
//
//   coxgates info      --type A~2
//   coxgates automaton --type B~2 --kind gate --emit dot
//   coxgates verify    --matrix star.json --seed 7
//   coxgates growth    --type G~2 --max-len 10

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "coxgates/analysis.hpp"
#include "coxgates/errors.hpp"
#include "coxgates/system_spec.hpp"

using namespace coxgates;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3, kInternal = 4 };

struct Common {
  std::string type;
  std::string matrix;
  int threads = 1;
  std::size_t cap_elements = 2'000'000;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* t = cmd->add_option("--type", c.type, "named type, e.g. A3, I2(5), A~2, B~2, D~4");
  auto* m = cmd->add_option("--matrix", c.matrix, "file with a JSON or plain-text Coxeter matrix (0 = infinity)");
  t->excludes(m);
  cmd->add_option("--threads", c.threads, "worker threads for the gate scans")->check(CLI::Range(1, 256));
  cmd->add_option("--cap-elements", c.cap_elements, "abort beyond this many low elements or ball elements");
}

SystemSpec resolve(const Common& c) {
  if (!c.type.empty()) return parse_spec(c.type);
  if (!c.matrix.empty()) return load_spec_file(c.matrix);
  throw CLI::ValidationError("one of --type or --matrix is required");
}

Pipeline make_pipeline(const SystemSpec& spec, const Common& c) {
  Limits lim;
  lim.threads = c.threads;
  lim.max_low_elements = c.cap_elements;
  return Pipeline(new_system(spec.matrix), lim);
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low elements, gates and reduced-word automata of Coxeter systems"};
  app.require_subcommand(1);

  Common common;
  std::string format = "text";
  std::string kind = "gate";
  std::string emit = "dot";
  std::string output;
  int max_len = 12;
  std::uint64_t seed = 1;

  auto* info = app.add_subcommand("info", "cardinalities of the elementary roots, low elements, gates, automata");
  add_common(info, common);
  info->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* automaton = app.add_subcommand("automaton", "emit one of the reduced-word automata");
  add_common(automaton, common);
  automaton->add_option("--kind", kind, "bh, gate, garside-low or min-bh")
      ->check(CLI::IsMember({"bh", "gate", "garside-low", "min-bh"}));
  automaton->add_option("--emit", emit, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  automaton->add_option("-o,--output", output, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run the invariant suite and the evidence checkers");
  add_common(verify, common);
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--max-len", max_len, "word-count comparison depth")->check(CLI::Range(0, 64));
  verify->add_option("--seed", seed, "seed for sampled checks");

  auto* growth = app.add_subcommand("growth", "reduced words per length: automata against brute force");
  add_common(growth, common);
  growth->add_option("--max-len", max_len, "largest length")->check(CLI::Range(0, 64));

  CLI11_PARSE(app, argc, argv);

  try {
    const SystemSpec spec = resolve(common);
    const std::string descriptor = spec.name;
    Pipeline p = make_pipeline(spec, common);

    if (info->parsed()) {
      const Report r = info_report(p, descriptor);
      std::cout << (format == "json" ? r.to_json() : r.to_text());
      return kOk;
    }
    if (automaton->parsed()) {
      Automaton a;
      if (kind == "bh") a = build_canonical(p);
      else if (kind == "min-bh") a = minimize(build_canonical(p));
      else if (kind == "gate") a = build_gate_automaton(p);
      else a = build_garside_low(p);
      write_out(output, emit == "dot" ? export_dot(a, descriptor + " " + kind) : export_json(a));
      return kOk;
    }
    if (verify->parsed()) {
      AnalysisOptions opt;
      opt.seed = seed;
      opt.count_depth = max_len;
      opt.ball_cap = common.cap_elements;
      const Report r = verify_invariants(p, descriptor, opt);
      std::cout << (format == "json" ? r.to_json() : r.to_text());
      return r.ok() ? kOk : kFailed;
    }
    if (growth->parsed()) {
      const auto bh = word_counts(build_canonical(p), max_len);
      const auto gate = word_counts(build_gate_automaton(p), max_len);
      const auto brute = brute_force_counts(p.system(), max_len, common.cap_elements);
      std::cout << "length  canonical  gate  brute-force\n";
      bool same = true;
      for (int k = 0; k <= max_len; ++k) {
        std::cout << k << "  " << bh[k] << "  " << gate[k] << "  " << brute[k] << "\n";
        same = same && bh[k] == brute[k] && gate[k] == brute[k];
      }
      if (!same) std::cerr << "coxgates: automaton counts differ from brute force\n";
      return same ? kOk : kFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "coxgates: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "coxgates: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "coxgates: invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "coxgates: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const InternalError& e) {
    std::cerr << "coxgates: internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "coxgates: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
