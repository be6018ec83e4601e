// Command-line front end: simulate walks, swims and trees; run named checks.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwr/rwr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitChecksFailed = 3;

int exit_code(rwr_status s) {
  switch (s) {
    case RWR_OK: return kExitOk;
    case RWR_ERR_IO: return kExitIo;
    case RWR_ERR_INTERNAL: return kExitIo;
    default: return kExitUsage;
  }
}

int report(rwr_status s) {
  std::cerr << "rwr: " << rwr_status_string(s) << ": " << rwr_last_error() << "\n";
  return exit_code(s);
}

struct Config {
  rwr_config* ptr = nullptr;
  Config() { rwr_config_new(&ptr); }
  ~Config() { rwr_config_free(ptr); }
};

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

// Seed from REINFORCE_WALK_SEED; false if set but malformed.
bool env_seed(std::uint64_t& seed, bool& found) {
  found = false;
  const char* env = std::getenv("REINFORCE_WALK_SEED");
  if (env == nullptr) return true;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    std::cerr << "rwr: REINFORCE_WALK_SEED is not an unsigned integer: '" << env << "'\n";
    return false;
  }
  seed = v;
  found = true;
  return true;
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

struct SimulateArgs {
  std::string kind;
  std::string model, method, format, output, config, t_grid;
  double b = 0.0, p = 0.0, alpha = 0.0;
  std::int64_t dim = 0, n = 0, replicas = 0, threads = 0;
  std::uint64_t seed = 0;
  bool dump = false;
};

int run_simulate(CLI::App& cmd, const SimulateArgs& a) {
  Config cfg;
  rwr_status s = rwr_config_set_string(cfg.ptr, "kind", a.kind.c_str());
  if (s != RWR_OK) return report(s);

  std::uint64_t seed = 0;
  bool found = false;
  if (!env_seed(seed, found)) return kExitUsage;
  if (found) rwr_config_set_int(cfg.ptr, "seed", static_cast<std::int64_t>(seed));
  std::string output = a.output;
  if (!a.config.empty()) {
    std::string text;
    if (!read_file(a.config, text)) {
      std::cerr << "rwr: cannot read config file '" << a.config << "'\n";
      return kExitIo;
    }
    if ((s = rwr_config_load_json(cfg.ptr, text.c_str())) != RWR_OK) return report(s);
  }

  auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
  struct Str { const char* flag; const char* key; const std::string& value; };
  for (const Str& o : {Str{"--model", "model", a.model}, Str{"--method", "method", a.method},
                       Str{"--format", "format", a.format}, Str{"--t-grid", "t_grid", a.t_grid}})
    if (given(o.flag) && (s = rwr_config_set_string(cfg.ptr, o.key, o.value.c_str())) != RWR_OK) return report(s);
  struct Real { const char* flag; const char* key; double value; };
  for (const Real& o : {Real{"--b", "b", a.b}, Real{"--p", "p", a.p}, Real{"--alpha", "alpha", a.alpha}})
    if (given(o.flag) && (s = rwr_config_set_real(cfg.ptr, o.key, o.value)) != RWR_OK) return report(s);
  struct Int { const char* flag; const char* key; std::int64_t value; };
  for (const Int& o : {Int{"--dim", "dim", a.dim}, Int{"--n", "n", a.n}, Int{"--replicas", "replicas", a.replicas},
                       Int{"--threads", "threads", a.threads}, Int{"--seed", "seed", static_cast<std::int64_t>(a.seed)}})
    if (given(o.flag) && (s = rwr_config_set_int(cfg.ptr, o.key, o.value)) != RWR_OK) return report(s);
  if (a.dump) rwr_config_set_int(cfg.ptr, "dump", 1);

  if ((s = rwr_config_validate(cfg.ptr)) != RWR_OK) return report(s);

  char* regime = nullptr;
  if ((s = rwr_config_regime(cfg.ptr, &regime)) != RWR_OK) return report(s);
  std::cerr << "regime: " << regime << "\n";
  rwr_string_free(regime);

  const char* format_ptr = nullptr;
  rwr_config_get_string(cfg.ptr, "format", &format_ptr);
  const std::string format = format_ptr;

  rwr_result* result = nullptr;
  if ((s = rwr_simulate(cfg.ptr, &result)) != RWR_OK) return report(s);
  char* text = nullptr;
  s = rwr_result_format(result, format.c_str(), &text);
  rwr_result_free(result);
  if (s != RWR_OK) return report(s);
  const bool ok = write_text(output, text);
  rwr_string_free(text);
  if (!ok) {
    std::cerr << "rwr: cannot write output '" << output << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

int run_verify(const std::string& name, std::uint64_t seed, unsigned threads, const std::string& output, bool list) {
  if (list || name.empty()) {
    for (std::size_t i = 0; i < rwr_check_count(); ++i)
      std::cout << rwr_check_name(i) << "  (criterion " << rwr_check_criterion(i) << ")\n";
    return name.empty() && !list ? kExitUsage : kExitOk;
  }
  char* json = nullptr;
  int pass = 0;
  const rwr_status s = rwr_verify(name.c_str(), seed, threads, &json, &pass);
  if (s != RWR_OK) return report(s);
  const bool ok = write_text(output, json);
  rwr_string_free(json);
  if (!ok) {
    std::cerr << "rwr: cannot write output '" << output << "'\n";
    return kExitIo;
  }
  std::cerr << (pass ? "all checks passed" : "some checks failed") << "\n";
  return pass ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforced elephant random walks, shark random swims and percolated preferential attachment trees"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate trajectories, samples or trees");
  simulate->add_option("kind", sim.kind, "erw | srs | tree")->required()->check(CLI::IsMember({"erw", "srs", "tree"}));
  simulate->add_option("--model", sim.model, "ERW update rule: reinforced | strong");
  simulate->add_option("--b", sim.b, "reinforcement parameter b >= 0");
  simulate->add_option("--p", sim.p, "memory parameter p in (0, 1)");
  simulate->add_option("--alpha", sim.alpha, "stable index in (0, 2]");
  simulate->add_option("--dim", sim.dim, "dimension of the swim");
  simulate->add_option("--n", sim.n, "horizon (steps or tree nodes)");
  simulate->add_option("--t-grid", sim.t_grid, "comma-separated fractions of n to report (erw)");
  simulate->add_option("--replicas", sim.replicas, "independent replicas");
  simulate->add_option("--seed", sim.seed, "base seed (fallback: REINFORCE_WALK_SEED)");
  simulate->add_option("--threads", sim.threads, "replica-level workers");
  simulate->add_option("--method", sim.method, "srs simulator: direct | clusters");
  simulate->add_flag("--dump", sim.dump, "tree: write node,parent,cut,cluster rows");
  simulate->add_option("--format", sim.format, "csv | json");
  simulate->add_option("--output,-o", sim.output, "output file (default stdout)");
  simulate->add_option("--config", sim.config, "JSON config file; flags take precedence");

  std::string check;
  std::uint64_t verify_seed = 7;
  unsigned verify_threads = 1;
  std::string verify_output;
  bool list = false;
  auto* verify = app.add_subcommand("verify", "run a named statistical check, or all of them");
  verify->add_option("check", check, "check name or 'all'");
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_option("--threads", verify_threads, "replica-level workers")->check(CLI::PositiveNumber);
  verify->add_option("--output,-o", verify_output, "output file (default stdout)");
  verify->add_flag("--list", list, "list check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (simulate->parsed()) return run_simulate(*simulate, sim);
  if (verify->get_option("--seed")->count() == 0) {
    bool found = false;
    if (!env_seed(verify_seed, found)) return kExitUsage;
  }
  return run_verify(check, verify_seed, verify_threads, verify_output, list);
}
