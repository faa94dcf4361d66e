#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "periwave/config.hpp"
#include "periwave/diagnostics.hpp"
#include "periwave/io.hpp"
#include "periwave/resonance.hpp"
#include "periwave/solver.hpp"

namespace {

using namespace periwave;

// Exit codes: 0 ok, 1 config/usage error, 2 assumption failure,
// 3 divergence/resonance, 4 size guard.
enum ExitCode { kOk = 0, kConfigError = 1, kAssumption = 2, kResonance = 3, kGuard = 4 };

struct Args {
  std::string command;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> json;
  bool compare_manufactured = false;
  std::optional<GridSpec> grid_override;
};

void usage(std::ostream& os) {
  os << "usage: periwave <validate|resonance|solve|kernel|sweep> <config.ini>\n"
        "               [--out <path>] [--json <path>] [--compare-manufactured]\n"
        "               [--grid NXxNT]\n";
}

std::optional<Args> parse_args(int argc, char** argv) {
  if (argc < 3) return std::nullopt;
  Args a;
  a.command = argv[1];
  a.config_path = argv[2];
  for (int i = 3; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&]() -> std::optional<std::string> {
      if (i + 1 >= argc) return std::nullopt;
      return std::string(argv[++i]);
    };
    if (arg == "--out") {
      if (auto v = next()) a.out = *v; else return std::nullopt;
    } else if (arg == "--json") {
      if (auto v = next()) a.json = *v; else return std::nullopt;
    } else if (arg == "--compare-manufactured") {
      a.compare_manufactured = true;
    } else if (arg == "--grid") {
      auto v = next();
      if (!v) return std::nullopt;
      const auto x = v->find('x');
      if (x == std::string::npos) return std::nullopt;
      try {
        GridSpec g;
        g.nx = std::stoi(v->substr(0, x));
        g.nt = std::stoi(v->substr(x + 1));
        a.grid_override = g;
      } catch (...) {
        return std::nullopt;
      }
    } else {
      return std::nullopt;
    }
  }
  return a;
}

void emit_json(const Args& args, const std::string& payload, bool to_stdout) {
  if (to_stdout) std::cout << payload << "\n";
  if (args.json) io::write_text_file(*args.json, payload + "\n");
}

int cmd_validate(const Args& args, const ProblemSpec& spec, const GridSpec& grid) {
  const ValidationReport rep = validate(spec, grid);
  emit_json(args, io::to_json(rep), true);
  return rep.pass ? kOk : kAssumption;
}

int cmd_resonance(const Args& args, const ProblemSpec& spec, const GridSpec& grid) {
  const ValidationReport vr = validate(spec, grid);
  if (!vr.pass) {
    emit_json(args, io::to_json(vr), true);
    return kAssumption;
  }
  const ResonanceReport rep = analyze_resonance(spec, grid);
  std::printf("  l          q_l                      q_l'\n");
  for (std::size_t l = 0; l < rep.q.size(); ++l)
    std::printf("%3zu   %-24s %-24s\n", l, io::fmt17(rep.q[l]).c_str(),
                io::fmt17(rep.qp[l]).c_str());
  std::printf("small:      %s (min |integral| = %s)\n",
              rep.small_pass ? "pass" : "fail", io::fmt17(rep.small_min_abs).c_str());
  std::printf("small+:     %s (min |integral| = %s)\n",
              rep.small_plus_pass ? "pass" : "fail",
              io::fmt17(rep.small_plus_min_abs).c_str());
  std::printf("small1:     %s\nsmall11:    %s\nsmall111:   %s\nsmall1111:  %s\n",
              rep.small1 ? "true" : "false", rep.small11 ? "true" : "false",
              rep.small111 ? "true" : "false", rep.small1111 ? "true" : "false");
  if (rep.stationary_value)
    std::printf("stationary simplification: %s\n",
                io::fmt17(*rep.stationary_value).c_str());
  if (rep.near_resonance_warning)
    std::printf("warning: |q_0 - 1| < 1e-3 (near resonance; dense path forced)\n");
  emit_json(args, io::to_json(rep), false);
  return kOk;
}

int cmd_solve(const Args& args, const RunConfig& cfg, const ProblemSpec& spec,
              const GridSpec& grid) {
  const ValidationReport vr = validate(spec, grid);
  if (!vr.pass) {
    emit_json(args, io::to_json(vr), true);
    return kAssumption;
  }
  SolveResult res;
  try {
    res = solve(spec, grid, cfg.solve);
  } catch (const SizeGuardError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kGuard;
  }

  std::optional<double> sup_err;
  if (args.compare_manufactured) {
    if (!cfg.w_star) {
      std::cerr << "error: --compare-manufactured requires a [manufactured] section\n";
      return kConfigError;
    }
    const GridFunction exact = sample(*cfg.w_star, grid, spec.T);
    sup_err = sup_diff(res.w, exact);
    std::printf("sup error vs manufactured: %s\n", io::fmt17(*sup_err).c_str());
  }
  emit_json(args, io::to_json(res, sup_err ? &*sup_err : nullptr), true);
  if (args.out && res.converged) io::write_solution_csv(*args.out, res);
  if (!res.converged) {
    const ResonanceReport rep = analyze_resonance(spec, grid);
    std::ostringstream failed;
    if (!rep.small_pass) failed << " (small)";
    if (!rep.small_plus_pass) failed << " (small+)";
    if (!rep.small1) failed << " (small1)";
    if (!rep.small11) failed << " (small11)";
    if (!rep.small111) failed << " (small111)";
    if (!rep.small1111) failed << " (small1111)";
    std::cerr << "error: solve failed; conditions not satisfied:" << failed.str()
              << "\n";
    for (const auto& wmsg : res.warnings) std::cerr << "  " << wmsg << "\n";
    return kResonance;
  }
  return kOk;
}

int cmd_kernel(const Args& args, const ProblemSpec& spec, const GridSpec& grid) {
  const ValidationReport vr = validate(spec, grid);
  if (!vr.pass) {
    emit_json(args, io::to_json(vr), true);
    return kAssumption;
  }
  Eigen::MatrixXd M;
  try {
    M = assemble_dense(spec, grid);
  } catch (const SizeGuardError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kGuard;
  }
  const KernelDimension kd = kernel_dimension(M);
  std::printf("kernel dimension: %d\n", kd.dimension);
  std::printf("sigma_max: %s\n", io::fmt17(kd.sigma_max).c_str());
  std::printf("smallest singular values:");
  for (double s : kd.tail) std::printf(" %s", io::fmt17(s).c_str());
  std::printf("\n");
  emit_json(args, io::to_json(kd), false);
  return kOk;
}

int cmd_sweep(const Args& args, const RunConfig& cfg, const GridSpec& grid) {
  if (cfg.sweep_eps.empty()) {
    std::cerr << "error: sweep command requires a [sweep] section\n";
    return kConfigError;
  }
  EpsFamily family{cfg.problem, cfg.sweep_eps};
  SweepResult sw;
  try {
    sw = sweep_epsilon(family, grid, cfg.solve);
  } catch (const SweepAbort& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kResonance;
  }
  std::printf("solved %zu instances\n", sw.solutions.size());
  std::printf("max pairwise diff: %s\n", io::fmt17(sw.max_pairwise_diff).c_str());
  for (const auto& rr : sw.richardson)
    std::printf("richardson at eps=%s: coarse %s fine %s agreement %s\n",
                io::fmt17(rr.eps_center).c_str(), io::fmt17(rr.est_coarse).c_str(),
                io::fmt17(rr.est_fine).c_str(), io::fmt17(rr.agreement).c_str());
  emit_json(args, io::to_json(sw), false);
  if (args.out) io::write_sweep_csv(*args.out, sw);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  const auto args = parse_args(argc, argv);
  if (!args) {
    usage(std::cerr);
    return kConfigError;
  }
  try {
    const RunConfig cfg = load_config(args->config_path);
    const GridSpec grid = args->grid_override.value_or(cfg.grid);
    grid.validate();

    // With a manufactured section, f and the Robin data are derived from w*.
    ProblemSpec spec = cfg.problem;
    if (cfg.w_star) {
      try {
        const ManufacturedProblem mp =
            manufacture(*cfg.w_star, cfg.problem.a, cfg.problem.a1, cfg.problem.a2,
                        cfg.problem.a3, cfg.problem.T, grid, cfg.problem.k);
        spec = mp.spec;
      } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kAssumption;
      }
    }

    if (args->command == "validate") return cmd_validate(*args, spec, grid);
    if (args->command == "resonance") return cmd_resonance(*args, spec, grid);
    if (args->command == "solve") return cmd_solve(*args, cfg, spec, grid);
    if (args->command == "kernel") return cmd_kernel(*args, spec, grid);
    if (args->command == "sweep") return cmd_sweep(*args, cfg, grid);
    usage(std::cerr);
    return kConfigError;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const expr::ParseError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kConfigError;
  }
}
