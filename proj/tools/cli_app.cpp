#include "cli_app.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "qdisc/errors.hpp"
#include "qdisc/io.hpp"
#include "qdisc/iteration.hpp"
#include "qdisc/model.hpp"
#include "qdisc/optimality.hpp"

namespace qdisc::cli {

namespace {

Ensemble load_ensemble(const RunConfig& cfg, io::Check check) {
  if (cfg.example_shifted) return shifted_basis_ensemble(*cfg.example_shifted);
  if (cfg.input_path.empty()) throw PreconditionError("no input: pass an ensemble file or --example-shifted M");
  return io::parse_ensemble_file(cfg.input_path, check);
}

Povm load_measurement(const RunConfig& cfg, const Ensemble& e) {
  if (!cfg.povm_path.empty()) {
    Povm m = io::parse_povm_file(cfg.povm_path);
    require_compatible(e, m);
    return m;
  }
  if (cfg.example_shifted) return shifted_basis_povm(*cfg.example_shifted);
  throw PreconditionError("certify needs a measurement: pass --povm FILE");
}

void print_certificate(std::ostream& out, const io::CertificateDoc& doc) {
  out << "p_succ      " << io::format_double(doc.p_succ) << '\n'
      << "t_max       " << io::format_double(doc.t_max) << " (outcome " << doc.argmax_ell << ")\n"
      << "gap         [" << io::format_double(doc.certificate.lower) << ", "
      << io::format_double(doc.certificate.upper) << "]\n";
  if (!doc.termination_reason.empty()) {
    out << "terminated  " << doc.termination_reason << " after " << doc.steps << " steps\n";
  }
}

int run_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Ensemble e = load_ensemble(cfg, io::Check::structure_only);
  const ValidationReport rep = validate(e);
  out << "ensemble: d=" << e.dim() << " m=" << e.size() << '\n' << rep.summary();
  if (!rep.ok()) {
    err << "ensemble validation failed\n";
    return kExitValidation;
  }
  if (!cfg.example_shifted) io::parse_ensemble_file(cfg.input_path, io::Check::full);
  if (!cfg.povm_path.empty()) {
    const Povm m = io::parse_povm_file(cfg.povm_path, io::Check::structure_only);
    const ValidationReport prep = validate(m);
    out << "povm: d=" << m.dim() << " m=" << m.size() << '\n' << prep.summary();
    if (!prep.ok()) {
      err << "POVM validation failed\n";
      return kExitValidation;
    }
    require_compatible(e, m);
  }
  return kExitOk;
}

int run_certify(const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = load_ensemble(cfg, io::Check::full);
  const Povm m = load_measurement(cfg, e);
  const ResidualReport r = residuals(e, m);
  io::CertificateDoc doc{r.p_succ, gap_upper_bound(e, m, r, cfg.p_grid), r.t_max(), r.argmax_ell, {}, 0};
  std::filesystem::create_directories(cfg.output_dir);
  io::write_json(cfg.output_dir / "certificate.json", io::certificate_to_json(doc));
  print_certificate(out, doc);
  return kExitOk;
}

int run_optimize(const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = load_ensemble(cfg, io::Check::full);
  Povm m0 = [&] {
    switch (cfg.init) {
      case Init::srm: return square_root_measurement(e);
      case Init::file: {
        if (cfg.povm_path.empty()) throw PreconditionError("--init file needs --povm FILE");
        return load_measurement(cfg, e);
      }
      case Init::uniform: break;
    }
    return uniform_povm(e.dim(), e.size());
  }();

  IterationConfig icfg;
  icfg.tol = cfg.tol;
  icfg.max_iters = cfg.max_iters;
  icfg.line_search = cfg.line_search;
  icfg.p_grid = cfg.p_grid;
  const IterationTrace trace = run(e, m0, icfg);

  std::filesystem::create_directories(cfg.output_dir);
  {
    std::ofstream csv(cfg.output_dir / "trace.csv");
    if (!csv) throw Error("cannot write " + (cfg.output_dir / "trace.csv").string());
    io::write_trace_csv(csv, trace);
  }
  io::write_json(cfg.output_dir / "final_povm.json", io::povm_to_json(trace.final_povm, &e));
  io::CertificateDoc doc{trace.final_p_succ(),
                         trace.final_certificate,
                         trace.final_residuals.t_max(),
                         trace.final_residuals.argmax_ell,
                         std::string(to_string(trace.termination)),
                         trace.steps.size()};
  io::write_json(cfg.output_dir / "certificate.json", io::certificate_to_json(doc));
  print_certificate(out, doc);
  return kExitOk;
}

}  // namespace

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& cfg,
                              std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-error measurement optimizer and optimality certifier", "qdisc"};
  app.require_subcommand(1);

  std::string input;
  std::size_t max_iters = 0;
  std::size_t shifted = 0;
  std::string povm;
  std::string out_dir = cfg.output_dir.string();
  bool no_line_search = false;

  app.add_option("--tol", cfg.tol, "Stop when max_k Tr[rho_k - Re L]_+ <= tol")
      ->check(CLI::PositiveNumber);
  auto* iters_opt = app.add_option("--max-iters", max_iters, "Iteration cap (default ceil(tol^-2), at most 1e6)");
  app.add_flag("--no-line-search", no_line_search, "Use the fixed step length alpha = t_max");
  app.add_option("--init", cfg.init, "Starting measurement")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Init>{{"uniform", Init::uniform}, {"srm", Init::srm}, {"file", Init::file}},
          CLI::ignore_case));
  app.add_option("--p-grid", cfg.p_grid, "Comma-separated p values in [0,1] for the gap upper bound")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--povm", povm, "POVM file (certify; optimize with --init file)");
  auto* shifted_opt = app.add_option("--example-shifted", shifted, "Use the m-state shifted-basis ensemble")
                          ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  app.add_option("--seed", cfg.seed, "Seed recorded with the run");

  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  for (const Sub& s : {Sub{"validate", "Check an ensemble (and optionally a POVM) against its invariants", Command::validate},
                       Sub{"certify", "Bound the optimality gap of a given POVM", Command::certify},
                       Sub{"optimize", "Run the Barnett-Croke iteration", Command::optimize}}) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->add_option("input", input, "Ensemble JSON file");
    sub->callback([&cfg, cmd = s.cmd] { cfg.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.input_path = input;
  cfg.povm_path = povm;
  cfg.output_dir = out_dir;
  cfg.line_search = !no_line_search;
  if (*iters_opt) cfg.max_iters = max_iters;
  if (*shifted_opt) cfg.example_shifted = shifted;
  if (cfg.example_shifted && !cfg.input_path.empty()) {
    err << "pass either an input file or --example-shifted, not both\n";
    return kExitUsage;
  }
  return std::nullopt;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::validate: return run_validate(cfg, out, err);
      case Command::certify: return run_certify(cfg, out);
      case Command::optimize: return run_optimize(cfg, out);
    }
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& ex) {
    err << "validation error: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const DimensionError& ex) {
    err << "validation error: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return kExitNumerical;
  } catch (const PreconditionError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (auto code = parse_args(argc, argv, cfg, out, err)) return *code;
  return execute(cfg, out, err);
}

}  // namespace qdisc::cli
