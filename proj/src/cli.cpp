#include "homlab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "homlab/experiments.hpp"
#include "homlab/hom.hpp"
#include "homlab/moment.hpp"
#include "homlab/rate.hpp"
#include "homlab/sampler.hpp"

namespace homlab {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    spill(path, content);
}

HomTarget parse_target(const std::string& text) {
  if (text.rfind("cycle:", 0) == 0)
    return CycleTarget(std::stoi(text.substr(6)));
  if (text.rfind("clique:", 0) == 0) {
    const std::string rest = text.substr(7);
    const auto slash = rest.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("clique target needs the form clique:P/Q");
    return CircularClique(std::stoi(rest.substr(0, slash)), std::stoi(rest.substr(slash + 1)));
  }
  throw std::invalid_argument("target must be cycle:K or clique:P/Q");
}

std::string decimal(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", x);
  return buffer;
}

struct HomArgs {
  std::string graph_path;
  std::string target_text;
  std::string map_path;
  std::string out_path;
  bool tight_only = false;
};

int do_hom_check(const HomArgs& args) {
  const MultiGraph g = parse_edge_list(slurp(args.graph_path));
  const HomTarget target = parse_target(args.target_text);
  if (!args.map_path.empty()) {
    HomMap m{target, parse_hom_labels(slurp(args.map_path), g.vertex_count(),
                                      target_size(target))};
    if (!verify_homomorphism(g, m)) {
      std::cout << "invalid homomorphism\n";
      return 1;
    }
    if (std::holds_alternative<CycleTarget>(target))
      std::cout << "valid homomorphism (" << (is_tight(g, m) ? "tight" : "not tight") << ")\n";
    else
      std::cout << "valid homomorphism\n";
    return 0;
  }
  const auto found = find_homomorphism(g, target);
  if (!found) {
    std::cout << "no homomorphism\n";
    return 1;
  }
  emit(args.out_path, emit_hom_map(*found));
  return 0;
}

int do_hom_tighten(const HomArgs& args) {
  const MultiGraph g = parse_edge_list(slurp(args.graph_path));
  const HomTarget target = parse_target(args.target_text);
  HomMap start{target, {}};
  if (!args.map_path.empty()) {
    start.labels =
        parse_hom_labels(slurp(args.map_path), g.vertex_count(), target_size(target));
  } else {
    const auto found = find_homomorphism(g, target);
    if (!found) {
      std::cout << "no homomorphism\n";
      return 1;
    }
    start = *found;
  }
  const TightenResult result = tighten_trace(g, start);
  std::cerr << "tightened in " << result.steps.size() << " steps\n";
  emit(args.out_path, emit_hom_map(result.map));
  return 0;
}

int do_hom_count(const HomArgs& args) {
  const MultiGraph g = parse_edge_list(slurp(args.graph_path));
  const HomTarget target = parse_target(args.target_text);
  const auto* cycle = std::get_if<CycleTarget>(&target);
  if (!cycle) throw std::invalid_argument("hom count: cycle target required");
  std::cout << count_homomorphisms(g, *cycle, args.tight_only).str() << "\n";
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"graph homomorphism laboratory: random cubic multigraphs vs odd cycles"};
  app.require_subcommand(1);
  int result = 0;

  // ---- hom check|tighten|count ----
  auto* hom = app.add_subcommand("hom", "check, tighten or count homomorphisms");
  hom->require_subcommand(1);
  auto hom_args = std::make_shared<HomArgs>();
  for (const char* name : {"check", "tighten", "count"}) {
    auto* sub = hom->add_subcommand(
        name, std::string(name) == "check"
                  ? "verify a map file or search for a homomorphism"
                  : (std::string(name) == "tighten" ? "repair a homomorphism into a tight one"
                                                    : "exhaustively count homomorphisms"));
    sub->add_option("--graph", hom_args->graph_path, "edge-list file")->required();
    sub->add_option("--target", hom_args->target_text, "cycle:K or clique:P/Q")->required();
    if (std::string(name) != "count") {
      sub->add_option("--map", hom_args->map_path, "hom-map file (one \"v label\" per line)");
      sub->add_option("--out", hom_args->out_path, "write the resulting map here");
    } else {
      sub->add_flag("--tight", hom_args->tight_only, "count only tight homomorphisms");
    }
    std::string cmd = name;
    sub->callback([&result, hom_args, cmd] {
      if (cmd == "check")
        result = do_hom_check(*hom_args);
      else if (cmd == "tighten")
        result = do_hom_tighten(*hom_args);
      else
        result = do_hom_count(*hom_args);
    });
  }

  // ---- chi-c ----
  auto* chic = app.add_subcommand("chi-c", "upper bound on the circular chromatic number");
  auto chic_graph = std::make_shared<std::string>();
  auto chic_qmax = std::make_shared<int>(4);
  chic->add_option("--graph", *chic_graph, "edge-list file")->required();
  chic->add_option("--q-max", *chic_qmax, "largest denominator to try")->capture_default_str();
  chic->callback([&result, chic_graph, chic_qmax] {
    const Fraction f =
        circular_chromatic_upper(parse_edge_list(slurp(*chic_graph)), *chic_qmax);
    std::cout << f.num << "/" << f.den << "\n";
    result = 0;
  });

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "draw uniform matching triples");
  struct SampleArgs {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t count = 1;
    int min_girth = 0;
    std::uint64_t max_attempts = 1'000'000;
    std::string out_path;
    std::string union_out;
  };
  auto sample_args = std::make_shared<SampleArgs>();
  sample->add_option("--n", sample_args->n, "vertex count (even)")->required();
  sample->add_option("--seed", sample_args->seed, "random seed")->capture_default_str();
  sample->add_option("--count", sample_args->count, "number of triples")->capture_default_str();
  sample->add_option("--min-girth", sample_args->min_girth,
                     "rejection-sample until the union girth reaches this");
  sample->add_option("--max-attempts", sample_args->max_attempts,
                     "rejection cap")->capture_default_str();
  sample->add_option("--out", sample_args->out_path, "triple output file (default stdout)");
  sample->add_option("--union-out", sample_args->union_out,
                     "also write the union edge list (count must be 1)");
  sample->callback([&result, sample_args] {
    const auto& sa = *sample_args;
    if (!sa.union_out.empty() && sa.count != 1)
      throw std::invalid_argument("--union-out requires --count 1");
    SamplerConfig cfg;
    cfg.n = sa.n;
    cfg.seed = sa.seed;
    cfg.max_attempts = sa.max_attempts;
    if (sa.min_girth > 0) cfg.min_girth = sa.min_girth;
    std::ostringstream out;
    for (std::uint64_t i = 0; i < sa.count; ++i) {
      RandomStream stream = RandomStream::derived(sa.seed, i);
      const MatchingTriple t = sample_min_girth(cfg, stream);
      if (i > 0) out << "\n";
      out << emit_triple(t);
      if (!sa.union_out.empty()) spill(sa.union_out, emit_edge_list(union_of_matchings(t)));
    }
    emit(sa.out_path, out.str());
    result = 0;
  });

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo / exhaustive drivers");
  experiment->require_subcommand(1);
  struct ExperimentArgs {
    ExperimentSpec spec;
    std::string out_path;
    std::string fixed_graph;
  };
  auto exp_args = std::make_shared<ExperimentArgs>();
  const std::pair<const char*, ExperimentKind> kinds[] = {
      {"hom-fraction", ExperimentKind::hom_fraction},
      {"simplicity", ExperimentKind::simplicity},
      {"mis-trend", ExperimentKind::mis_trend},
  };
  for (const auto& [name, kind] : kinds) {
    auto* sub = experiment->add_subcommand(name, "");
    sub->add_option("--n", exp_args->spec.n_values, "even vertex counts")
        ->delimiter(',');
    sub->add_option("--samples", exp_args->spec.samples, "samples per point")
        ->capture_default_str();
    if (kind == ExperimentKind::hom_fraction)
      sub->add_option("--k", exp_args->spec.cycle_k, "target cycle length")
          ->capture_default_str();
    sub->add_option("--seed", exp_args->spec.seed, "random seed")->capture_default_str();
    sub->add_option("--workers", exp_args->spec.workers,
                    "worker threads (default HOMLAB_WORKERS or hardware)");
    sub->add_option("--out", exp_args->out_path, "CSV output file (default stdout)");
    if (kind == ExperimentKind::mis_trend)
      sub->add_option("--fixed-graph", exp_args->fixed_graph,
                      "diagnostic mode: run the MIS check on this edge list");
    ExperimentKind k = kind;
    sub->callback([&result, exp_args, k] {
      exp_args->spec.kind = k;
      std::vector<ExperimentRow> rows;
      if (k == ExperimentKind::mis_trend && !exp_args->fixed_graph.empty()) {
        rows.push_back(mis_diagnostic(parse_edge_list(slurp(exp_args->fixed_graph))));
      } else {
        switch (k) {
          case ExperimentKind::hom_fraction: rows = run_hom_fraction(exp_args->spec); break;
          case ExperimentKind::simplicity: rows = run_simplicity(exp_args->spec); break;
          case ExperimentKind::mis_trend: rows = run_mis_trend(exp_args->spec); break;
        }
      }
      if (k == ExperimentKind::mis_trend)
        for (const auto& row : rows)
          std::cerr << "# mis-trend n=" << row.n << " mean(MIS/n)=" << decimal(row.mean_ratio)
                    << "\n";
      emit(exp_args->out_path, to_csv(rows));
      result = 0;
    });
  }

  // ---- formula ----
  auto* formula = app.add_subcommand("formula", "exact tight-pair counting");
  formula->require_subcommand(1);
  struct FormulaArgs {
    int n = 0;
    std::vector<int> composition;
  };
  auto formula_args = std::make_shared<FormulaArgs>();
  auto* term = formula->add_subcommand("term", "tight-pair count of one composition");
  term->add_option("--n", formula_args->n, "total vertex count")->required();
  term->add_option("--composition", formula_args->composition, "n0,...,n6")
      ->delimiter(',')
      ->required();
  term->callback([&result, formula_args] {
    if (formula_args->composition.size() != 7)
      throw std::invalid_argument("composition needs exactly 7 parts");
    Composition c;
    std::copy(formula_args->composition.begin(), formula_args->composition.end(),
              c.parts.begin());
    if (c.total() != formula_args->n)
      throw std::invalid_argument("composition parts do not sum to --n");
    std::cout << tight_pair_count(c).str() << "\n";
    result = 0;
  });
  auto* expected = formula->add_subcommand("expected-upper",
                                           "expected tight homomorphism count, exact");
  expected->add_option("--n", formula_args->n, "total vertex count")->required();
  expected->callback([&result, formula_args] {
    const CountReport report = expected_tight_report(formula_args->n);
    std::cout << report.expected.str() << " ≈ "
              << decimal(report.expected.convert_to<double>()) << "\n";
    result = 0;
  });

  // ---- certify ----
  auto* certify_cmd =
      app.add_subcommand("certify", "branch-and-bound sweep of the rate-function bound");
  auto certify_opts = std::make_shared<rate::CertifyOptions>();
  auto report_path = std::make_shared<std::string>();
  certify_cmd->add_option("--threshold", certify_opts->threshold, "rate threshold")
      ->capture_default_str();
  certify_cmd->add_option("--eps", certify_opts->eps0, "initial grid width")
      ->capture_default_str();
  certify_cmd->add_option("--eps-min", certify_opts->eps_min, "final grid width")
      ->capture_default_str();
  certify_cmd->add_option("--slack", certify_opts->slack, "per-box numeric slack")
      ->capture_default_str();
  certify_cmd->add_option("--workers", certify_opts->workers,
                          "worker threads (default HOMLAB_WORKERS or hardware)");
  certify_cmd->add_option("--offender-cap", certify_opts->offender_cap,
                          "offenders retained in the report")
      ->capture_default_str();
  certify_cmd->add_option("--report", *report_path, "write the JSON report here");
  certify_cmd->callback([&result, certify_opts, report_path] {
    const rate::CertificationReport report = rate::certify(*certify_opts);
    if (!report_path->empty()) spill(*report_path, rate::report_to_json(report));
    std::cout << (report.certified ? "certified" : "NOT certified") << ": max bound "
              << decimal(std::exp(report.max_log_bound)) << " vs threshold "
              << decimal(report.threshold) << " (" << report.offender_count
              << " offenders)\n";
    result = report.certified ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return result;
}

int cli_dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("homlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace homlab
