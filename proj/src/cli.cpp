#include "ssr/cli.hpp"

#include <iostream>

#include "CLI11.hpp"
#include "ssr/io.hpp"

namespace ssr {

namespace {

void print_complex_stats(const std::string& name, const Complex& c, std::ostream& out) {
  std::map<std::size_t, std::size_t> by_dim;
  for (const auto& cone : c.cones()) ++by_dim[cone.dim];
  out << name << ": ambient dimension " << c.ambient_dim() << ", " << c.rays().size() << " rays, "
      << c.maximal_cones().size() << " maximal cones\n";
  out << "  cones by dimension:";
  for (const auto& [d, n] : by_dim) out << " " << d << ":" << n;
  out << "\n";
  if (!c.simplicial()) {
    out << "  not simplicial; multiplicities undefined\n";
    return;
  }
  std::map<Integer, std::size_t> histogram;
  std::size_t waterman = 0;
  for (auto m : c.maximal_cones()) {
    ++histogram[multiplicity(c, m)];
    waterman += waterman_points(c, m).size();
  }
  out << "  multiplicity histogram (maximal cones):";
  for (const auto& [m, n] : histogram) out << " " << m.get_str() << ":" << n;
  out << "\n  Waterman points over maximal cones: " << waterman << "\n";
}

void print_trace_rounds(const ReductionTrace& trace, std::ostream& out) {
  out << "rounds (status " << (trace.complete ? "complete" : "failed") << ", " << trace.reduction_rounds
      << " reduction rounds):\n";
  for (const auto& r : trace.rounds)
    out << "  round " << r.round << ": multiplicity " << r.multiplicity_before.get_str() << " -> "
        << r.multiplicity_after.get_str() << ", " << r.source_cones << " source / " << r.target_cones
        << " target maximal cones\n";
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (auto v = dynamic_cast<const ValidationError*>(&e))
    for (const auto& issue : v->issues()) err << "  - " << issue << "\n";
  return static_cast<int>(e.exit_code());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semistable reduction of morphisms of conical polyhedral complexes", "ssr"};
  app.require_subcommand(1);

  std::string check_path;
  auto check = app.add_subcommand("check", "Classify a morphism as semistable, weakly-semistable or neither");
  check->add_option("morphism", check_path, "Morphism document")->required();

  std::string reduce_path, trace_path, output_path;
  ReduceOptions options;
  std::size_t max_dilation = 24;
  auto red = app.add_subcommand("reduce", "Run the reduction and optionally write its trace");
  red->add_option("morphism", reduce_path, "Morphism document")->required();
  red->add_option("--trace", trace_path, "Write the reduction trace here");
  red->add_option("--output", output_path, "Write the reduced morphism here");
  red->add_option("--max-rounds", options.max_rounds, "Bound on preparation and reduction rounds")
      ->check(CLI::PositiveNumber);
  red->add_option("--max-dilation", max_dilation, "Largest dilation tried over a ray")->check(CLI::PositiveNumber);

  std::string stats_path, stats_trace;
  auto stats = app.add_subcommand("stats", "Cone counts, multiplicities and Waterman counts");
  stats->add_option("document", stats_path, "Complex or morphism document")->required();
  stats->add_option("--trace", stats_trace, "Also print per-round multiplicities of a trace");

  std::string verify_morphism, verify_path;
  auto verify = app.add_subcommand("verify-trace", "Replay a trace and re-check every step");
  verify->add_option("morphism", verify_morphism, "Initial morphism document")->required();
  verify->add_option("trace", verify_path, "Trace document")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return static_cast<int>(ExitCode::invalid_input);
  }

  try {
    if (*check) {
      auto report = check_semistable(read_morphism(check_path));
      out << to_string(report.verdict) << "\n";
      for (const auto& r : report.reasons) out << "  - " << r << "\n";
      return 0;
    }
    if (*red) {
      options.max_dilation = static_cast<unsigned long>(max_dilation);
      ComplexMorphism f = read_morphism(reduce_path);
      ReductionTrace trace;
      try {
        ComplexMorphism g = run_reduction(f, options, trace);
        if (!trace_path.empty()) write_json_file(trace_path, to_json(trace));
        if (!output_path.empty()) write_json_file(output_path, to_json(g));
        out << "status: complete\n";
        out << "reduction rounds: " << trace.reduction_rounds << "\n";
        out << "final multiplicity: " << max_multiplicity(g.source()).get_str() << "\n";
        out << "source maximal cones: " << g.source().maximal_cones().size() << "\n";
        out << "target maximal cones: " << g.target().maximal_cones().size() << "\n";
        out << "final digest: " << trace.final_digest << "\n";
        return 0;
      } catch (const Error& e) {
        trace.complete = false;
        trace.failure = TraceFailure{static_cast<int>(e.exit_code()), e.what()};
        if (!trace_path.empty()) write_json_file(trace_path, to_json(trace));
        out << "status: failed after " << trace.steps.size() << " steps\n";
        return report_error(e, err);
      }
    }
    if (*stats) {
      Json doc = read_json_file(stats_path);
      if (doc.contains("matrix")) {
        ComplexMorphism f = morphism_from_json(doc, std::filesystem::path(stats_path).parent_path());
        print_complex_stats("source", f.source(), out);
        print_complex_stats("target", f.target(), out);
        out << "relative dimension: " << relative_dimension(f) << "\n";
      } else {
        print_complex_stats("complex", complex_from_json(doc), out);
      }
      if (!stats_trace.empty()) print_trace_rounds(trace_from_json(read_json_file(stats_trace)), out);
      return 0;
    }
    if (*verify) {
      ComplexMorphism f = read_morphism(verify_morphism);
      auto report = verify_trace(f, trace_from_json(read_json_file(verify_path)));
      if (report.ok()) {
        out << "verified\n";
        return 0;
      }
      out << "rejected\n";
      for (const auto& issue : report.issues) out << "  - " << issue << "\n";
      return static_cast<int>(ExitCode::invalid_input);
    }
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::invariant_violation);
  }
  return 0;
}

}  // namespace ssr
