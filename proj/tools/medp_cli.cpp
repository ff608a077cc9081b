// medp command-line tool: gen, lp, round, exact, validate, report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "medp/medp.hpp"

namespace {

using medp::Json;

Json read_json(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw medp::InvalidInput("cannot open " + path);
    buf << in.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw medp::InvalidInput(path + ": " + e.what());
  }
}

void write_json(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw medp::InvalidInput("cannot write " + out);
  f << text;
}

/// An instance file may be a bare instance or a {"instance", "decomposition"} bundle.
struct Input {
  medp::RawInstance raw;
  std::optional<medp::TreeDecomposition> decomposition;
};

Input load_input(const std::string& instance_path, const std::string& decomposition_path) {
  Input in;
  const Json j = read_json(instance_path);
  const bool bundle = j.is_object() && j.contains("instance");
  in.raw = medp::raw_instance_from_json(bundle ? j.at("instance") : j);
  if (!decomposition_path.empty()) {
    in.decomposition = medp::decomposition_from_json(read_json(decomposition_path));
  } else if (bundle && j.contains("decomposition")) {
    in.decomposition = medp::decomposition_from_json(j.at("decomposition"));
  }
  return in;
}

medp::Mode parse_mode(const std::string& s) {
  if (s == "treewidth") return medp::Mode::kTreewidth;
  if (s == "generic") return medp::Mode::kGeneric;
  throw medp::InvalidInput("unknown mode '" + s + "'");
}

int parse_oracle(const std::string& s) {
  if (s.empty()) return 0;
  const std::string prefix = "small:";
  if (s.rfind(prefix, 0) != 0) throw medp::InvalidInput("unknown oracle '" + s + "' (expected small:<q>)");
  try {
    const int q = std::stoi(s.substr(prefix.size()));
    if (q < 1) throw medp::InvalidInput("oracle size must be >= 1");
    return q;
  } catch (const std::logic_error&) {
    throw medp::InvalidInput("bad oracle size in '" + s + "'");
  }
}

struct Options {
  std::string instance = "-";
  std::string decomposition;
  std::string routing;
  std::string out;
  std::string epsilon = "1/20";
  std::string mode = "treewidth";
  std::string oracle;
  std::optional<int> k;
  std::optional<int> p;
  int congestion_cap = 1;
  bool no_timing = false;
  bool with_lp = false;
  // gen
  std::string family = "series-parallel";
  int nodes = 10;
  int tree_k = 2;
  int rows = 3;
  int cols = 3;
  int leaves = 3;
  int demands = 3;
  std::uint64_t seed = 1;
};

medp::RunConfig run_config(const Options& o) {
  medp::RunConfig cfg;
  cfg.epsilon = medp::parse_rational(o.epsilon);
  medp::check_epsilon(cfg.epsilon);
  cfg.mode = parse_mode(o.mode);
  cfg.k = o.k;
  cfg.p = o.p;
  cfg.oracle_q = parse_oracle(o.oracle);
  return cfg;
}

std::optional<medp::FractionalRouting> optional_routing(const Options& o) {
  if (o.routing.empty()) return std::nullopt;
  return medp::fractional_from_json(read_json(o.routing));
}

int cmd_gen(const Options& o) {
  medp::GeneratedInstance g;
  if (o.family == "series-parallel") {
    g = medp::generate_series_parallel(o.nodes, o.demands, o.seed);
  } else if (o.family == "partial-k-tree") {
    g = medp::generate_partial_k_tree(o.nodes, o.tree_k, o.demands, o.seed);
  } else if (o.family == "grid") {
    g = medp::generate_grid(o.rows, o.cols, o.demands);
  } else if (o.family == "star") {
    g = medp::generate_degenerate_star(o.leaves, o.p.value_or(2), o.demands, o.seed);
  } else {
    throw medp::InvalidInput("unknown family '" + o.family + "'");
  }
  write_json(Json{{"instance", medp::to_json(g.raw)}, {"decomposition", medp::to_json(g.decomposition)}}, o.out);
  return 0;
}

int cmd_lp(const Options& o) {
  const Input in = load_input(o.instance, o.decomposition);
  const medp::PreparedInstance prep = medp::prepare_instance(in.raw, in.decomposition);
  const medp::Rational eps = medp::parse_rational(o.epsilon);
  medp::check_epsilon(eps);
  write_json(medp::to_json(medp::solve_lp(prep.instance, eps)), o.out);
  return 0;
}

int cmd_round(const Options& o) {
  const Input in = load_input(o.instance, o.decomposition);
  const medp::Report rep = medp::run_pipeline(medp::prepare_instance(in.raw, in.decomposition), run_config(o),
                                              optional_routing(o));
  write_json(medp::to_json(rep.routing), o.out);
  return 0;
}

int cmd_report(const Options& o) {
  const Input in = load_input(o.instance, o.decomposition);
  const medp::Report rep = medp::run_pipeline(medp::prepare_instance(in.raw, in.decomposition), run_config(o),
                                              optional_routing(o));
  write_json(medp::report_json(rep, !o.no_timing), o.out);
  return 0;
}

int cmd_exact(const Options& o) {
  const Input in = load_input(o.instance, o.decomposition);
  const medp::PreparedInstance prep = medp::prepare_instance(in.raw, in.decomposition);
  const medp::ExactResult r = medp::exact_medp(prep.instance, o.congestion_cap);
  Json j;
  j["value"] = r.value;
  j["congestion_cap"] = o.congestion_cap;
  j["routing"] = medp::to_json(r.routing);
  j["nodes_expanded"] = r.nodes_expanded;
  j["paths_enumerated"] = r.paths_enumerated;
  if (o.with_lp) j["lp"] = medp::to_string(medp::exact_lp_small(prep.instance));
  write_json(j, o.out);
  return 0;
}

int cmd_validate(const Options& o) {
  if (o.routing.empty()) throw medp::InvalidInput("validate needs --routing");
  const Input in = load_input(o.instance, o.decomposition);
  const medp::PreparedInstance prep = medp::prepare_instance(in.raw, in.decomposition);
  const Json rj = read_json(o.routing);
  Json out;
  std::optional<std::string> err;
  if (medp::is_integral_json(rj)) {
    const medp::IntegralRouting r = medp::integral_from_json(rj);
    err = medp::check_integral(r, prep.instance, medp::Rational(o.congestion_cap));
    out["kind"] = "integral";
    if (!err) {
      out["value"] = r.value();
      out["congestion"] = medp::to_string(medp::congestion_of(r, prep.instance.graph()));
    }
  } else {
    const medp::FractionalRouting r = medp::fractional_from_json(rj);
    err = medp::check_fractional(r, prep.instance);
    out["kind"] = "fractional";
    if (!err) out["value"] = medp::to_string(r.value());
  }
  out["valid"] = !err;
  if (err) out["error"] = *err;
  write_json(out, o.out);
  return err ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation algorithms for maximum edge-disjoint paths"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--instance", o.instance, "Instance or bundle JSON ('-' for stdin)");
    sub->add_option("--decomposition", o.decomposition, "Decomposition JSON (default: from bundle or heuristic)");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto add_round = [&](CLI::App* sub) {
    sub->add_option("--routing", o.routing, "Fractional routing to round instead of solving the LP");
    sub->add_option("--epsilon", o.epsilon, "LP accuracy in (0, 1/4], as p/q");
    sub->add_option("--mode", o.mode, "treewidth or generic");
    sub->add_option("--oracle", o.oracle, "Base-case oracle, small:<q> (default q = p + 1)");
    sub->add_option("--k", o.k, "Override the decomposition's k");
    sub->add_option("--p", o.p, "Override the decomposition's p");
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance with a decomposition");
  gen->add_option("--family", o.family, "series-parallel, partial-k-tree, grid or star");
  gen->add_option("--nodes", o.nodes, "Node count (series-parallel, partial-k-tree)");
  gen->add_option("--k", o.tree_k, "Width of the partial k-tree");
  gen->add_option("--rows", o.rows, "Grid rows");
  gen->add_option("--cols", o.cols, "Grid columns");
  gen->add_option("--leaves", o.leaves, "Degenerate leaves (star)");
  gen->add_option("--p", o.p, "Separator bound (star)");
  gen->add_option("--demands", o.demands, "Number of demand pairs");
  gen->add_option("--seed", o.seed, "RNG seed");
  gen->add_option("--out", o.out, "Output file (default: stdout)");

  CLI::App* lp = app.add_subcommand("lp", "Solve the LP relaxation");
  add_common(lp);
  lp->add_option("--epsilon", o.epsilon, "Accuracy in (0, 1/4], as p/q");

  CLI::App* round = app.add_subcommand("round", "Round to an integral routing");
  add_common(round);
  add_round(round);

  CLI::App* report = app.add_subcommand("report", "Run the pipeline and print the report");
  add_common(report);
  add_round(report);
  report->add_flag("--no-timing", o.no_timing, "Write ms as 0 for reproducible output");

  CLI::App* exact = app.add_subcommand("exact", "Exact MEDP for small instances");
  add_common(exact);
  exact->add_option("--congestion-cap", o.congestion_cap, "Allowed congestion");
  exact->add_flag("--lp", o.with_lp, "Also compute the exact LP optimum");

  CLI::App* validate = app.add_subcommand("validate", "Check a routing against an instance");
  add_common(validate);
  validate->add_option("--routing", o.routing, "Routing JSON")->required();
  validate->add_option("--congestion-cap", o.congestion_cap, "Allowed congestion for integral routings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*lp) return cmd_lp(o);
    if (*round) return cmd_round(o);
    if (*report) return cmd_report(o);
    if (*exact) return cmd_exact(o);
    if (*validate) return cmd_validate(o);
  } catch (const medp::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const medp::GuaranteeViolation& e) {
    std::cerr << "guarantee violated: " << e.what() << "\n";
    return 3;
  } catch (const medp::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const medp::GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
