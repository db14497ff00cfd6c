#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fermiopt/certify.hpp"
#include "fermiopt/errors.hpp"
#include "fermiopt/gaussian.hpp"
#include "fermiopt/harness.hpp"
#include "fermiopt/kernels.hpp"
#include "fermiopt/kneser.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/variational.hpp"

namespace fermiopt::cli {

namespace {

struct Options {
  std::string in, out, method = "", grid = "0:1.5:40", config, nonedges = "even", set, terms;
  std::uint64_t seed = 0;
  int n = 0, q = 4, n1 = 0, trials = 0, steps = 200, max_iter = 2000;
  double theta = 0.5;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

void emit_json(const Json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json map_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = finite_or_null(v);
  return j;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError("schema: " + where + ": expected a nonempty square array");
  const std::size_t n = j.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw InputError("schema: " + where + ": expected a square array");
    for (std::size_t c = 0; c < n; ++c) {
      if (!j[r][c].is_number()) throw InputError("schema: " + where + ": expected numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Json report_json(const CertificateReport& r) {
  Json j = {{"method", r.method}, {"side", r.side}, {"target", r.target}, {"bound", r.bound}};
  j["sos_degree"] = r.sos_degree ? Json(*r.sos_degree) : Json(nullptr);
  j["evidence"] = map_json(r.evidence);
  j["note"] = r.note;
  return j;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": expected a comma-separated list of integers");
    }
  }
  return out;
}

SchemeGraph scheme_from(const Options& o) {
  if (o.nonedges == "even") return SchemeGraph::even(o.n, o.q);
  SchemeGraph sg{o.n, o.q, parse_int_list(o.nonedges, "--nonedges")};
  return sg;
}

void require_in(const Options& o) {
  if (o.in.empty()) throw InputError("--in is required");
}

Json timed(const std::function<Json()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Json j = f();
  j["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return j;
}

void cmd_sample(const Options& o) {
  SykInstance inst = o.n1 > 0 ? sample_2col(o.n1, o.n, o.seed) : sample_syk(o.n, o.q, o.seed);
  emit(instance_text(inst), o.out);
}

void cmd_diag(const Options& o) {
  require_in(o);
  SykInstance inst = load_instance(o.in);
  emit_json(timed([&] {
              GraphReduction rep = complete_representation(inst.n);
              EigenData e = eig_extremes(represent(embed(inst.h, rep.n), rep), EigMode::full);
              return Json{{"instance_id", instance_id(inst)}, {"n", inst.n},        {"opt", e.lambda_max},
                          {"lambda_min", e.lambda_min},      {"opt_pm", std::max(e.lambda_max, -e.lambda_min)},
                          {"multiplicity", e.multiplicity_max}, {"residual", e.residual_max}};
            }),
            o.out);
}

void cmd_certify(const Options& o) {
  ensure_calibrated();
  CertificateReport r;
  if (o.method == "chernoff") {
    if (!o.in.empty()) {
      SykInstance inst = load_instance(o.in);
      r = chernoff_moment_bound(inst.n, inst.q);
    } else {
      r = chernoff_moment_bound(o.n, o.q);
    }
  } else {
    require_in(o);
    SykInstance inst = load_instance(o.in);
    if (o.method == "schatten4") r = schatten4_certificate(inst.h);
    else if (o.method == "tau") r = tau_triangular_certificate(inst.h);
    else if (o.method == "frag42") r = fragment42_certificate(inst.h);
    else throw InputError("--method must be chernoff, schatten4, tau or frag42");
  }
  emit_json(report_json(r), o.out);
}

void cmd_lower(const Options& o) {
  require_in(o);
  SykInstance inst = load_instance(o.in);
  Json j;
  if (o.method == "fooling") {
    ensure_calibrated();
    j = report_json(fooling_pseudostate(inst.h));
  } else if (o.method == "gaussian-round") {
    SdpGaussSolution sol = solve_sdp_gauss(inst.h, -1, o.max_iter);
    RoundingResult r = round_to_gaussian(sol, inst.h, std::nullopt, o.trials > 0 ? o.trials : 20, o.seed);
    j = {{"method", "gaussian-round"}, {"side", "lower"}, {"target", "Opt"}, {"bound", r.value},
         {"sdp_objective", sol.objective}, {"sigma", r.sigma}, {"cov", matrix_json(r.cov.sigma)}};
  } else if (o.method == "syk-witness") {
    WitnessResult w = syk_gaussian_witness(inst.h);
    j = {{"method", "syk-witness"}, {"side", "lower"}, {"target", "Opt"}, {"bound", w.value}, {"c", w.c},
         {"cov", matrix_json(w.cov.sigma)}};
  } else if (o.method == "variational") {
    PipelineResult r = witness_pipeline(inst, o.seed);
    j = {{"method", "variational"}, {"side", "lower"}, {"target", "Opt"}, {"bound", r.value}, {"theta", r.theta},
         {"report", map_json(r.report)}};
  } else {
    throw InputError("--method must be fooling, gaussian-round, syk-witness or variational");
  }
  emit_json(j, o.out);
}

void cmd_theta(const Options& o) {
  ThetaCertificate c = delsarte_theta(scheme_from(o));
  Json mult = Json::object(), mult_exact = Json::object();
  for (const auto& [e, v] : c.multipliers) mult[std::to_string(e)] = v;
  for (const auto& [e, v] : c.multipliers_exact) mult_exact[std::to_string(e)] = v;
  emit_json({{"n", o.n},
             {"q", o.q},
             {"theta", c.theta_value},
             {"theta_exact", c.theta_exact},
             {"exact", c.exact},
             {"multipliers", mult},
             {"multipliers_exact", mult_exact},
             {"p_values", c.p_values},
             {"tight_constraints", c.tight_constraints},
             {"ties", c.ties}},
            o.out);
}

AnticommGraph graph_input(const Options& o) {
  if (!o.in.empty()) return load_graph(o.in);
  if (o.n > 0) return build_kg_graph(scheme_from(o));
  throw InputError("give --in graph.json or --n/--q/--nonedges");
}

void cmd_alpha(const Options& o) {
  AnticommGraph g = graph_input(o);
  std::vector<int> s = maximum_independent_set(g);
  for (int& v : s) ++v;
  emit_json({{"n", g.n()}, {"alpha", s.size()}, {"set", s}}, o.out);
}

void cmd_psi(const Options& o) {
  AnticommGraph g = graph_input(o);
  PsiResult r = psi_local_search(g, o.trials > 0 ? o.trials : 50, o.seed);
  double worst = *std::max_element(r.trial_values.begin(), r.trial_values.end());
  emit_json({{"n", g.n()},
             {"psi", r.best_value},
             {"best_a", r.best_a},
             {"independent_start_value", r.independent_start_value},
             {"max_trial_value", worst},
             {"trials", r.trial_values.size()}},
            o.out);
}

void cmd_localopt(const Options& o) {
  AnticommGraph g = graph_input(o);
  std::vector<int> s = parse_int_list(o.set, "--set");
  for (int& v : s) --v;
  LocalOptResult r = local_opt_check(g, s);
  if (!r.maximal) std::cerr << "warning: S is not a maximal independent set\n";
  emit_json({{"grad_norm", finite_or_null(r.grad_norm)},
             {"hessian_max_eig", finite_or_null(r.hessian_max_eig)},
             {"value", r.value},
             {"top_multiplicity", r.top_multiplicity},
             {"maximal", r.maximal},
             {"status", r.status},
             {"a0", r.a0}},
            o.out);
}

void cmd_gaussian(const std::string& which, const Options& o) {
  if (which == "lowrank") {
    if (o.terms.empty()) throw InputError("--terms is required");
    Json j = read_json_file(o.terms);
    const Json& list = j.is_object() && j.contains("terms") ? j["terms"] : j;
    if (!list.is_array() || list.empty()) throw InputError("schema: terms: expected a nonempty array");
    std::vector<LowRankTerm> terms;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "terms[" + std::to_string(k) + "]";
      if (!list[k].is_object() || !list[k].contains("lambda") || !list[k]["lambda"].is_number())
        throw InputError("schema: " + where + ".lambda: missing");
      if (!list[k].contains("a")) throw InputError("schema: " + where + ".a: missing");
      terms.push_back({list[k]["lambda"].get<double>(), matrix_from_json(list[k]["a"], where + ".a")});
    }
    LowRankResult r = lowrank_optimize(terms);
    emit_json({{"value", r.value}, {"surrogate", r.surrogate}, {"history", r.history},
               {"cov", matrix_json(r.cov.sigma)}},
              o.out);
    return;
  }
  require_in(o);
  SykInstance inst = load_instance(o.in);
  if (which == "sdp") {
    SdpGaussSolution s = solve_sdp_gauss(inst.h, -1, o.max_iter);
    emit_json({{"objective", s.objective},
               {"psd_min_eig", s.psd_min_eig},
               {"trace1_excess", s.trace1_excess},
               {"trace2_excess", s.trace2_excess},
               {"antisym_violation", s.antisym_violation},
               {"iterations", s.iterations},
               {"status", s.status}},
              o.out);
  } else if (which == "round") {
    SdpGaussSolution s = solve_sdp_gauss(inst.h, -1, o.max_iter);
    RoundingResult r = round_to_gaussian(s, inst.h, std::nullopt, o.trials > 0 ? o.trials : 20, o.seed);
    emit_json({{"value", r.value}, {"sdp_objective", s.objective}, {"sigma", r.sigma}, {"best_trial", r.best_trial},
               {"cov", matrix_json(r.cov.sigma)}},
              o.out);
  } else {
    WitnessResult w = syk_gaussian_witness(inst.h);
    emit_json({{"value", w.value}, {"c", w.c}, {"g1_norm", w.g1_norm}, {"cov", matrix_json(w.cov.sigma)}}, o.out);
  }
}

void cmd_variational(const std::string& which, const Options& o) {
  require_in(o);
  SykInstance inst = load_instance(o.in);
  if (which == "witness") {
    PipelineResult r = witness_pipeline(inst, o.seed);
    emit_json({{"value", r.value}, {"theta", r.theta}, {"report", map_json(r.report)}}, o.out);
    return;
  }
  VariationalSetup s = prepare_reference(inst);
  if (which == "sweep") {
    SweepResult sw = theta_sweep(s, s.h, parse_theta_grid(o.grid));
    std::string csv = "theta,value\n";
    char buf[64];
    for (auto [t, v] : sw.curve) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, v);
      csv += buf;
    }
    emit(csv, o.out);
    if (!o.out.empty())
      std::cout << Json{{"best_theta", sw.best_theta}, {"best_value", sw.best_value}, {"first_order", s.first_order}}.dump(2)
                << "\n";
  } else {
    TrotterReport r = trotter_compare(s, s.h, o.theta, o.steps);
    emit_json({{"theta", o.theta}, {"steps", o.steps}, {"value_trotter", r.value_trotter},
               {"value_exact", r.value_exact}, {"abs_error", std::abs(r.value_trotter - r.value_exact)},
               {"fidelity", r.fidelity}},
              o.out);
  }
}

void cmd_suite(const Options& o) {
  if (o.config.empty()) throw InputError("--config is required");
  SuiteConfig cfg = suite_config_from_json(read_json_file(o.config));
  if (!o.out.empty()) cfg.output_dir = o.out;
  for (const auto& job : cfg.jobs)
    if (job.command == "certify" || (job.command == "lower" && job.params.value("method", "") == "fooling")) {
      ensure_calibrated();
      break;
    }
  std::cout << run_suite(cfg) << "\n";
}

void cmd_summarize(const Options& o) {
  require_in(o);
  emit_json(summarize(o.in), o.out);
}

} // namespace

int run(int argc, char** argv) {
  CLI::App app{"Majorana polynomial optimization and certification toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string action;

  auto add_in = [&](CLI::App* c) { c->add_option("--in", o.in, "input JSON"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output path (stdout if omitted)"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "seed"); };
  auto add_scheme = [&](CLI::App* c) {
    c->add_option("--n", o.n, "ground set size");
    c->add_option("--q", o.q, "subset size");
    c->add_option("--nonedges", o.nonedges, "even, or a comma-separated list of distances");
  };

  auto* sample = app.add_subcommand("sample", "sample an SYK or 2-colored SYK instance");
  sample->add_option("--n", o.n, "indeterminates (chi count for 2-colored)")->required();
  sample->add_option("--q", o.q, "degree");
  sample->add_option("--n1", o.n1, "first-color count; selects the 2-colored model");
  add_seed(sample);
  add_out(sample);

  auto* diag = app.add_subcommand("diag", "exact extreme eigenvalues");
  add_in(diag);
  add_out(diag);

  auto* certify = app.add_subcommand("certify", "upper-bound certificate");
  certify->add_option("--method", o.method, "chernoff | schatten4 | tau | frag42")->required();
  add_in(certify);
  add_out(certify);
  certify->add_option("--n", o.n, "n for chernoff without an instance");
  certify->add_option("--q", o.q, "q for chernoff without an instance");

  auto* lower = app.add_subcommand("lower", "lower-bound witness");
  lower->add_option("--method", o.method, "fooling | gaussian-round | syk-witness | variational")->required();
  add_in(lower);
  add_out(lower);
  add_seed(lower);
  lower->add_option("--trials", o.trials, "rounding trials");

  auto* theta = app.add_subcommand("theta", "Delsarte LP theta on a Johnson-scheme graph");
  add_scheme(theta);
  theta->get_option("--n")->required();
  add_out(theta);

  auto* alpha = app.add_subcommand("alpha", "exact independence number");
  add_in(alpha);
  add_scheme(alpha);
  add_out(alpha);

  auto* psi = app.add_subcommand("psi", "local search for Psi");
  add_in(psi);
  add_scheme(psi);
  add_seed(psi);
  psi->add_option("--trials", o.trials, "random starts");
  add_out(psi);

  auto* localopt = app.add_subcommand("localopt", "first and second derivative check at an independent set");
  add_in(localopt);
  add_scheme(localopt);
  localopt->add_option("--set", o.set, "1-based vertices, comma separated")->required();
  add_out(localopt);

  auto* gaussian = app.add_subcommand("gaussian", "Gaussian-state relaxation and witnesses");
  gaussian->require_subcommand(1);
  const std::pair<const char*, const char*> gaussian_cmds[] = {
      {"sdp", "covariance SDP relaxation"},
      {"round", "SDP followed by randomized rounding to a Gaussian state"},
      {"witness", "Gaussian witness for SYK instances"},
      {"lowrank", "alternating optimizer for sums of squared quadratics"}};
  for (const auto& [name, help] : gaussian_cmds) {
    auto* c = gaussian->add_subcommand(name, help);
    add_in(c);
    add_out(c);
    add_seed(c);
    c->add_option("--trials", o.trials, "rounding trials");
    c->add_option("--max-iter", o.max_iter, "SDP iterations");
    c->add_option("--terms", o.terms, "low-rank terms JSON");
    c->callback([&, name] { action = std::string("gaussian ") + name; });
  }

  auto* variational = app.add_subcommand("variational", "variational witness state");
  variational->require_subcommand(1);
  const std::pair<const char*, const char*> variational_cmds[] = {
      {"sweep", "theta sweep on a 2-colored instance"},
      {"witness", "full pipeline on an SYK instance"},
      {"trotter", "product-formula state against the exact rotation"}};
  for (const auto& [name, help] : variational_cmds) {
    auto* c = variational->add_subcommand(name, help);
    add_in(c);
    add_out(c);
    add_seed(c);
    c->add_option("--grid", o.grid, "lo:hi:count");
    c->add_option("--steps", o.steps, "Trotter steps");
    c->add_option("--theta", o.theta, "Trotter angle");
    c->callback([&, name] { action = std::string("variational ") + name; });
  }

  auto* suite = app.add_subcommand("suite", "seeded batch run to CSV");
  suite->add_option("--config", o.config, "suite JSON")->required();
  suite->add_option("--out", o.out, "output directory (overrides the config)");

  auto* summ = app.add_subcommand("summarize", "aggregate a results CSV");
  add_in(summ);
  add_out(summ);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) cmd_sample(o);
    else if (diag->parsed()) cmd_diag(o);
    else if (certify->parsed()) cmd_certify(o);
    else if (lower->parsed()) cmd_lower(o);
    else if (theta->parsed()) cmd_theta(o);
    else if (alpha->parsed()) cmd_alpha(o);
    else if (psi->parsed()) cmd_psi(o);
    else if (localopt->parsed()) cmd_localopt(o);
    else if (gaussian->parsed()) cmd_gaussian(action.substr(9), o);
    else if (variational->parsed()) cmd_variational(action.substr(12), o);
    else if (suite->parsed()) cmd_suite(o);
    else if (summ->parsed()) cmd_summarize(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const ContractError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

} // namespace fermiopt::cli
