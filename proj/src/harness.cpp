#include "fermiopt/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "fermiopt/certify.hpp"
#include "fermiopt/errors.hpp"
#include "fermiopt/gaussian.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/variational.hpp"

namespace fermiopt {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw InputError("schema: " + field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where.empty() ? "<root>" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

long long require_int(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number_integer()) schema_error(where.empty() ? key : where + "." + key, "expected an integer");
  return v.get<long long>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) schema_error(where + "." + key, "expected a number");
  return it->get<double>();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("csv line " + std::to_string(lineno) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

Json evidence_json(const std::map<std::string, double>& ev) {
  Json j = Json::object();
  for (const auto& [k, v] : ev) j[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  return j;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Json stats(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  return {{"mean", sum / v.size()},
          {"median", median_of(v)},
          {"min", *std::min_element(v.begin(), v.end())},
          {"max", *std::max_element(v.begin(), v.end())}};
}

} // namespace

Json polynomial_to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [s, c] : p.terms()) {
    Json sup = Json::array();
    for (int i : indices_of(s)) sup.push_back(i + 1);
    terms.push_back({{"support", sup}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"n", p.n()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j) {
  const long long n = require_int(j, "n", "");
  if (n < 0 || n > kMaxIndeterminates) schema_error("n", "must lie in [0, 64]");
  const Json& terms = require(j, "terms", "");
  if (!terms.is_array()) schema_error("terms", "expected an array");
  Polynomial p(static_cast<int>(n));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string where = "terms[" + std::to_string(t) + "]";
    const Json& sup = require(terms[t], "support", where);
    if (!sup.is_array()) schema_error(where + ".support", "expected an array");
    Support s = 0;
    long long prev = 0;
    for (const Json& v : sup) {
      if (!v.is_number_integer()) schema_error(where + ".support", "expected integers");
      long long k = v.get<long long>();
      if (k < 1 || k > n) schema_error(where + ".support", "index " + std::to_string(k) + " outside 1..n");
      if (k <= prev) schema_error(where + ".support", "indices must be strictly ascending");
      prev = k;
      s |= Support{1} << (k - 1);
    }
    const Json& re = require(terms[t], "re", where);
    if (!re.is_number()) schema_error(where + ".re", "expected a number");
    const double im = number_or(terms[t], "im", 0.0, where);
    if (p.terms().count(s)) schema_error(where + ".support", "duplicate support");
    p.add(s, cplx(re.get<double>(), im));
  }
  return p;
}

Json graph_to_json(const AnticommGraph& g) {
  if (g.is_complete()) return {{"n", g.n()}, {"complete", true}};
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a + 1, b + 1});
  return {{"n", g.n()}, {"edges", edges}};
}

AnticommGraph graph_from_json(const Json& j) {
  const long long n = require_int(j, "n", "");
  if (n < 0 || n > 100000) schema_error("n", "out of range");
  if (auto it = j.find("complete"); it != j.end()) {
    if (!it->is_boolean()) schema_error("complete", "expected a boolean");
    if (it->get<bool>()) return AnticommGraph::complete(static_cast<int>(n));
  }
  const Json& edges = require(j, "edges", "");
  if (!edges.is_array()) schema_error("edges", "expected an array");
  std::vector<std::pair<int, int>> list;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string where = "edges[" + std::to_string(e) + "]";
    const Json& pr = edges[e];
    if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
      schema_error(where, "expected [j, k]");
    long long a = pr[0].get<long long>(), b = pr[1].get<long long>();
    if (a < 1 || b < 1 || a > n || b > n || a == b) schema_error(where, "endpoints must be distinct and in 1..n");
    list.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  return AnticommGraph::from_edges(static_cast<int>(n), list);
}

Json instance_to_json(const SykInstance& inst) {
  Json j = polynomial_to_json(inst.h);
  j["model"] = inst.model;
  j["q"] = inst.q;
  j["n1"] = inst.n1;
  j["seed"] = inst.seed;
  return j;
}

SykInstance instance_from_json(const Json& j) {
  SykInstance inst;
  inst.h = polynomial_from_json(j);
  inst.n = inst.h.n();
  if (auto it = j.find("model"); it != j.end()) {
    if (!it->is_string()) schema_error("model", "expected a string");
    inst.model = it->get<std::string>();
    if (inst.model != "syk" && inst.model != "syk2col" && inst.model != "custom")
      schema_error("model", "expected syk, syk2col or custom");
  }
  if (j.contains("q")) {
    inst.q = static_cast<int>(require_int(j, "q", ""));
    if (inst.q < 0 || inst.q > inst.n) schema_error("q", "must lie in [0, n]");
  }
  if (j.contains("n1")) {
    inst.n1 = static_cast<int>(require_int(j, "n1", ""));
    if (inst.n1 < 0 || inst.n1 > inst.n) schema_error("n1", "must lie in [0, n]");
  }
  if (inst.model == "syk2col" && inst.n1 == 0) schema_error("n1", "required for syk2col");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      schema_error("seed", "expected a nonnegative integer");
    inst.seed = it->get<std::uint64_t>();
  }
  return inst;
}

std::string instance_text(const SykInstance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

void save_instance(const SykInstance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << instance_text(inst);
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line/column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("parse error in " + path + " at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

SykInstance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }
AnticommGraph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string instance_id(const SykInstance& inst) { return sha256_hex(instance_text(inst)).substr(0, 16); }

std::string csv_line(const ResultRow& row) {
  std::string out = csv_quote(row.instance_id) + "," + csv_quote(row.method) + "," + csv_quote(row.side) + "," +
                    fmt_double(row.value) + "," + csv_quote(row.extra.dump());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", row.runtime_ms);
  return out + "," + buf + "," + std::to_string(row.seed) + "," + csv_quote(row.status);
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == kCsvHeader) continue;
    if (lineno == 1) throw InputError("csv line 1: header must be " + std::string(kCsvHeader));
    auto cells = split_csv_line(line, lineno);
    if (cells.size() != 8) throw InputError("csv line " + std::to_string(lineno) + ": expected 8 columns");
    ResultRow r;
    r.instance_id = cells[0];
    r.method = cells[1];
    r.side = cells[2];
    try {
      r.value = std::stod(cells[3]);
      r.extra = cells[4].empty() ? Json::object() : Json::parse(cells[4]);
      r.runtime_ms = std::stod(cells[5]);
      r.seed = std::stoull(cells[6]);
    } catch (const std::exception&) {
      throw InputError("csv line " + std::to_string(lineno) + ": malformed field");
    }
    r.status = cells[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

bool is_suite_command(const std::string& c) {
  static const std::set<std::string> known{"diag", "certify", "lower", "gaussian", "variational"};
  return known.count(c) > 0;
}

SuiteConfig suite_config_from_json(const Json& j) {
  SuiteConfig cfg;
  const Json& out = require(j, "output_dir", "");
  if (!out.is_string()) schema_error("output_dir", "expected a string");
  cfg.output_dir = out.get<std::string>();
  if (j.contains("parallelism")) {
    cfg.parallelism = static_cast<int>(require_int(j, "parallelism", ""));
    if (cfg.parallelism < 1) schema_error("parallelism", "must be positive");
  }
  const Json& jobs = require(j, "jobs", "");
  if (!jobs.is_array() || jobs.empty()) schema_error("jobs", "expected a nonempty array");
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const std::string where = "jobs[" + std::to_string(k) + "]";
    SuiteJob job;
    const Json& cmd = require(jobs[k], "command", where);
    if (!cmd.is_string() || !is_suite_command(cmd.get<std::string>()))
      schema_error(where + ".command", "not a registered subcommand");
    job.command = cmd.get<std::string>();
    if (jobs[k].contains("params")) {
      job.params = jobs[k]["params"];
      if (!job.params.is_object()) schema_error(where + ".params", "expected an object");
    }
    const Json& seeds = require(jobs[k], "seeds", where);
    auto as_seed = [&](const Json& v) {
      if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(where + ".seeds", "expected nonnegative integers");
      return v.get<std::uint64_t>();
    };
    if (seeds.is_object()) {
      std::uint64_t lo = as_seed(require(seeds, "from", where + ".seeds"));
      std::uint64_t hi = as_seed(require(seeds, "to", where + ".seeds"));
      for (std::uint64_t s = lo; s < hi; ++s) job.seeds.push_back(s);
    } else if (seeds.is_array()) {
      for (const Json& v : seeds) job.seeds.push_back(as_seed(v));
    } else {
      schema_error(where + ".seeds", "expected {from, to} or a list");
    }
    if (job.seeds.empty()) schema_error(where + ".seeds", "must be nonempty");
    cfg.jobs.push_back(std::move(job));
  }
  return cfg;
}

namespace {

SykInstance job_instance(const Json& p, std::uint64_t seed) {
  const std::string model = p.value("model", std::string("syk"));
  const int n = p.value("n", 0);
  if (model == "syk2col") return sample_2col(p.value("n1", 0), n, seed);
  if (model != "syk") throw InputError("params.model must be syk or syk2col");
  return sample_syk(n, p.value("q", 4), seed);
}

void fill_from_report(ResultRow& row, const CertificateReport& rep) {
  row.method = rep.method;
  row.side = rep.side;
  row.value = rep.bound;
  row.extra["target"] = rep.target;
  row.extra["evidence"] = evidence_json(rep.evidence);
}

void execute(const SuiteJob& job, const SykInstance& inst, std::uint64_t seed, ResultRow& row) {
  const Json& p = job.params;
  const std::string method = p.value("method", std::string());
  if (job.command == "diag") {
    row.method = "diag";
    row.side = "exact";
    row.value = opt_complete(inst.h);
    row.extra["target"] = "Opt";
  } else if (job.command == "certify") {
    ensure_calibrated();
    CertificateReport rep;
    if (method == "schatten4") rep = schatten4_certificate(inst.h);
    else if (method == "tau") rep = tau_triangular_certificate(inst.h);
    else if (method == "frag42") rep = fragment42_certificate(inst.h);
    else if (method == "chernoff") rep = chernoff_moment_bound(inst.n, inst.q);
    else throw InputError("certify method must be chernoff, schatten4, tau or frag42");
    fill_from_report(row, rep);
  } else if (job.command == "lower") {
    row.side = "lower";
    row.extra["target"] = "Opt";
    if (method == "fooling") {
      ensure_calibrated();
      fill_from_report(row, fooling_pseudostate(inst.h));
    } else if (method == "gaussian-round") {
      SdpGaussSolution sol = solve_sdp_gauss(inst.h, -1, p.value("max_iter", 300));
      RoundingResult r = round_to_gaussian(sol, inst.h, std::nullopt, p.value("trials", 20), seed);
      row.method = "gaussian-round";
      row.value = r.value;
      row.extra["sdp_objective"] = sol.objective;
      row.extra["sigma"] = r.sigma;
    } else if (method == "syk-witness") {
      WitnessResult w = syk_gaussian_witness(inst.h);
      row.method = "syk-witness";
      row.value = w.value;
      row.extra["c"] = w.c;
    } else if (method == "variational") {
      PipelineResult r = witness_pipeline(inst, seed);
      row.method = "variational";
      row.value = r.value;
      row.extra["theta"] = r.theta;
      row.extra["report"] = evidence_json(r.report);
    } else {
      throw InputError("lower method must be fooling, gaussian-round, syk-witness or variational");
    }
  } else if (job.command == "gaussian") {
    if (method == "sdp") {
      SdpGaussSolution sol = solve_sdp_gauss(inst.h, -1, p.value("max_iter", 300));
      row.method = "gaussian-sdp";
      row.side = "relaxation";
      row.value = sol.objective;
      row.extra["target"] = "SDP4Gauss";
      row.extra["status"] = sol.status;
    } else if (method == "witness") {
      WitnessResult w = syk_gaussian_witness(inst.h);
      row.method = "syk-witness";
      row.side = "lower";
      row.value = w.value;
      row.extra["target"] = "Opt";
    } else {
      throw InputError("gaussian suite method must be sdp or witness");
    }
  } else if (job.command == "variational") {
    if (method == "sweep") {
      VariationalSetup s = prepare_reference(inst);
      SweepResult sw = theta_sweep(s, s.h, default_theta_grid());
      row.method = "variational-sweep";
      row.value = sw.best_value;
      row.extra["theta"] = sw.best_theta;
      row.extra["first_order"] = s.first_order;
    } else {
      PipelineResult r = witness_pipeline(inst, seed);
      row.method = "variational";
      row.value = r.value;
      row.extra["theta"] = r.theta;
    }
    row.side = "lower";
    row.extra["target"] = "Opt";
  } else {
    throw InputError("unknown suite command " + job.command);
  }
  if (!std::isfinite(row.value)) throw InvariantError("non-finite result value");
}

} // namespace

ResultRow run_job(const SuiteJob& job, std::uint64_t seed, const std::string& instance_dir) {
  static std::mutex file_mutex;
  ResultRow row;
  row.seed = seed;
  row.method = job.params.value("method", job.command);
  row.side = "none";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SykInstance inst = job_instance(job.params, seed);
    row.instance_id = instance_id(inst);
    row.extra["n"] = inst.n;
    if (!instance_dir.empty()) {
      std::lock_guard<std::mutex> lock(file_mutex);
      const fs::path path = fs::path(instance_dir) / (row.instance_id + ".json");
      if (!fs::exists(path)) save_instance(inst, path.string());
    }
    execute(job, inst, seed, row);
  } catch (const std::exception& e) {
    row.status = "error";
    row.value = 0;
    row.extra["error"] = e.what();
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string run_suite(const SuiteConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir / "instances", ec);
  const fs::path csv = dir / "results.csv";
  std::ofstream out(csv);
  if (ec || !out) throw InputError("cannot write to output directory " + config.output_dir);

  std::vector<std::pair<const SuiteJob*, std::uint64_t>> tasks;
  for (const auto& job : config.jobs)
    for (auto s : job.seeds) tasks.emplace_back(&job, s);
  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  const std::string inst_dir = (dir / "instances").string();
  auto worker = [&]() {
    for (std::size_t k = next++; k < tasks.size(); k = next++) rows[k] = run_job(*tasks[k].first, tasks[k].second, inst_dir);
  };
  const int workers = std::max(1, std::min<int>(config.parallelism, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Rows land in task order regardless of which worker finished first.
  out << kCsvHeader << "\n";
  for (const auto& r : rows) out << csv_line(r) << "\n";
  if (!out) throw InputError("failed writing " + csv.string());
  return csv.string();
}

Json summarize_rows(const std::vector<ResultRow>& rows) {
  // n -> method -> values
  std::map<int, std::map<std::string, std::vector<double>>> groups;
  std::map<std::string, std::vector<const ResultRow*>> by_instance;
  int errors = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++errors;
      continue;
    }
    groups[r.extra.value("n", 0)][r.method].push_back(r.value);
    by_instance[r.instance_id].push_back(&r);
  }
  Json out = Json::object();
  Json g = Json::array();
  for (const auto& [n, methods] : groups)
    for (const auto& [method, vals] : methods) {
      std::vector<double> scaled;
      for (double v : vals) scaled.push_back(n > 0 ? v / std::sqrt(static_cast<double>(n)) : v);
      g.push_back({{"n", n}, {"method", method}, {"count", vals.size()}, {"value", stats(vals)},
                   {"value_over_sqrt_n", stats(scaled)}});
    }
  out["groups"] = g;

  const double tol = 1e-7;
  int checked = 0, violations = 0;
  Json bad = Json::array();
  for (const auto& [id, list] : by_instance) {
    std::optional<double> exact;
    for (auto* r : list)
      if (r->side == "exact") exact = r->value;
    double min_upper = INFINITY, max_lower = -INFINITY;
    for (auto* r : list) {
      // Only bounds on Opt itself take part; E[Opt] and SOS4 targets bound other quantities.
      if (r->extra.value("target", std::string("Opt")) != "Opt") continue;
      if (r->side == "upper") min_upper = std::min(min_upper, r->value);
      if (r->side == "lower") max_lower = std::max(max_lower, r->value);
      if (!exact || (r->side != "upper" && r->side != "lower")) continue;
      ++checked;
      const bool ok = r->side == "upper" ? r->value >= *exact - tol : r->value <= *exact + tol;
      if (!ok) {
        ++violations;
        bad.push_back({{"instance_id", id}, {"method", r->method}, {"value", r->value}, {"exact", *exact}});
      }
    }
    if (!exact && std::isfinite(min_upper) && std::isfinite(max_lower)) {
      ++checked;
      if (min_upper < max_lower - tol) {
        ++violations;
        bad.push_back({{"instance_id", id}, {"min_upper", min_upper}, {"max_lower", max_lower}});
      }
    }
  }
  out["soundness"] = {{"checked", checked}, {"violations", violations}, {"details", bad}};
  out["error_rows"] = errors;
  return out;
}

Json summarize(const std::string& csv_path) { return summarize_rows(read_csv(csv_path)); }

} // namespace fermiopt
