#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fermiopt/errors.hpp"
#include "fermiopt/harness.hpp"

using namespace fermiopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fermiopt-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

} // namespace

TEST_CASE("instance serialization round trip") {
  SykInstance inst = sample_syk(10, 4, 4);
  SykInstance back = instance_from_json(Json::parse(instance_text(inst)));
  CHECK(back.n == 10);
  CHECK(back.seed == 4);
  CHECK(max_coeff_diff(back.h, inst.h) == 0.0);
  CHECK(instance_id(back) == instance_id(inst));
  CHECK(instance_id(inst).size() == 16);
  CHECK(instance_id(sample_syk(10, 4, 5)) != instance_id(inst));

  SykInstance two = sample_2col(6, 2, 1);
  SykInstance two_back = instance_from_json(instance_to_json(two));
  CHECK(two_back.n1 == 6);
  CHECK(two_back.n_chi() == 2);

  fs::path dir = scratch_dir("roundtrip");
  save_instance(inst, (dir / "a.json").string());
  CHECK(max_coeff_diff(load_instance((dir / "a.json").string()).h, inst.h) == 0.0);

  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("schema errors") {
  Json missing = {{"n", 4}};
  CHECK_THROWS_AS(polynomial_from_json(missing), InputError);
  Json unsorted = {{"n", 4}, {"terms", {{{"support", {2, 1}}, {"re", 1.0}}}}};
  try {
    polynomial_from_json(unsorted);
    FAIL("unsorted support accepted");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("terms[0].support") != std::string::npos);
  }
  Json out_of_range = {{"n", 4}, {"terms", {{{"support", {1, 5}}, {"re", 1.0}}}}};
  CHECK_THROWS_AS(polynomial_from_json(out_of_range), InputError);
  Json no_re = {{"n", 4}, {"terms", {{{"support", {1, 2}}}}}};
  CHECK_THROWS_AS(polynomial_from_json(no_re), InputError);

  fs::path dir = scratch_dir("schema");
  std::ofstream(dir / "bad.json") << "{\n  \"n\": 4,\n  \"terms\": [\n}";
  try {
    read_json_file((dir / "bad.json").string());
    FAIL("malformed JSON accepted");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(read_json_file((dir / "absent.json").string()), InputError);
}

TEST_CASE("graph serialization") {
  AnticommGraph c5 = AnticommGraph::cycle(5);
  AnticommGraph back = graph_from_json(graph_to_json(c5));
  CHECK(back.edges() == c5.edges());
  AnticommGraph k4 = graph_from_json(Json{{"n", 4}, {"complete", true}});
  CHECK(k4.is_complete());
  CHECK_THROWS_AS(graph_from_json(Json{{"n", 3}, {"edges", {{1, 1}}}}), InputError);
}

TEST_CASE("CSV rows") {
  ResultRow r;
  r.instance_id = "abc";
  r.method = "diag";
  r.side = "exact";
  r.value = 0.1;
  r.extra = {{"n", 12}, {"note", "a,b \"q\""}};
  r.seed = 3;
  fs::path dir = scratch_dir("csv");
  std::ofstream(dir / "r.csv") << kCsvHeader << "\n" << csv_line(r) << "\n";
  auto rows = read_csv((dir / "r.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == 0.1);
  CHECK(rows[0].extra == r.extra);
  CHECK(rows[0].seed == 3);
}

TEST_CASE("suite runs are deterministic modulo runtime") {
  Json cfg = {{"output_dir", ""},
              {"parallelism", 4},
              {"jobs",
               {{{"command", "diag"}, {"params", {{"n", 12}}}, {"seeds", {{"from", 0}, {"to", 10}}}},
                {{"command", "certify"}, {"params", {{"n", 12}, {"method", "schatten4"}}}, {"seeds", {{"from", 0}, {"to", 10}}}},
                {{"command", "lower"}, {"params", {{"n", 12}, {"method", "syk-witness"}}}, {"seeds", {{"from", 0}, {"to", 9}}}},
                {{"command", "certify"}, {"params", {{"n", 10}, {"method", "schatten4"}}}, {"seeds", {0}}}}}};
  fs::path a = scratch_dir("suite-a"), b = scratch_dir("suite-b");
  cfg["output_dir"] = a.string();
  SuiteConfig ca = suite_config_from_json(cfg);
  cfg["output_dir"] = b.string();
  cfg["parallelism"] = 1;
  SuiteConfig cb = suite_config_from_json(cfg);

  auto ra = read_csv(run_suite(ca)), rb = read_csv(run_suite(cb));
  REQUIRE(ra.size() == 30);
  REQUIRE(rb.size() == 30);
  int errors = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].instance_id == rb[i].instance_id);
    CHECK(ra[i].method == rb[i].method);
    CHECK(ra[i].value == rb[i].value);
    CHECK(ra[i].extra == rb[i].extra);
    CHECK(ra[i].status == rb[i].status);
    errors += ra[i].status == "error";
  }
  CHECK(errors == 1);
  CHECK(ra.back().status == "error");
  CHECK(fs::exists(a / "instances" / (ra.front().instance_id + ".json")));

  Json s = summarize((a / "results.csv").string());
  CHECK(s["soundness"]["violations"] == 0);
  CHECK(s["soundness"]["checked"] == 19);
  CHECK(s["error_rows"] == 1);
  CHECK(s["groups"].size() == 3);
}

TEST_CASE("suite config validation") {
  CHECK_THROWS_AS(suite_config_from_json(Json{{"output_dir", "x"}, {"jobs", Json::array()}}), InputError);
  Json bad_cmd = {{"output_dir", "x"}, {"jobs", {{{"command", "sample"}, {"seeds", {1}}}}}};
  CHECK_THROWS_AS(suite_config_from_json(bad_cmd), InputError);
  Json bad_seed = {{"output_dir", "x"}, {"jobs", {{{"command", "diag"}, {"seeds", {-1}}}}}};
  CHECK_THROWS_AS(suite_config_from_json(bad_seed), InputError);
  CHECK(is_suite_command("variational"));
  CHECK_FALSE(is_suite_command("summarize"));
}

TEST_CASE("summaries") {
  Json empty = summarize_rows({});
  CHECK(empty["groups"].empty());
  CHECK(empty["soundness"]["checked"] == 0);

  auto row = [](std::string id, std::string method, std::string side, double v, int n, std::string target = "Opt") {
    ResultRow r;
    r.instance_id = std::move(id);
    r.method = std::move(method);
    r.side = std::move(side);
    r.value = v;
    r.extra = {{"n", n}, {"target", target}};
    return r;
  };
  std::vector<ResultRow> rows{row("a", "diag", "exact", 2.0, 16), row("a", "schatten4", "upper", 2.5, 16),
                              row("a", "fooling", "lower", 3.0, 16, "SOS4"), row("b", "schatten4", "upper", 3.0, 36),
                              row("b", "syk-witness", "lower", 1.0, 36)};
  Json s = summarize_rows(rows);
  CHECK(s["soundness"]["violations"] == 0);
  CHECK(s["soundness"]["checked"] == 2);
  CHECK(s["groups"].size() == 5);
  for (const auto& g : s["groups"])
    if (g["n"] == 36 && g["method"] == "schatten4") CHECK(g["value_over_sqrt_n"]["mean"].get<double>() == doctest::Approx(0.5));

  rows.push_back(row("a", "bogus", "upper", 1.0, 16));
  CHECK(summarize_rows(rows)["soundness"]["violations"] == 1);
}
