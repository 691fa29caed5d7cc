#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamow/commands.hpp"
#include "gamow/io.hpp"

using namespace gamow;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const RunConfig& config) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig command(const std::string& name) {
  RunConfig c;
  c.command = name;
  return c;
}

struct CsvRow {
  double t;
  int l;
  int m;
  double modulus;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "t,entry_l,entry_m,re,im,modulus");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string t, l, m, re, im, mod;
    std::getline(fields, t, ',');
    std::getline(fields, l, ',');
    std::getline(fields, m, ',');
    std::getline(fields, re, ',');
    std::getline(fields, im, ',');
    std::getline(fields, mod, ',');
    rows.push_back({std::stod(t), std::stoi(l), std::stoi(m), std::stod(mod)});
  }
  return rows;
}

const std::string kModel = std::string(GAMOW_DATA_DIR) + "/r2_model.json";

std::string model_text(const std::string& laurent) {
  return R"({"E_R": 1.0, "Gamma": 1.0, "r": 2, "laurent": )" + laurent + R"(,
  "test_functions": [{"role": "ket", "num": [1], "poles": [[0, 2], [0, 2]]},
                     {"role": "bra", "num": [1], "poles": [[0, 3]]}]})";
}

}  // namespace

TEST_CASE("evolve W^(0) decays as exp(-Gamma t)") {
  RunConfig c = command("evolve");
  c.order = 1;
  c.t_end = 5.0;
  c.steps = 11;
  const Run r = run(c);
  REQUIRE(r.code == kExitOk);
  for (const auto& row : parse_csv(r.out)) CHECK(row.modulus == doctest::Approx(std::exp(-row.t)).epsilon(1e-14));
}

TEST_CASE("evolve W^(1) at r=2 is a pure exponential in every entry") {
  RunConfig c = command("evolve");
  c.order = 2;
  c.gamma = 0.7;
  c.op.n = 1;
  c.op.include_prefactor = true;
  const Run r = run(c);
  REQUIRE(r.code == kExitOk);
  for (const auto& row : parse_csv(r.out)) {
    const double at_zero = (row.l + row.m == 1) ? 0.7 : 0.0;
    CHECK(std::abs(row.modulus - at_zero * std::exp(-0.7 * row.t)) < 1e-14);
  }
}

TEST_CASE("evolve a single dyad peaks at t = 1/Gamma") {
  RunConfig c = command("evolve");
  c.order = 2;
  c.gamma = 2.0;
  c.op.kind = OperatorKind::Dyad;
  c.op.dyad = {1, 0};
  c.t_end = 2.0;
  c.steps = 201;
  const Run r = run(c);
  REQUIRE(r.code == kExitOk);
  double best_t = -1.0;
  double best = -1.0;
  for (const auto& row : parse_csv(r.out)) {
    if (row.l != 0 || row.m != 0) continue;
    CHECK(row.modulus == doctest::Approx(row.t * std::exp(-2.0 * row.t)).epsilon(1e-13));
    if (row.modulus > best) {
      best = row.modulus;
      best_t = row.t;
    }
  }
  CHECK(best_t == doctest::Approx(0.5));
}

TEST_CASE("evolve rejects invalid input with exit code 2") {
  RunConfig c = command("evolve");
  c.order = 2;
  c.op.n = 2;
  CHECK(run(c).code == kExitInputError);
  c.op.n = 0;
  c.gamma = -1.0;
  CHECK(run(c).code == kExitInputError);
  c.gamma = 1.0;
  c.steps = 1;
  CHECK(run(c).code == kExitInputError);
  c.steps = 5;
  c.t_end = 0.0;
  CHECK(run(c).code == kExitInputError);
  c.t_end = 1.0;
  c.order.reset();
  const Run missing = run(c);
  CHECK(missing.code == kExitInputError);
  CHECK(missing.err.find("--r") != std::string::npos);
}

TEST_CASE("evolve json output carries the exact time polynomials") {
  RunConfig c = command("evolve");
  c.order = 2;
  c.op.kind = OperatorKind::Dyad;
  c.op.dyad = {1, 0};
  c.format = OutputFormat::Json;
  c.steps = 2;
  const Run r = run(c);
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(r.out);
  CHECK_FALSE(doc.at("pure_exponential").get<bool>());
  CHECK(doc.at("samples").size() == 8);
  CHECK(doc.at("polynomials")[0].at("t_powers") == json::parse("[[0.0, 0.0], [0.0, -1.0]]"));
}

TEST_CASE("exp-check reports dimension and verdict") {
  RunConfig c = command("exp-check");
  c.order_bound = 4;
  Run r = run(c);
  REQUIRE(r.code == kExitOk);
  json doc = json::parse(r.out);
  CHECK(doc.at("solution_dimension") == 5);
  CHECK(doc.at("verdict") == "reproduced");

  c = command("exp-check");
  c.order = 2;
  r = run(c);
  REQUIRE(r.code == kExitOk);
  doc = json::parse(r.out);
  CHECK(doc.at("restriction").at("solution_dimension") == 2);
  REQUIRE(doc.at("basis").size() == 2);
  CHECK(doc.at("basis")[1].at("terms").size() == 2);

  c.order = 1;
  r = run(c);
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out).at("restriction").at("solution_dimension") == 1);

  c.order.reset();
  CHECK(run(c).code == kExitInputError);
  c.order = 2;
  c.format = OutputFormat::Csv;
  CHECK(run(c).code == kExitInputError);
}

TEST_CASE("basis command") {
  RunConfig c = command("basis");
  c.order = 3;
  const Run r = run(c);
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(r.out);
  REQUIRE(doc.at("basis").size() == 3);
  CHECK(doc.at("basis")[2].at("terms").size() == 3);
}

TEST_CASE("residue on the bundled model passes") {
  RunConfig c = command("residue");
  c.model_path = kModel;
  const Run r = run(c);
  CHECK(r.code == kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc.at("passed") == true);
  CHECK(doc.at("tolerance") == 1e-8);
  CHECK(doc.at("reports").size() == 2);
}

TEST_CASE("residue: a verification failure is exit code 1") {
  RunConfig c = command("residue");
  c.model_path = kModel;
  c.tolerance = 1e-300;
  const Run r = run(c);
  CHECK(r.code == kExitVerificationFailed);
  CHECK(json::parse(r.out).at("passed") == false);
}

TEST_CASE("model parsing") {
  const ModelDocument zero = parse_model_document(model_text("[0, 0]"));
  CHECK_FALSE(zero.model.has_pole());
  const auto report = decomposition_check(zero.model, zero.kets[0], zero.bras[0]);
  CHECK(report.residue == std::complex<double>(0.0));
  CHECK(report.direct == report.background);

  CHECK_THROWS_WITH_AS(parse_model_document(model_text("[[1, 0], [0, 0]]")),
                       doctest::Contains("a_{-r}"), InputError);
  CHECK_THROWS_WITH_AS(parse_model_document(model_text("[[1, 0], \"x\"]")), doctest::Contains("laurent[1]"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse_model_document("{\n  \"E_R\": 1.0,\n  \"Gamma\": ,\n}"), doctest::Contains("model:3:"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse_model_document(R"({"E_R": 1, "Gamma": 1, "r": 1, "laurent": [1],
      "test_functions": [{"role": "ket", "num": [1], "poles": [[0, -1]]}, {"role": "bra", "num": [1], "den": [1]}]})"),
                       doctest::Contains("test_functions[0]"), InputError);
  CHECK_THROWS_AS(parse_model_document(R"({"E_R": 1, "Gamma": 0, "r": 1, "laurent": [1], "test_functions": []})"),
                  InputError);
}

TEST_CASE("run config merging") {
  RunConfig base = command("evolve");
  const RunConfig merged = merge_run_config(base, R"({"E_R": 2.5, "Gamma": 0.25, "r": 3, "format": "json",
      "time_grid": {"t_start": 0, "t_end": 8, "steps": 17},
      "operator": {"kind": "table", "B": [[1, 0, [0, 1]], [0, 0, 0], [0, 0, 0]]}})");
  CHECK(merged.command == "evolve");
  CHECK(merged.energy == 2.5);
  CHECK(merged.gamma == 0.25);
  CHECK(merged.order == 3);
  CHECK(merged.format == OutputFormat::Json);
  CHECK(merged.t_end == 8.0);
  CHECK(merged.steps == 17);
  CHECK(merged.op.kind == OperatorKind::Table);
  CHECK(merged.op.b_table(0, 2) == std::complex<double>(0.0, 1.0));
  CHECK(run(merged).code == kExitOk);

  CHECK_THROWS_AS(merge_run_config(base, R"({"time_grid": {"t_start": 1}})"), InputError);
  CHECK_THROWS_AS(merge_run_config(base, R"({"operator": {"kind": "blob"}})"), InputError);
  CHECK_THROWS_AS(merge_run_config(base, R"({"r": 1.5})"), InputError);
  CHECK_THROWS_WITH_AS(merge_run_config(base, "{\"r\": }"), doctest::Contains("config:1:"), InputError);
}

TEST_CASE("identical configs give byte-identical output") {
  RunConfig c = command("evolve");
  c.order = 3;
  c.op.kind = OperatorKind::Dyad;
  c.op.dyad = {2, 1};
  c.energy = 0.3;
  c.gamma = 0.9;
  CHECK(run(c).out == run(c).out);

  RunConfig res = command("residue");
  res.model_path = kModel;
  CHECK(run(res).out == run(res).out);
}
