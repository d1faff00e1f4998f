#include <doctest.h>

#include <fstream>

#include "uvlag/report.hpp"

using namespace uvlag;

TEST_CASE("config validation") {
  RunConfig c;
  c.problems = {"P1", "P9"};
  auto errors = validate_config(c);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("P9") != std::string::npos);

  RunConfig c2;
  c2.all_problems = true;
  c2.eps = 0.6;
  c2.eps_bar = 0.5;
  errors = validate_config(c2);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("eps") != std::string::npos);

  RunConfig c3;
  c3.all_problems = true;
  c3.check = "no-such-check";
  errors = validate_config(c3);
  REQUIRE(errors.size() == 1);

  RunConfig c4;  // nothing selected
  errors = validate_config(c4);
  REQUIRE(errors.size() == 1);
}

TEST_CASE("single-check run produces a conforming record") {
  RunConfig c;
  c.problems = {"P1"};
  c.check = "ulag-core";
  c.samples = 500;
  const Report report = run(c);
  CHECK(report.exit_code == 0);
  std::string why;
  CHECK_MESSAGE(report_conforms(report.doc, &why), why);
  REQUIRE(report.doc["records"].size() == 1);
  const auto& rec = report.doc["records"][0];
  CHECK(rec["id"] == "ulag-core/P1");
  CHECK(rec["verdict"] == "pass");
  CHECK(rec["anchor"] == "Thm 3.6(i)");
  CHECK(rec["params"]["L0_gap"].get<double>() <= 1e-9);
}

TEST_CASE("expected-fail bracketing run exits zero") {
  RunConfig c;
  c.problems = {"P2"};
  c.check = "proxreg";
  c.rho = 0.5;
  c.samples = 4000;
  const Report report = run(c);
  CHECK(report.exit_code == 0);
  REQUIRE(report.doc["records"].size() == 1);
  const auto& rec = report.doc["records"][0];
  CHECK(rec["verdict"] == "fail");
  CHECK(rec["expected"] == "fail");
  const auto wxp = rec["witness"]["x_prime"].get<std::vector<double>>();
  CHECK(wxp[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wxp[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.doc["summary"]["expected_fail"] == 1);
  CHECK(report.doc["summary"]["fail"] == 0);
}

TEST_CASE("determinism: identical config gives byte-identical reports") {
  RunConfig c;
  c.problems = {"P1", "P5"};
  c.check = "all";
  c.samples = 300;
  c.seed = 3;
  const Report a = run(c);
  const Report b = run(c);
  CHECK(strip_wall_times(a.doc).dump() == strip_wall_times(b.doc).dump());
  // and a different seed still conforms
  RunConfig c2 = c;
  c2.seed = 4;
  const Report d = run(c2);
  std::string why;
  CHECK_MESSAGE(report_conforms(d.doc, &why), why);
}

TEST_CASE("the published schema file matches the emitted structure") {
  std::ifstream in(std::string(UVLAG_SOURCE_DIR) +
                   "/schemas/uvlag-report-1.schema.json");
  REQUIRE(in.good());
  json schema;
  in >> schema;
  CHECK(schema["title"] == "uvlag-report/1");
  const auto& required = schema["required"];
  for (const std::string key : {"schema", "config", "records", "summary"})
    CHECK(std::find(required.begin(), required.end(), json(key)) !=
          required.end());

  RunConfig c;
  c.problems = {"P4"};
  c.check = "uv-geometry";
  const Report report = run(c);
  std::string why;
  CHECK_MESSAGE(report_conforms(report.doc, &why), why);
  // every record field named by the schema is present
  const auto& rec_required = schema["properties"]["records"]["items"]["required"];
  for (const auto& rec : report.doc["records"])
    for (const auto& key : rec_required)
      CHECK(rec.contains(key.get<std::string>()));
}
