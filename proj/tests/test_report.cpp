#include <doctest.h>

#include <cmath>

#include "carnot/report.hpp"

using namespace carnot;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double v : {1.0 / 3, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  const double row[3] = {1.0, 0.5, -3.0};
  CHECK(csv_row(row) == "1,0.5,-3");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("config is resolved and echoed first") {
  const RunResult r = run_command("rp-check", Json{{"group", "abelian-3"}, {"corpus", 3}, {"points", 2}, {"lambda", 0.5}});
  REQUIRE(r.report.begin().key() == "config");
  const Json& cfg = r.report["config"];
  CHECK(cfg["group"] == "abelian-3");
  CHECK(cfg["corpus"] == 3);
  CHECK(cfg["route"] == "exact");
  CHECK(cfg["max_degree"] == 6);
  CHECK(cfg["t"] == Json::array({0.25, 1.0, 4.0}));
  CHECK(r.report["summary"]["cases"] == 3 * 3 * 2);
  CHECK(r.report["certificates"].size() == 18);
  CHECK(r.verdict == Verdict::Pass);
  CHECK_FALSE(r.report.contains("lambda_computation"));
}

TEST_CASE("unknown options, commands and bad types are rejected") {
  CHECK(code_of([] { run_command("rp-check", Json{{"corpsu", 3}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { run_command("sing", Json::object()); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { run_command("bias", Json{{"t", "soon"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { run_command("bias", Json::array()); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { run_command("rp-check", Json{{"lambda", "guess"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { run_command("rp-check", Json{{"group", "engel"}, {"lambda", "computed"}}); }) ==
        ErrorCode::UnsupportedGroup);
  CHECK(code_of([] { run_command("lambda", Json{{"group", "no-such-group"}}); }) != ErrorCode::Io);
  CHECK(command_names().size() == 7);
}

TEST_CASE("a failing lambda is reported as a failing verdict") {
  const RunResult r = run_command("rp-check", Json{{"group", "abelian-2"}, {"corpus", 4}, {"points", 2}, {"lambda", 0.1}});
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.report["summary"]["passed"].get<int>() < r.report["summary"]["cases"].get<int>());
  CHECK(r.report["summary"]["min_slack"].get<double>() < 0.0);
}

TEST_CASE("engel falls back to the Q/2 bound") {
  const RunResult r = run_command("rp-check", Json{{"group", "engel"}, {"corpus", 3}, {"points", 2}, {"t", 1.0}});
  CHECK(r.verdict == Verdict::Pass);
  const Json& c = r.report["certificates"][0];
  CHECK(c["lambda"]["value"] == 3.5);
  CHECK(c["lambda"]["provenance"] == "paper-upper-bound Q/2");
}

TEST_CASE("lambda report layout") {
  const RunResult r = run_command("lambda", Json{{"group", "abelian-2"}, {"method", "quad"}});
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.report["lambda"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  for (const char* key : {"config", "group", "Q", "d", "M", "lambda", "top_vector", "trace", "trace_target", "bounds",
                          "errors", "diagnostics", "warnings"})
    CHECK(r.report.contains(key));
  CHECK(r.report["M"].size() == 2);
  CHECK(r.report["M"][0].size() == 2);
  CHECK(r.report["diagnostics"]["method"] == "quadrature");
}

TEST_CASE("identities, trace and isoperimetric reports") {
  const RunResult id = run_command("identities", Json{{"group", "heisenberg-1"}, {"corpus", 3}, {"max_degree", 4}});
  CHECK(id.verdict == Verdict::Pass);
  CHECK(id.report["residuals"]["kernel_pde"]["nodes"] == 375);
  CHECK(id.report["pass"] == true);

  const RunResult tr = run_command("trace-check", Json{{"group", "abelian-3"}, {"method", "quad"}, {"t", 2.0}});
  CHECK(tr.verdict == Verdict::Pass);

  const RunResult iso = run_command("iso-check", Json{{"cubes", Json::array({1.0})}, {"lambda", 1.0}});
  CHECK(iso.verdict == Verdict::Pass);
  CHECK(iso.report["certificates"].size() == 2);
  CHECK(iso.report["summary"]["dilation_invariant"] == true);
}

TEST_CASE("bias report flags the exact step-2 scheme") {
  const RunResult r =
      run_command("bias", Json{{"samples", 2000}, {"substeps", 4}, {"scheme", "exact-step2"}, {"t", 1.0}});
  // Exact increments still use the discrete area, so the bias is first order.
  CHECK(r.report["steps"] == Json::array({4, 8, 16}));
  CHECK(r.report.contains("ratio"));
  CHECK(r.verdict != Verdict::Fail);
  const RunResult flat = run_command("bias", Json{{"group", "abelian-2"}, {"samples", 2000}, {"substeps", 4}});
  CHECK(flat.report["exact_scheme"] == true);
  CHECK(flat.verdict == Verdict::Pass);
}

TEST_CASE("reports are byte-for-byte deterministic") {
  const Json cfg{{"group", "heisenberg-1"}, {"samples", 3000}, {"substeps", 50}, {"seed", 11}, {"threads", 2}};
  const std::string a = run_command("lambda", cfg).report.dump();
  Json other = cfg;
  other["threads"] = 1;
  Json ra = run_command("lambda", cfg).report;
  Json rb = run_command("lambda", other).report;
  CHECK(a == ra.dump());
  ra.erase("config");
  rb.erase("config");
  CHECK(ra.dump() == rb.dump());
}
