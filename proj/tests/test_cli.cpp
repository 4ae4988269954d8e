#include <fstream>

#include "doctest.h"
#include "partact/cli.hpp"

using namespace partact;

namespace {

std::string data_path(const std::string& name) { return std::string(PARTACT_DATA_DIR) + "/" + name; }

nlohmann::ordered_json strip_timing(nlohmann::ordered_json j) {
  j.erase("wall_ms");
  return j;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("verify-action on the shipped worked example passes") {
  RunResult r = run_command("verify-action", data_path("ex_pair_action.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["pass"] == true);
  CHECK(r.report["dimensions"]["ring"] == 4);
  CHECK(r.report["is_global"] == false);
}

TEST_CASE("an empty groupoid is a schema error with exit 2") {
  RunResult r = run_command("verify-action", data_path("bad_empty.pa"), {});
  CHECK(r.exit_code == kSchema);
  CHECK(r.report.contains("error"));
}

TEST_CASE("a missing file is a schema error") {
  RunResult r = run_command("verify-action", data_path("no_such_file.pa"), {});
  CHECK(r.exit_code == kSchema);
}

TEST_CASE("an unknown command is a schema error") {
  RunResult r = run_command("frobnicate", data_path("ex_pair_action.pa"), {});
  CHECK(r.exit_code == kSchema);
}

TEST_CASE("crossed-product reports dimension 6 with a unit") {
  RunResult r = run_command("crossed-product", data_path("ex_pair_action.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["dimensions"]["crossed_product"] == 6);
  CHECK(r.report["has_unit"] == true);
}

TEST_CASE("globalize passes with the corrected star reading") {
  CliOptions opt;
  opt.out_path = std::string(PARTACT_BINARY_DIR) + "/emitted_global.pa";
  RunResult r = run_command("globalize", data_path("ex_pair_globalization.pa"), opt);
  CHECK(r.exit_code == kPass);
  CHECK(r.report["star_reading"] == "corrected");
  CHECK(r.report["dimensions"]["function_space"] == 16);

  SUBCASE("the emitted global action file verifies as a global action") {
    RunResult r2 = run_command("verify-action", opt.out_path, {});
    CHECK(r2.exit_code == kPass);
    CHECK(r2.report["is_global"] == true);
  }
}

TEST_CASE("globalize accepts the extension data from a separate file") {
  CliOptions opt;
  opt.extension_path = data_path("ex_pair_extension.pa");
  RunResult r = run_command("globalize", data_path("ex_pair_action.pa"), opt);
  CHECK(r.exit_code == kPass);
  CHECK(r.report["dimensions"]["enveloping_ring"] == 6);

  SUBCASE("a field mismatch between the two files is a schema error") {
    CliOptions bad;
    bad.extension_path = data_path("ex_pair_extension.pa");
    RunResult r2 = run_command("globalize", data_path("ex_pair_action_f3.pa"), bad);
    CHECK(r2.exit_code == kSchema);
  }
}

TEST_CASE("globalize --star-literal records the literal reading and its failure") {
  CliOptions opt;
  opt.star_literal = true;
  RunResult r = run_command("globalize", data_path("ex_pair_globalization.pa"), opt);
  CHECK(r.exit_code == kMathFail);
  CHECK(r.report["star_reading"] == "literal");
  bool found = false;
  for (auto& rep : r.report["reports"])
    for (auto& c : rep["checks"])
      if (c["name"] == "star" && c["pass"] == false) found = true;
  CHECK(found);
}

TEST_CASE("morita-check passes on the worked example") {
  RunResult r = run_command("morita-check", data_path("ex_pair_globalization.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["dimensions"]["A"] == 6);
}

TEST_CASE("exel emits the six standard forms and the ideal lattice") {
  RunResult r = run_command("exel", data_path("schur_pair_f2.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["element_count"] == 6);
  CHECK(r.report["ideal_lattice"].size() == 5);
}

TEST_CASE("schur enumerates pm over F2") {
  RunResult r = run_command("schur", data_path("schur_pair_f2.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["dimensions"]["factor_sets"] == 5);
  CHECK(r.report["dimensions"]["components"] == 5);
}

TEST_CASE("schur trips the capacity guard on an oversized groupoid") {
  std::string path = std::string(PARTACT_BINARY_DIR) + "/big_groupoid.pa";
  {
    std::ofstream out(path);
    out << "field F2\n\n[groupoid]\narrows";
    Groupoid big = Groupoid::disjoint_union(Groupoid::pair_groupoid(2), Groupoid::trivial());
    for (auto& l : big.labels()) out << " " << l;
    out << "\n";
    for (int x = 0; x < big.size(); ++x)
      if (x <= big.inv(x)) out << "inv " << big.label(x) << " " << big.label(big.inv(x)) << "\n";
    for (int x = 0; x < big.size(); ++x)
      for (int y = 0; y < big.size(); ++y)
        if (big.composable(x, y))
          out << "mul " << big.label(x) << " " << big.label(y) << " " << big.label(big.compose(x, y)) << "\n";
  }
  RunResult r = run_command("schur", path, {});
  CHECK(r.exit_code == kCapacity);
  CHECK(r.report["error_kind"] == "capacity");
}

TEST_CASE("cocycle-check accepts the identically-1 factor set") {
  RunResult r = run_command("cocycle-check", data_path("cocycle_trivial.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["declared_idempotent"] == true);
}

TEST_CASE("semigroup-action and roundtrip run over F3") {
  RunResult r = run_command("semigroup-action", data_path("ex_pair_action_f3.pa"), {});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["dimensions"]["semigroup"] == 81);
  CHECK(r.report["dimensions"]["crossed_product"] == 21);

  RunResult r2 = run_command("roundtrip", data_path("ex_pair_action_f3.pa"), {});
  CHECK(r2.exit_code == kPass);

  SUBCASE("rational inputs are rejected with a clear error") {
    RunResult r3 = run_command("roundtrip", data_path("ex_pair_action.pa"), {});
    CHECK(r3.exit_code == kSchema);
    CHECK(std::string(r3.report["error"]).find("prime field") != std::string::npos);
  }
}

TEST_CASE("reports are byte-identical across runs modulo timing") {
  CliOptions opt;
  opt.seed = 7;
  RunResult a = run_command("verify-action", data_path("ex_pair_action.pa"), opt);
  RunResult b = run_command("verify-action", data_path("ex_pair_action.pa"), opt);
  CHECK(strip_timing(a.report).dump() == strip_timing(b.report).dump());
  CHECK(a.report["seed"] == 7);
  CHECK(a.report["input_digest"] == b.report["input_digest"]);
}

TEST_CASE("a mathematical failure exits 1 and carries a replayable witness") {
  std::string path = std::string(PARTACT_BINARY_DIR) + "/mutated_action.pa";
  {
    std::ifstream in(data_path("ex_pair_action.pa"));
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto at = text.find("twist g- g -1*e3");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("twist g- g -1*e3").size(), "twist g- g 1*e3");
    std::ofstream out(path);
    out << text;
  }
  RunResult r = run_command("verify-action", path, {});
  CHECK(r.exit_code == kMathFail);
  bool witnessed = false;
  for (auto& rep : r.report["reports"])
    for (auto& c : rep["checks"])
      if (c["name"] == "vi" && c.contains("witnesses"))
        witnessed = c["witnesses"][0]["where"] == nlohmann::ordered_json::array({"g", "g-", "g"});
  CHECK(witnessed);
}

TEST_SUITE_END();
