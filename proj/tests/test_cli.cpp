#include <array>
#include <cstdio>
#include <string>

#include <catch2/catch_amalgamated.hpp>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(ITL_BINARY) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string data(const std::string& rel) { return std::string(ITL_SOURCE_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("parse subcommand") {
  auto r = run("parse \"p -> q -> r\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("implies") != std::string::npos);
  // right association: q -> r nested under the top implication
  CHECK(r.output.find("p -> q -> r") != std::string::npos);

  CHECK(run("parse \"p ->\"").exit_code == 1);
  CHECK(run("parse \"p -> q <-> r\"").exit_code == 1);
}

TEST_CASE("model checking subcommand") {
  std::string model = data("data/models/three.mod");
  auto r = run("mc --model " + model + " --formula \"(X p -> X q) -> X (p -> q)\" --world x");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("at x: false") != std::string::npos);

  CHECK(run("mc --model " + model + " --formula \"p -> p\"").exit_code == 0);
  CHECK(run("mc --model " + model + " --formula \"p\" --world z").exit_code == 0);
  CHECK(run("mc --model " + model + " --formula \"p\" --world nosuch").exit_code == 1);
  CHECK(run("mc --model /nonexistent.mod --formula p").exit_code == 1);
}

TEST_CASE("decide subcommand exit codes") {
  auto falsifiable = run("decide --formula \"(X p -> X q) -> X (p -> q)\"");
  CHECK(falsifiable.exit_code == 2);
  CHECK(falsifiable.output.find("falsifiable") != std::string::npos);

  CHECK(run("decide --formula \"p -> p\"").exit_code == 0);
  CHECK(run("decide --formula \"p & ~p\" --mode sat").exit_code == 2);
  CHECK(run("decide --formula \"F p\" --mode sat").exit_code == 0);
  CHECK(run("decide --formula \"G p\"").exit_code == 1);

  auto witness = run("decide --formula \"F p -> p\" --witness /tmp/itl_witness_test.out");
  CHECK(witness.exit_code == 2);
  auto check = run("sim --frame /tmp/itl_witness_test.out --world m0");
  CHECK(check.exit_code == 0);
}

TEST_CASE("irr subcommand") {
  auto stats = run("irr --sigma-of \"p\" --stats");
  CHECK(stats.exit_code == 0);
  CHECK(stats.output.find("moments: 3") != std::string::npos);
  CHECK(stats.output.find("tower bound: 16") != std::string::npos);

  auto dump = run("irr --sigma-of \"F p\"");
  CHECK(dump.exit_code == 0);
  CHECK(dump.output.find("sigma p ; F p") != std::string::npos);

  auto trees = run("irr --sigma-of \"p\" --trees");
  CHECK(trees.output.find("# tree m0") != std::string::npos);
}

TEST_CASE("check-proof subcommand") {
  CHECK(run("check-proof " + data("data/proofs/diam_fix.prf")).exit_code == 0);
  CHECK(run("check-proof " + data("data/proofs/next_conj.prf")).exit_code == 0);
  CHECK(run("check-proof /nonexistent.prf").exit_code == 1);

  // a well-formed but wrong proof is a negative outcome, not an error
  std::string tmp = "/tmp/itl_bad_proof.prf";
  std::FILE* f = std::fopen(tmp.c_str(), "w");
  REQUIRE(f);
  std::fputs("1 A1 p | ~p\n", f);
  std::fclose(f);
  auto r = run("check-proof " + tmp);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("rejected at line 1") != std::string::npos);
}

TEST_CASE("oracle subcommand") {
  auto hit = run("oracle --formula \"F p\" --max 1");
  CHECK(hit.exit_code == 0);
  CHECK(hit.output.find("1-world quasimodel") != std::string::npos);

  CHECK(run("oracle --formula \"p -> p\" --max 3").exit_code == 2);
}

TEST_CASE("sim subcommand") {
  std::string frame = "/tmp/itl_sim_frame.mod";
  std::FILE* f = std::fopen(frame.c_str(), "w");
  REQUIRE(f);
  std::fputs("sigma p\nworld a\nworld b\norder a b\nlabel- a p\nlabel+ b p\n", f);
  std::fclose(f);
  auto r = run("sim --frame " + frame + " --world a");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("true -> p | (p -> false)") != std::string::npos);
  auto s = run("sim --frame " + frame + " --world a --simplify");
  CHECK(s.output.find("p | (p -> false)") != std::string::npos);
  CHECK(run("sim --frame " + frame + " --world zz").exit_code == 1);
}

TEST_CASE("json envelopes and determinism") {
  auto a = run("--json decide --formula \"F p -> p\"");
  auto b = run("--json decide --formula \"F p -> p\"");
  CHECK(a.exit_code == 2);
  CHECK(a.output == b.output);  // byte-identical reports
  CHECK(a.output.find("\"status\": \"falsifiable\"") != std::string::npos);

  auto p = run("--json parse \"X p\"");
  CHECK(p.output.find("\"op\": \"next\"") != std::string::npos);

  auto irr1 = run("--json irr --sigma-of \"F p\"");
  auto irr2 = run("--json irr --sigma-of \"F p\"");
  CHECK(irr1.output == irr2.output);
  CHECK(irr1.output.find("\"moments\": 8") != std::string::npos);

  auto mc = run("--json mc --model " + data("data/models/three.mod") + " --formula \"X p\"");
  CHECK(mc.output.find("\"x\": false") != std::string::npos);
  CHECK(mc.output.find("\"z\": false") != std::string::npos);
}
