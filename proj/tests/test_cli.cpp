#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "testutil.hpp"
#include "swbin/io.hpp"

#ifndef SWBIN_CLI_PATH
#error "SWBIN_CLI_PATH must be defined by the build"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SWBIN_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, got);
  int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

fs::path scratch_dir() {
  auto d = fs::temp_directory_path() / "swbin-cli-tests";
  fs::create_directories(d);
  return d;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  auto p = scratch_dir() / name;
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p.string();
}

const char* kDsbsJson = R"({
  "alphabet_x": ["0", "1"],
  "alphabet_y": ["0", "1"],
  "p": [[0.45, 0.05], [0.05, 0.45]]
})";

const char* kMismatchJson = R"({
  "alphabet_x": ["0", "1"],
  "alphabet_y": ["0", "1"],
  "p": [[0.45, 0.05], [0.05, 0.45]],
  "p_tilde": [[0.4, 0.1], [0.1, 0.4]]
})";

const char* kHarmonicJson = R"({
  "closed_form": "harmonic",
  "kappa": 2.0,
  "a": 1.0
})";

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("no subcommand or unknown flags exit with code 2") {
  CHECK(run("").status == 2);
  CHECK(run("--bogus").status == 2);
  CHECK(run("classify --temperature 1.0").status == 2);  // missing --rate
  auto bad = run("classify --rate -0.1 --temperature 1.0 --source x.json");
  CHECK(bad.status == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").status == 0);
  CHECK(run("simulate --help").status == 0);
}

TEST_CASE("missing source file is an operational error (exit 1)") {
  auto r = run("spectrum --source /nonexistent/path.json");
  CHECK(r.status == 1);
  CHECK(r.out.find("path.json") != std::string::npos);
}

TEST_CASE("spectrum: CSV table with header, deterministic") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto a = run("spectrum --source " + src);
  CHECK(a.status == 0);
  CHECK(a.out.rfind("alpha,epsilon,entropy\n", 0) == 0);
  CHECK(count_lines(a.out) > 100);
  auto b = run("spectrum --source " + src);
  CHECK(a.out == b.out);
  // Other spectra kinds parse too.
  CHECK(run("spectrum --source " + src + " --kind joint").status == 0);
  CHECK(run("spectrum --source " + src + " --kind nonsense").status == 2);
}

TEST_CASE("spectrum: closed-form config emits a table") {
  auto src = write_scratch("harmonic.json", kHarmonicJson);
  auto r = run("spectrum --source " + src);
  CHECK(r.status == 0);
  CHECK(r.out.rfind("alpha,epsilon,entropy\n", 0) == 0);
  CHECK(count_lines(r.out) > 100);
}

TEST_CASE("phase: boundary CSV sorted by curve then rate") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("phase --source " + src + " --grid 64");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("curve_id,R,T\n", 0) == 0);
  CHECK(r.out.find("ferro_glassy") != std::string::npos);
  CHECK(r.out.find("ferro_para") != std::string::npos);
  CHECK(r.out.find("para_glassy") != std::string::npos);
  // Identical reruns.
  CHECK(run("phase --source " + src + " --grid 64").out == r.out);
  // Universal and mismatched decoders work; mismatched needs p_tilde.
  CHECK(run("phase --source " + src + " --decoder universal").status == 0);
  CHECK(run("phase --source " + src + " --decoder mismatched").status == 1);
  auto mm = write_scratch("mm.json", kMismatchJson);
  CHECK(run("phase --source " + mm + " --decoder mismatched").status == 0);
}

TEST_CASE("classify: labels a point") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("classify --source " + src + " --rate 0.5 --temperature 1.0");
  CHECK(r.status == 0);
  CHECK(r.out.find("ferromagnetic") != std::string::npos);
  auto g = run("classify --source " + src + " --rate 0.2 --temperature 0.3");
  CHECK(g.status == 0);
  CHECK(g.out.find("glassy") != std::string::npos);
}

TEST_CASE("exponent: single evaluation and sweep CSV") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("exponent --source " + src + " --rate 0.55 --beta 1");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("R,beta,E,phase\n", 0) == 0);
  CHECK(count_lines(r.out) == 2);
  auto w = run("exponent --source " + src + " --rate 0.55 --beta inf");
  CHECK(w.status == 0);
  auto sweep = run("exponent --source " + src +
                   " --sweep rate=0.4:0.6:3,beta=1:2:2");
  CHECK(sweep.status == 0);
  CHECK(count_lines(sweep.out) == 1 + 3 * 2);
  CHECK(run("exponent --source " + src + " --rate 0.5 --beta 1 " +
            "--metric mce").status == 0);
}

TEST_CASE("simulate: JSON report round-trips") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("simulate --source " + src +
               " --n 6 --rate 0.45 --beta 1 --trials 500 --seed 7");
  CHECK(r.status == 0);
  auto rep = swbin::sim_report_from_json(r.out);
  CHECK(rep.trials == 500);
  CHECK(rep.n == 6);
  CHECK(rep.seed == 7);
  CHECK(rep.ber >= 0.0);
  CHECK(rep.ber <= 1.0);
  CHECK(rep.ci_low <= rep.ber);
  CHECK(rep.ci_high >= rep.ber);
  // Parse -> emit -> parse is the identity on the emitted text.
  CHECK(swbin::sim_report_to_json(rep) == r.out);
  // Byte-identical rerun.
  CHECK(run("simulate --source " + src +
            " --n 6 --rate 0.45 --beta 1 --trials 500 --seed 7")
            .out == r.out);
  CHECK(run("simulate --source " + src + " --n 40 --trials 10").status == 1);
}

TEST_CASE("dilution: JSON report round-trips") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("dilution --source " + src +
               " --n 10 --rate 0.1 --betas 0.5:2:4 --realizations 4 --seed 3");
  CHECK(r.status == 0);
  auto rep = swbin::dilution_report_from_json(r.out);
  CHECK(rep.points.size() == 4);
  CHECK(rep.n == 10);
  CHECK(swbin::dilution_report_to_json(rep) == r.out);
}

TEST_CASE("two-sided: dominance and reliability JSON") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto r = run("two-sided --source " + src +
               " --rate-x 0.5 --rate-y 0.6 --beta 1");
  CHECK(r.status == 0);
  CHECK(r.out.find("\"dominant\"") != std::string::npos);
  CHECK(r.out.find("cc") != std::string::npos);
  auto bad = run("two-sided --source " + src +
                 " --rate-x 0.5 --rate-y 0.6 --beta 1.5");
  CHECK(bad.status == 1);  // beta above 1 is rejected by the model
}

TEST_CASE("output files are written when --out is given") {
  auto src = write_scratch("dsbs.json", kDsbsJson);
  auto out = (scratch_dir() / "table.csv").string();
  auto r = run("spectrum --source " + src + " --out " + out);
  CHECK(r.status == 0);
  CHECK(swbin::read_file(out).rfind("alpha,epsilon,entropy\n", 0) == 0);
}
