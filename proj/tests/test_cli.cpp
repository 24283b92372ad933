#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trisat/bench.hpp"
#include "trisat/constraint_graph.hpp"
#include "trisat/sat_core.hpp"

using namespace trisat;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "trisat-cli-test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run cli(const std::string& args) {
  fs::path err = work_dir() / "stderr.txt";
  std::string command = std::string("'") + TRISAT_CLI + "' " + args + " 2>'" + err.string() + "'";
  Run run;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) run.out.append(buffer, got);
  int status = pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.err = slurp(err);
  return run;
}

fs::path write_cnf(const std::string& name, const std::string& text) {
  fs::path path = work_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("generate balanced example") {
  Run r = cli("generate --kind balanced -k 3 -n 6 -m 4 --seed 1");
  REQUIRE(r.exit_code == 0);
  Instance inst = parse_dimacs(r.out);
  CHECK(inst.clause_count() == 4);
  std::vector<int> counts(7, 0);
  for (const Clause& c : inst.clauses())
    for (const Literal& l : c) ++counts[l.var];
  for (Var v = 1; v <= 6; ++v) CHECK(counts[v] == 2);
  CHECK(r.err.find("seed=1") != std::string::npos);
}

TEST_CASE("generate to a file is reproducible and parseable") {
  fs::path a = work_dir() / "a.cnf";
  fs::path b = work_dir() / "b.cnf";
  Run ra = cli("generate --kind no-triangle -k 3 -n 200 -m 800 --seed 9 -o " + quoted(a));
  Run rb = cli("generate --kind no-triangle -k 3 -n 200 -m 800 --seed 9 -o " + quoted(b));
  REQUIRE(ra.exit_code == 0);
  CHECK(ra.out == rb.out);
  CHECK(ra.out.find("cluster coefficient") != std::string::npos);
  CHECK(slurp(a) == slurp(b));
  Instance inst = read_dimacs_file(a.string());
  CHECK(inst.variable_count() == 200);
  CHECK(inst.clause_count() == 800);
  CHECK(slurp(a) == write_dimacs(generate({3, 200, 800, 9, GenKind::no_triangle})));
}

TEST_CASE("generate comment and random seed") {
  Run r = cli("generate -k 3 -n 10 -m 5 --seed 3 --comment");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("c generator=random k=3 n=10 m=5 seed=3\np cnf 10 5\n", 0) == 0);

  r = cli("generate -k 3 -n 10 -m 5 --seed random");
  REQUIRE(r.exit_code == 0);
  auto pos = r.err.find("seed: ");
  REQUIRE(pos != std::string::npos);
  std::string seed = r.err.substr(pos + 6, r.err.find('\n', pos) - pos - 6);
  CHECK(cli("generate -k 3 -n 10 -m 5 --seed " + seed).out == r.out);
}

TEST_CASE("usage errors exit with 1") {
  Run r = cli("generate -k 5 -n 3 -m 1 --seed 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("n must be >= k") != std::string::npos);
  CHECK(cli("generate --kind sgen -n 3 -m 1 --seed 1").exit_code == 1);
  CHECK(cli("generate -n 3 -m 1 --seed x").exit_code == 1);
  CHECK(cli("generate -n 3 -m 1").exit_code == 1);
  CHECK(cli("").exit_code == 1);
  CHECK(cli("frobnicate").exit_code == 1);
  CHECK(cli("bench -n 20 --seed 1").exit_code == 1);
  CHECK(cli("bench -n 20 --m-values 60 --runs 0 --seed 1").exit_code == 1);
  CHECK(cli("bench -n 20 --m-values 60 --solver external --seed 1").exit_code == 1);
  CHECK(cli("bench -n 20 --m-values 60 --solver magic --seed 1").exit_code == 1);
}

TEST_CASE("runtime errors exit with 2") {
  Run r = cli("stats /nonexistent.cnf");
  CHECK(r.exit_code == 2);
  fs::path bad = write_cnf("bad.cnf", "p cnf 2 1\n1 5 0\n");
  r = cli("stats " + quoted(bad));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(cli("solve " + quoted(bad)).exit_code == 2);
}

TEST_CASE("stats examples") {
  fs::path clause = write_cnf("clause.cnf", "p cnf 3 1\n1 2 3 0\n");
  Run r = cli("stats " + quoted(clause));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out ==
        "variables: 3\nclauses: 1\narity: 3\nrepeated pairs: 0\ntriangles: 1\n"
        "incomplete triangles: 0\ncluster coefficient: 1.000000\naverage distance: 1.000000\n");

  fs::path path = write_cnf("path.cnf", "p cnf 3 2\n1 2 0\n2 3 0\n");
  r = cli("stats --json " + quoted(path));
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["triangles"] == 0);
  CHECK(j["incomplete_triangles"] == 1);
  CHECK(j["arity"] == 2);
  CHECK(j["average_distance"].get<double>() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("stats of a generated no-triangle instance") {
  fs::path file = work_dir() / "nt175.cnf";
  REQUIRE(cli("generate --kind no-triangle -n 175 -m 525 --seed 2 -o " + quoted(file)).exit_code == 0);
  Run r = cli("stats --json " + quoted(file));
  REQUIRE(r.exit_code == 0);
  double cc = nlohmann::json::parse(r.out)["cluster_coefficient"].get<double>();
  CHECK(cc >= 0.05);
  CHECK(cc <= 0.08);
}

TEST_CASE("solve exit codes and output") {
  fs::path unit = write_cnf("unit.cnf", "p cnf 1 1\n1 0\n");
  Run r = cli("solve " + quoted(unit));
  CHECK(r.exit_code == 10);
  CHECK(r.out.find("s SATISFIABLE\n") == 0);
  CHECK(r.out.find("decisions: 0") != std::string::npos);

  fs::path conflict = write_cnf("conflict.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  r = cli("solve --json " + quoted(conflict));
  CHECK(r.exit_code == 20);
  CHECK(nlohmann::json::parse(r.out)["status"] == "unsat");

  fs::path two = write_cnf("two.cnf", "p cnf 3 2\n-1 0\n1 2 3 0\n");
  r = cli("solve --model " + quoted(two));
  CHECK(r.exit_code == 10);
  CHECK(r.out.find("\nv -1 2 3 0\n") != std::string::npos);

  fs::path hard = work_dir() / "hard.cnf";
  REQUIRE(cli("generate --kind balanced -n 150 -m 640 --seed 1 -o " + quoted(hard)).exit_code == 0);
  r = cli("solve --max-decisions 5 " + quoted(hard));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("s UNKNOWN\nc decisions: 5\n") == 0);
}

TEST_CASE("bench over one point and aggregate idempotence") {
  fs::path out = work_dir() / "one.csv";
  fs::path records = work_dir() / "records.csv";
  Run r = cli("bench --kind balanced -n 20 --m-values 80 --runs 2 --seed 7 --out " + quoted(out) +
                 " --records " + quoted(records));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("balanced: peak mean decisions") == 0);
  std::string csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind(std::string(kAggregateHeader) + "\n80,2,", 0) == 0);

  Run agg = cli("aggregate " + quoted(records));
  REQUIRE(agg.exit_code == 0);
  CHECK(agg.out == csv);
}

TEST_CASE("bench with several kinds writes one aggregate per kind") {
  fs::path out = work_dir() / "sweep.csv";
  fs::path series = work_dir() / "series.csv";
  fs::path records = work_dir() / "all.csv";
  std::string args = "bench --kind all -n 20 --m-from 60 --m-to 100 --step 20 --runs 3 --seed 5 --out " +
                     quoted(out) + " --series " + quoted(series) + " --records " + quoted(records);
  Run one = cli(args + " --workers 1");
  REQUIRE(one.exit_code == 0);
  std::string serial_records = slurp(records);
  std::string serial_nt = slurp(work_dir() / "sweep.no-triangle.csv");
  Run four = cli(args + " --workers 4");
  REQUIRE(four.exit_code == 0);
  CHECK(four.out == one.out);
  CHECK(slurp(records) == serial_records);
  CHECK(slurp(work_dir() / "sweep.no-triangle.csv") == serial_nt);

  for (const char* kind : {"random", "balanced", "no-triangle"}) {
    fs::path file = work_dir() / (std::string("sweep.") + kind + ".csv");
    REQUIRE(fs::exists(file));
    std::string text = slurp(file);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    Run agg = cli("aggregate --kind " + std::string(kind) + " " + quoted(records));
    CHECK(agg.out == text);
  }
  std::string s = slurp(series);
  CHECK(s.rfind("kind,m,mean_decisions\nrandom,60,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 10);
  // Mixed kinds cannot be aggregated together.
  CHECK(cli("aggregate " + quoted(records)).exit_code == 2);
}

TEST_CASE("bench with an external solver") {
  fs::path internal = work_dir() / "internal.csv";
  fs::path external = work_dir() / "external.csv";
  std::string common = "bench --kind no-triangle -n 20 --m-values 70,90 --runs 2 --seed 3 --out ";
  REQUIRE(cli(common + quoted(internal)).exit_code == 0);
  Run r = cli(common + quoted(external) + " --solver external --solver-cmd \"'" + TRISAT_CLI +
                 "' solve {cnf}\"");
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(internal) == slurp(external));

  fs::path failing = work_dir() / "failing.csv";
  r = cli(common + quoted(failing) + " --with-exclusions --solver external --solver-cmd '/nonexistent {cnf}'");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("4 run(s) failed") != std::string::npos);
  CHECK(slurp(failing).find("\n70,0,0,0,0,0,0,0,0,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0,2\n") !=
        std::string::npos);
}
