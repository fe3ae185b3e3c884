#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RECAGE_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

// Everything except '#'-prefixed comment lines (the manifest).
std::string data_section(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::istringstream in(data_section(text));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("exact tables print the known small values") {
  const auto res = run_cli("exact --beta 1 --k 1 --quantity p --n-max 2");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_rows(res.out);
  REQUIRE(rows.size() == 4);  // header + 3 rows
  CHECK(rows[0] == std::vector<std::string>{"n", "value"});
  CHECK(rows[1] == std::vector<std::string>{"0", "1"});
  CHECK(rows[2] == std::vector<std::string>{"1", "0.5"});
  CHECK(rows[3] == std::vector<std::string>{"2", "0.625"});
  CHECK(res.out.rfind("#manifest {", 0) == 0);
}

TEST_CASE("constants emit the published leading value and row schema") {
  const auto res = run_cli("constants --family p --beta 1 --k-max 6");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_rows(res.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"family", "beta", "k", "value",
                                            "abs_err_bound"});
  CHECK(rows[1][0] == "p");
  CHECK(rows[1][1] == "1");
  CHECK(rows[1][2] == "1");
  CHECK(std::abs(std::stod(rows[1][3]) - 0.62651) <= 2e-5);
}

TEST_CASE("the divergent constant is marked, not computed") {
  const auto res = run_cli("constants --family C --beta 2 --k-max 2");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_rows(res.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][3] == "divergent");
  CHECK(std::abs(std::stod(rows[2][3]) - 0.18685) <= 2e-5);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("constants --family p --beta 4").exit_code == 1);
  CHECK(run_cli("constants --beta 1").exit_code == 1);  // family missing
  CHECK(run_cli("nonsense").exit_code == 1);
  CHECK(run_cli("exact --beta 1 --n-max 4 --quantity X").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // subcommand required
  // a quantity that is divergent for every horizon is a usage error
  CHECK(run_cli("exact --beta 2 --k 1 --quantity EL --n-max 4").exit_code ==
        1);
}

TEST_CASE("resource ceilings exit with code 3") {
  CHECK(run_cli("exact --beta 1 --k 1 --quantity p --n-max 3000").exit_code ==
        3);
  CHECK(run_cli("crp-check --n 11 --mode exact").exit_code == 3);
  // raising the ceiling explicitly is honored
  const auto res =
      run_cli("exact --beta 1 --k 1 --quantity p --n-max 96 --ceiling 96");
  CHECK(res.exit_code == 0);
}

TEST_CASE("simulate reruns are byte-identical across thread counts") {
  const std::string base =
      "simulate --dist gaussian --n 50 --replicas 2000 --seed 7 --k-max 3";
  const auto a = run_cli(base + " --threads 1");
  const auto b = run_cli(base + " --threads 3");
  const auto c = run_cli(base + " --threads 1");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(data_section(a.out) == data_section(b.out));
  CHECK(data_section(a.out) == data_section(c.out));
  // schema: statistic,k,beta,mean,std_error,count with 2 * 3 * 3 rows
  const auto rows = parse_rows(a.out);
  REQUIRE(rows.size() == 1 + 2 * 3 * 3);
  CHECK(rows[0] == std::vector<std::string>{"statistic", "k", "beta", "mean",
                                            "std_error", "count"});
  CHECK(rows[1][0] == "rank_probability");
  // a different seed changes the data
  const auto d = run_cli(
      "simulate --dist gaussian --n 50 --replicas 2000 --seed 8 --k-max 3");
  CHECK(data_section(a.out) != data_section(d.out));
}

TEST_CASE("the straddling-interval mean-age row is nan by design") {
  const auto res = run_cli(
      "simulate --dist renewal --n 20 --replicas 500 --seed 3 --k-max 2");
  REQUIRE(res.exit_code == 0);
  bool found = false;
  for (const auto& row : parse_rows(res.out)) {
    if (row.size() == 6 && row[0] == "mean_ratio" && row[1] == "1" &&
        row[2] == "2") {
      CHECK(row[3] == "nan");
      CHECK(row[5] == "500");
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("restaurant check emits matching probability columns") {
  const auto res = run_cli("crp-check --n 2 --mode exact");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_rows(res.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"partition", "p_crp", "p_renewal",
                                            "abs_diff"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(rows[i][2]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(rows[i][3]) < 1e-10);
  }
  const auto sampled =
      run_cli("crp-check --n 4 --mode sample --replicas 5000 --seed 2");
  CHECK(sampled.exit_code == 0);
  const auto sampled_rows = parse_rows(sampled.out);
  for (std::size_t i = 1; i < sampled_rows.size(); ++i) {
    CHECK(std::stod(sampled_rows[i][3]) < 0.05);
  }
}

TEST_CASE("stick-breaking summary is deterministic") {
  const std::string base = "pd --replicas 3000 --depth 12 --seed 9 --k-max 3";
  const auto a = run_cli(base + " --threads 2");
  const auto b = run_cli(base + " --threads 5");
  REQUIRE(a.exit_code == 0);
  CHECK(data_section(a.out) == data_section(b.out));
  const auto rows = parse_rows(a.out);
  REQUIRE(rows.size() == 5);  // header + 3 ranked + residual
  CHECK(rows[0] == std::vector<std::string>{"statistic", "k", "mean",
                                            "std_error", "count"});
  CHECK(rows[4][0] == "residual");
  // depth-12 residual keeps mean 1/13
  CHECK(std::stod(rows[4][2]) == doctest::Approx(1.0 / 13.0).epsilon(0.15));
}

TEST_CASE("transform diagnostics report the expected ratio columns") {
  const auto res = run_cli(
      "laplace --beta 1 --k 1 --quantity p --s 0.05 --s 0.1 --n-max 512");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_rows(res.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        std::vector<std::string>{"s", "empirical_sum", "predicted", "ratio"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][3]);
    CHECK(ratio > 0.7);
    CHECK(ratio < 1.3);
  }
  // the divergent expectation cannot be requested
  CHECK(run_cli("laplace --beta 2 --k 1 --quantity EL --s 0.1 --n-max 64")
            .exit_code == 1);
}

TEST_CASE("json format wraps the same rows with the manifest") {
  const auto res = run_cli(
      "exact --beta 3 --k 1 --quantity p --n-max 2 --format json");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("\"manifest\"") != std::string::npos);
  CHECK(res.out.find("\"rows\"") != std::string::npos);
  CHECK(res.out.find("\"command\": \"exact\"") != std::string::npos);
  CHECK(res.out.find("\"0.5\"") != std::string::npos);
}

TEST_CASE("output to a file leaves standard output clean") {
  const std::string path = "/tmp/recage_cli_test_out.csv";
  std::remove(path.c_str());
  const auto res = run_cli("exact --beta 1 --k 1 --quantity p --n-max 2 --out " +
                           path);
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream content;
  content << in.rdbuf();
  CHECK(data_section(content.str()) ==
        data_section(run_cli("exact --beta 1 --k 1 --quantity p --n-max 2")
                         .out));
  std::remove(path.c_str());
}
