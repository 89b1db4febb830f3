#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "csdiag/io.hpp"
#include "csdiag/random.hpp"

using namespace csdiag;

namespace {

const std::string kCli = CSDIAG_CLI_PATH;

int run(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tmp_path(const std::string& name) {
  return "cli_tmp_" + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("spectrum of the identity") {
  const std::string mat = tmp_path("id3.txt");
  write_file(mat, "3\n1 0 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n");
  const std::string out = tmp_path("id3.json");
  REQUIRE(run("spectrum " + mat + " --output " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  REQUIRE(j["eigenvalues"].size() == 3);
  for (const auto& ev : j["eigenvalues"]) {
    CHECK(std::abs(ev["re"].get<double>() - 1.0) < 1e-14);
    CHECK(std::abs(ev["im"].get<double>()) < 1e-14);
  }
}

TEST_CASE("spectrum of [[0,i],[i,0]] is sorted [-i, +i]") {
  const std::string mat = tmp_path("anti.txt");
  write_file(mat, "2\n0 0 0 1\n0 1 0 0\n");
  const std::string out = tmp_path("anti.json");
  REQUIRE(run("spectrum " + mat + " --output " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  REQUIRE(j["eigenvalues"].size() == 2);
  CHECK(std::abs(j["eigenvalues"][0]["im"].get<double>() + 1.0) < 1e-12);
  CHECK(std::abs(j["eigenvalues"][1]["im"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("asymmetric input is rejected with exit code 2") {
  const std::string mat = tmp_path("asym.txt");
  write_file(mat, "2\n1 0 0.5 0\n0 0 1 0\n");
  CHECK(run("spectrum " + mat) == 2);
  CHECK(run("spectrum no_such_file.txt") == 2);
}

TEST_CASE("verify accepts fresh output and rejects tampered reports") {
  const auto a = random_symmetric<double>(8, 401);
  const std::string mat = tmp_path("rand8.txt");
  io::write_matrix_file(mat, a);
  const std::string rep = tmp_path("rand8.json");
  REQUIRE(run("spectrum " + mat + " --vectors --output " + rep) == 0);
  CHECK(run("verify " + mat + " " + rep) == 0);
  CHECK(run("verify " + mat + " " + rep + " --tol 0") == 1);

  auto j = nlohmann::json::parse(slurp(rep));
  j["eigenvalues"][0]["re"] = j["eigenvalues"][0]["re"].get<double>() + 0.5;
  const std::string bad = tmp_path("rand8_bad.json");
  write_file(bad, j.dump());
  CHECK(run("verify " + mat + " " + bad) == 1);
}

TEST_CASE("oscillator subcommand in the weak-coupling quartic limit") {
  const std::string out = tmp_path("quartic.json");
  REQUIRE(run("oscillator --model quartic --coupling 1e-12 --basis 8 "
              "--levels 3 --output " +
              out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  REQUIRE(j["eigenvalues"].size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(j["eigenvalues"][k]["re"].get<double>() - (k + 0.5)) <
          1e-9);
    CHECK(std::abs(j["eigenvalues"][k]["im"].get<double>()) < 1e-12);
  }
}

TEST_CASE("oscillator wavefunction samples") {
  const std::string out = tmp_path("wf.json");
  const std::string samples = tmp_path("wf.csv");
  REQUIRE(run("oscillator --model icubic --coupling 1 --basis 32 --levels 2 "
              "--output " +
              out + " --samples " + samples) == 0);
  std::istringstream lines(slurp(samples));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "state_index,x,re,im,modulus,phase");
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2 * 601);
}

TEST_CASE("bench output shape and seeded reproducibility") {
  const std::string o1 = tmp_path("bench1.csv");
  const std::string o2 = tmp_path("bench2.csv");
  REQUIRE(run("bench --sizes 20,40 --trials 1 --seed 7 --output " + o1) == 0);
  REQUIRE(run("bench --sizes 20,40 --trials 1 --seed 7 --output " + o2) == 0);
  const std::string t1 = slurp(o1);
  std::istringstream lines(t1);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "size,phase,median_seconds");
  int data_rows = 0;
  std::string digests1, digests2;
  while (std::getline(lines, line)) {
    if (line.rfind("# digest", 0) == 0)
      digests1 += line + "\n";
    else if (!line.empty() && line[0] != '#')
      ++data_rows;
  }
  CHECK(data_rows == 4);  // two sizes x two phases

  std::istringstream lines2(slurp(o2));
  while (std::getline(lines2, line))
    if (line.rfind("# digest", 0) == 0) digests2 += line + "\n";
  CHECK(digests1 == digests2);
  CHECK(!digests1.empty());
}

TEST_CASE("csv report format") {
  const std::string mat = tmp_path("csvfmt.txt");
  write_file(mat, "2\n1 0 0 1\n0 1 2 0\n");
  const std::string out = tmp_path("csvfmt.csv");
  REQUIRE(run("spectrum " + mat + " --format csv --output " + out) == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "index,re,im,sweeps");
}
