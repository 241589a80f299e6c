#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using pbpois::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pbpois_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with('#')) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("pmf of two fair coins") {
  const fs::path file = write_file("half.txt", "0.5\n0.5\n");
  const Result r = call({"pmf", "--input", file.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("# schema=1\n"));
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "k");
  CHECK(std::stod(rows[1][1]) == 0.25);
  CHECK(std::stod(rows[2][1]) == 0.5);
  CHECK(std::stod(rows[3][1]) == 0.25);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("pmf methods agree") {
  const Result dp = call({"pmf", "--family", "random-seeded:n=60,seed=3"});
  const auto a = csv_rows(dp.out);
  for (const char* method : {"dft", "contour"}) {
    const Result other = call({"pmf", "--family", "random-seeded:n=60,seed=3", "--method", method});
    REQUIRE(other.code == 0);
    const auto b = csv_rows(other.out);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(std::abs(std::stod(a[i][1]) - std::stod(b[i][1])) <= 1e-12);
  }
}

TEST_CASE("pmf input errors") {
  const fs::path bad = write_file("bad.txt", "1.2\n");
  const Result r = call({"pmf", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(":1:") != std::string::npos);
  CHECK(call({"pmf", "--family", "all-ones:n=4", "--method", "contour"}).code == 2);
  CHECK(call({"pmf", "--family", "equal:n=4,p=0.1", "--method", "magic"}).code == 2);
  CHECK(call({"pmf", "--family", "equal:n=4,p=0.1", "--input", bad.string()}).code == 2);
  CHECK(call({"pmf"}).code == 2);
  CHECK(call({"pmf", "--family", "equal:n=4,p=0.1", "--precision", "extended", "--digits", "10"}).code == 2);
}

TEST_CASE("divergence output") {
  const Result r = call({"divergence", "--family", "equal:n=1,p=0.5", "--alpha", "1,2"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("relative entropy") != std::string::npos);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < rows[0].size(); ++i) m[rows[0][i]] = rows[1][i];
  CHECK(std::stod(m["kl"]) == doctest::Approx(0.153426).epsilon(1e-5));
  CHECK(std::stod(m["chi2"]) == doctest::Approx(0.236541).epsilon(1e-5));
  CHECK(std::stod(m["tv"]) == doctest::Approx(0.393469).epsilon(1e-5));
  CHECK(m["renyi_1"] == m["kl"]);
  CHECK(m.count("truncation_tail_budget"));

  const auto zero = csv_rows(call({"divergence", "--family", "equal:n=5,p=0"}).out);
  for (std::size_t i = 0; i < zero[0].size(); ++i) {
    if (zero[0][i] == "tv" || zero[0][i] == "kl" || zero[0][i] == "chi2") CHECK(zero[1][i] == "0");
  }
  CHECK(call({"divergence", "--family", "equal:n=5,p=0.1", "--alpha", "0"}).code == 2);
  CHECK(call({"divergence", "--family", "equal:n=5,p=0.1", "--alpha", "x"}).code == 2);

  const Result j = call({"divergence", "--family", "all-ones:n=5", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["kl"].get<double>() == doctest::Approx(1.7403021806115442).epsilon(1e-12));
}

TEST_CASE("bounds output") {
  const Result r = call({"bounds", "--family", "equal:n=1,p=0.5"});
  CHECK(r.code == 0);
  bool found = false;
  for (const auto& row : csv_rows(r.out)) {
    if (row[0] == "barbour_hall.upper") {
      found = true;
      CHECK(std::abs(std::stod(row[5])) <= 1e-14);
    }
  }
  CHECK(found);

  for (const auto& row : csv_rows(call({"bounds", "--family", "all-ones:n=100"}).out)) {
    if (row[0].starts_with("zacharovas_hwang")) CHECK(row[2] == "false");
    if (row[0].starts_with("envelope")) CHECK(row[6] == "true");
  }
  const auto zero = csv_rows(call({"bounds", "--family", "equal:n=3,p=0"}).out);
  for (std::size_t i = 1; i < zero.size(); ++i) CHECK(zero[i][2] == "false");

  const Result cat = call({"bounds", "--catalog", "--format", "json"});
  CHECK(nlohmann::json::parse(cat.out).size() > 10);
}

TEST_CASE("sweep output is reproducible") {
  const std::vector<std::string> args = {"sweep", "--family", "equal:n=50,p=0.1", "--family", "random-seeded:n=12,seed=4",
                                         "--family", "equal:n=3,p=2"};
  const Result a = call(args), b = call(args);
  CHECK(a.code == 2);
  CHECK(a.out == b.out);
  const auto rows = csv_rows(a.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3].back().find("outside") != std::string::npos);
  CHECK(rows[2][3] == "4");

  const fs::path list = write_file("families.txt", "# two families\nequal:n=10,p=0.2\n\nall-ones:n=7\n");
  const fs::path dir1 = scratch("sweep1"), dir2 = scratch("sweep2");
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  CHECK(call({"sweep", "--input", list.string(), "--out", dir1.string()}).code == 0);
  CHECK(call({"sweep", "--input", list.string(), "--out", dir2.string()}).code == 0);
  for (const char* f : {"records.csv", "checks.csv", "ratios.csv", "constants.csv"}) {
    CAPTURE(f);
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  }
  CHECK(fs::exists(dir1 / "run_info.json"));
  CHECK(slurp(dir1 / "records.csv").find("started") == std::string::npos);

  const fs::path broken = write_file("broken.txt", "equal:n=10,p=0.2\nequal:n=,p=1\n");
  const Result e = call({"sweep", "--input", broken.string()});
  CHECK(e.code == 2);
  CHECK(e.err.find(":2:") != std::string::npos);
}

TEST_CASE("config file fills unset flags") {
  const fs::path cfg = write_file("cfg.json", R"({"family": "equal:n=1,p=0.5", "alpha": [2, 3], "format": "json"})");
  const Result r = call({"divergence", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["tsallis"].contains("3"));
  const Result csv = call({"divergence", "--config", cfg.string(), "--format", "csv"});
  CHECK(csv.out.starts_with("# schema=1"));
  const fs::path bad = write_file("cfg_bad.json", R"({"suite": "core"})");
  CHECK(call({"divergence", "--config", bad.string(), "--family", "equal:n=1,p=0.5"}).code == 2);
}

TEST_CASE("argument errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"verify", "--suite", "bogus"}).code == 2);
  CHECK(call({"pmf", "--family", "equal:n=2,p=0.5", "--format", "xml"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("verify structure suite") {
  const fs::path dir = scratch("verify_structure");
  fs::remove_all(dir);
  const Result r = call({"verify", "--suite", "structure", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("failures=0") != std::string::npos);
  CHECK(fs::exists(dir / "structure.csv"));
  CHECK(fs::exists(dir / "saddle.csv"));
}
