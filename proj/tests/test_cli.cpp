#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "distclust/assignment.hpp"
#include "distclust/cli.hpp"
#include "distclust/io.hpp"

using namespace distclust;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("nmi of a labels file with itself") {
  TempDir dir("distclust_cli_nmi");
  write_text(dir / "a.json", R"({"k": 2, "labels": [0, 0, 1, 1]})");
  const Run r = cli({"nmi", dir / "a.json", dir / "a.json"});
  CHECK(r.code == 0);
  CHECK(r.out == "1.0\n");
}

TEST_CASE("usage and data errors") {
  TempDir dir("distclust_cli_errors");
  CHECK(cli({}).code == 1);
  CHECK(cli({"cluster", "--k", "2"}).code == 1);          // no input
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"nmi", dir / "missing.json", dir / "missing.json"}).code == 1);
  CHECK(cli({"--help"}).code == 0);

  write_text(dir / "bad.json", R"({"k": 2})");
  const Run bad = cli({"nmi", dir / "bad.json", dir / "bad.json"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("SchemaError") != std::string::npos);

  write_text(dir / "groups.csv", "object_id,sample_index,x_0\na,0,not-a-number\n");
  CHECK(cli({"estimate", "--groups", dir / "groups.csv"}).code == 2);
}

TEST_CASE("synth, cluster and nmi end to end") {
  TempDir dir("distclust_cli_e2e");
  const std::string bench = dir / "bench";
  REQUIRE(cli({"synth", "--d", "7", "--k", "5", "--seed", "42", "--out", bench}).code == 0);
  const std::string labels = dir / "labels.json";
  REQUIRE(cli({"cluster", "--groups", bench + "/groups.csv", "--algorithm", "klpp", "--k", "5", "--seed", "42",
               "--out", labels})
              .code == 0);

  const fs::path golden = fs::path(DISTCLUST_TEST_DATA) / "golden_synth42_klpp_labels.json";
  CHECK(assignment_from_json(read_json(labels)) == assignment_from_json(read_json(golden)));
  const Run r = cli({"nmi", bench + "/truth.json", labels});
  CHECK(r.code == 0);
  CHECK(r.out == "1.0\n");

  SUBCASE("ignored sigma warns") {
    const Run w = cli({"cluster", "--groups", bench + "/groups.csv", "--algorithm", "kl", "--k", "5", "--sigma", "2"});
    CHECK(w.code == 0);
    CHECK(w.err.find("warning: sigma ignored for kl") != std::string::npos);
    CHECK(assignment_from_json(nlohmann::json::parse(w.out)).size() == 200);
  }
  SUBCASE("estimate, distmat and cluster from a distance matrix") {
    REQUIRE(cli({"estimate", "--groups", bench + "/groups.csv", "--out", dir / "models.json"}).code == 0);
    const nlohmann::json models = read_json(dir / "models.json");
    CHECK(models.size() == 200);
    CHECK(models[0].at("mean").size() == 7);
    CHECK(models[0].at("cov").size() == 7);

    REQUIRE(cli({"distmat", "--models", dir / "models.json", "--metric", "bhattacharyya", "--out",
                 dir / "x.json"})
                .code == 0);
    const nlohmann::json x = read_json(dir / "x.json");
    CHECK(x.at("metric") == "bhattacharyya");
    CHECK(x.at("n") == 200);

    const Run csv = cli({"distmat", "--models", dir / "models.json", "--metric", "kl", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') >= 200);

    REQUIRE(cli({"cluster", "--distmat", dir / "x.json", "--algorithm", "bhattacharyya_spectral", "--k", "5",
                 "--out", dir / "spec.json"})
                .code == 0);
    const Run score = cli({"nmi", bench + "/truth.json", dir / "spec.json"});
    CHECK(std::stod(score.out) >= 0.8);
  }
}

TEST_CASE("bench commands write reports") {
  TempDir dir("distclust_cli_bench");
  const Run s = cli({"bench-synth", "--trials", "1", "--n-objects", "20", "--algorithms", "kl,kmeans_means",
                     "--out-dir", dir / "synth"});
  CHECK(s.code == 0);
  CHECK(read_json(dir / "synth/report.json").at("cells").size() == 2);

  const std::string csv = (fs::path(DISTCLUST_TEST_DATA) / "stock_fixture_40.csv").string();
  const Run k = cli({"--threads", "2", "bench-stock", "--csv", csv, "--trials", "1", "--sigma-list", "1",
                     "--algorithms", "klpp", "--out-dir", dir / "stock"});
  CHECK(k.code == 0);
  CHECK(fs::exists(dir / "stock/stock_nmi.csv"));
  CHECK(cli({"bench-stock", "--csv", csv, "--k-list", "1", "--out-dir", dir / "bad"}).code == 1);
}
