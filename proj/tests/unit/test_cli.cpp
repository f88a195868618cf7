#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/eval/report.hpp"

using linkwatch::read_text_file;
using linkwatch::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LINKWATCH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Workspace {
  TempDir dir;
  std::string root;

  Workspace() : root(dir.path().string()) {
    REQUIRE(run_cli("generate --seed 5 --benign 150 --malicious 150 --out " + root +
                    " --corpus " + root + "/corpus --fixtures " + root + "/fixtures") == 0);
  }
  std::string corpus_args() const {
    return "--corpus " + root + "/corpus --fixtures " + root + "/fixtures";
  }
};

const Workspace& workspace() {
  static const Workspace w;
  return w;
}

}  // namespace

TEST_CASE("generate writes a loadable corpus") {
  const Workspace& w = workspace();
  CHECK(fs::exists(fs::path(w.root) / "corpus" / "links.jsonl"));
  CHECK(fs::exists(fs::path(w.root) / "fixtures" / "probes.jsonl"));
  CHECK(linkwatch::load_corpus(fs::path(w.root) / "corpus").links.size() == 300);
}

TEST_CASE("probe reproduces the configured dead-domain fraction") {
  const Workspace& w = workspace();
  const std::string out = w.root + "/probe";
  REQUIRE(run_cli("probe " + w.corpus_args() + " --out " + out) == 0);
  const auto j = nlohmann::json::parse(read_text_file(out + "/probe.json"));
  const double n = j["domains_probed"].get<double>();
  REQUIRE(n > 0);
  CHECK(j["dead_fraction"].get<double>() * n == doctest::Approx(std::round(0.8306 * n)));
}

TEST_CASE("features, rank, train, eval chain") {
  const Workspace& w = workspace();
  const std::string out = w.root + "/chain";
  REQUIRE(run_cli("features " + w.corpus_args() + " --seed 3 --out " + out) == 0);
  CHECK(fs::exists(out + "/train.csv"));
  CHECK(fs::exists(out + "/test.csv"));

  REQUIRE(run_cli("rank --features " + out + "/features.csv --out " + out) == 0);
  const auto ranking = nlohmann::json::parse(read_text_file(out + "/ranking.json"));
  REQUIRE(ranking.size() == 7);
  for (std::size_t i = 1; i < ranking.size(); ++i)
    CHECK(ranking[i - 1]["information_gain"].get<double>() >= ranking[i]["information_gain"].get<double>());

  REQUIRE(run_cli("train --classifier RF --trees 10 --seed 3 --features " + out + "/train.csv --model " + out +
                  "/rf.json --out " + out) == 0);
  REQUIRE(run_cli("eval --features " + out + "/test.csv --model " + out + "/rf.json --out " + out) == 0);
  const auto eval = nlohmann::json::parse(read_text_file(out + "/eval.json"));
  CHECK(eval["classifiers"][0]["classifier"] == "Random Forest");
  CHECK(eval["classifiers"][0]["accuracy"].get<double>() > 0.5);

  REQUIRE(run_cli("crossval --classifier DT -k 4 --features " + out + "/train.csv --out " + out) == 0);
  CHECK(nlohmann::json::parse(read_text_file(out + "/crossval.json"))[0]["folds"].size() == 4);

  const std::string five = w.root + "/five";
  REQUIRE(run_cli("features " + w.corpus_args() + " --experiment FULL_NONCLICK_FEATURES --out " + five) == 0);
  CHECK(run_cli("eval --features " + five + "/features.csv --model " + out + "/rf.json --out " + five) == 3);
}

TEST_CASE("run is deterministic across job counts and report renders the table") {
  const Workspace& w = workspace();
  const std::string common = "run " + w.corpus_args() + " --seed 9 -k 3 --trees 10 --out ";
  REQUIRE(run_cli(common + w.root + "/run1 --jobs 1") == 0);
  REQUIRE(run_cli(common + w.root + "/run8 --jobs 8") == 0);
  CHECK(read_text_file(w.root + "/run1/report.json") == read_text_file(w.root + "/run8/report.json"));
  CHECK(read_text_file(w.root + "/run1/model.json") == read_text_file(w.root + "/run8/model.json"));

  REQUIRE(run_cli("report --report " + w.root + "/run1/report.json --out " + w.root + "/rendered") == 0);
  const std::string table = read_text_file(w.root + "/rendered/report.txt");
  CHECK(table == read_text_file(w.root + "/run1/report.txt"));
  for (const std::string& label : linkwatch::eval::metric_row_labels()) CHECK(table.find(label) != std::string::npos);
}

TEST_CASE("profile writes suspicion, timelines and overlap") {
  const Workspace& w = workspace();
  const std::string out = w.root + "/profile";
  REQUIRE(run_cli("profile --corpus " + w.root + "/corpus --out " + out) == 0);
  std::istringstream lines(read_text_file(out + "/suspicion.jsonl"));
  std::string line;
  int highly = 0;
  while (std::getline(lines, line))
    if (nlohmann::json::parse(line)["highly_suspicious"].get<bool>()) ++highly;
  CHECK(highly >= 5);
  CHECK(fs::exists(out + "/overlap.json"));
  int timelines = 0;
  for (const auto& e : fs::directory_iterator(out))
    if (e.path().filename().string().starts_with("timeline_")) ++timelines;
  CHECK(timelines > 0);
}

TEST_CASE("exit codes for bad inputs") {
  const Workspace& w = workspace();
  CHECK(run_cli("run --corpus " + w.root + "/absent --fixtures " + w.root + "/fixtures --out " + w.root +
                "/absent_out") == 2);
  CHECK(fs::exists(w.root + "/absent_out/error.json"));
  CHECK(run_cli("rank --features " + w.root + "/absent.csv") == 2);
  CHECK(run_cli("") != 0);
}
