#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "prfair_cli_test";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(REWIRE_BIN) + " " + args + " >" +
                          (kDir / "stdout.txt").string() + " 2>" +
                          (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Setup {
  Setup() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
    std::ofstream graph(kDir / "triangle.txt");
    graph << "0 1\n1 2\n2 0\n";
    std::ofstream group(kDir / "group.txt");
    group << "2\n";
  }
} setup_once;

}  // namespace

TEST_CASE("audit reports the group mass") {
  const int code = run_cli("--algo audit --graph " + (kDir / "triangle.txt").string() +
                           " --group " + (kDir / "group.txt").string() + " --out-report " +
                           (kDir / "audit.json").string() + " --out-nodes " +
                           (kDir / "nodes.csv").string());
  REQUIRE(code == 0);
  const auto j = nlohmann::json::parse(slurp(kDir / "audit.json"));
  CHECK(j["pi_S"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(j["r_S"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_FALSE(j["unfair"].get<bool>());  // symmetric cycle sits exactly at phi
  CHECK(j["config"]["algo"] == "audit");
  const std::string nodes = slurp(kDir / "nodes.csv");
  CHECK(nodes.rfind("node,label,organic_mass,in_group", 0) == 0);
}

TEST_CASE("eps/delta resolve to the Hoeffding sample count in the manifest") {
  const int code = run_cli("--algo fast --graph " + (kDir / "triangle.txt").string() +
                           " --group " + (kDir / "group.txt").string() +
                           " --alpha 0.15 --budget 1 --eps 0.05 --delta 0.01 --seed 3" +
                           " --out-plan " + (kDir / "plan.csv").string() + " --out-summary " +
                           (kDir / "summary.json").string());
  REQUIRE(code == 0);
  const auto j = nlohmann::json::parse(slurp(kDir / "summary.json"));
  CHECK(j["params"]["psi"].get<long>() == 1060);
  CHECK(j["config"]["psi"].get<long>() == 1060);
  CHECK(j["config"]["eps"].get<double>() == doctest::Approx(0.05));
  CHECK(j["algorithm"] == "fast");
}

TEST_CASE("identical config and seed give byte-identical plan CSVs") {
  const std::string base = "--algo fast --graph " + (kDir / "triangle.txt").string() +
                           " --group " + (kDir / "group.txt").string() +
                           " --budget 3 --psi 500 --seed 99 --workers 2";
  REQUIRE(run_cli(base + " --out-plan " + (kDir / "a.csv").string() + " --out-summary " +
                  (kDir / "a.json").string()) == 0);
  REQUIRE(run_cli(base + " --out-plan " + (kDir / "b.csv").string() + " --out-summary " +
                  (kDir / "b.json").string()) == 0);
  CHECK(slurp(kDir / "a.csv") == slurp(kDir / "b.csv"));
  CHECK(slurp(kDir / "a.csv").rfind("step,i,j,k,gain,fairness_after,psi,seed,k_size", 0) == 0);
  // Label mapping is emitted next to the plan.
  CHECK(fs::exists(kDir / "a.csv.labels.csv"));
  CHECK(slurp(kDir / "a.csv.labels.csv").rfind("id,label", 0) == 0);
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run_cli("--algo fastv --graph " + (kDir / "triangle.txt").string() + " --group " +
                (kDir / "group.txt").string() + " --psi 10 --seed 1") == 2);  // missing source
  CHECK(run_cli("--algo fast --graph " + (kDir / "triangle.txt").string() + " --group " +
                (kDir / "group.txt").string() +
                " --psi 10 --eps 0.1 --delta 0.1 --seed 1") == 2);  // psi and eps together
  CHECK(run_cli("--algo exact --graph " + (kDir / "triangle.txt").string() + " --group " +
                (kDir / "group.txt").string() + " --alpha 1.5") == 2);
  CHECK(run_cli("--algo nonsense --graph x --group y") == 2);
}

TEST_CASE("data errors exit with code 3") {
  CHECK(run_cli("--algo audit --graph " + (kDir / "missing.txt").string() + " --group " +
                (kDir / "group.txt").string()) == 3);
  std::ofstream bad(kDir / "bad.txt");
  bad << "0 1\n1 0 zig\n";
  bad.close();
  CHECK(run_cli("--algo audit --graph " + (kDir / "bad.txt").string() + " --group " +
                (kDir / "group.txt").string()) == 3);
}

TEST_CASE("algorithm errors exit with code 4") {
  std::ofstream complete(kDir / "complete.txt");
  complete << "0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n";
  complete.close();
  std::ofstream group(kDir / "cgroup.txt");
  group << "0\n";
  group.close();
  CHECK(run_cli("--algo exact --graph " + (kDir / "complete.txt").string() + " --group " +
                (kDir / "cgroup.txt").string() + " --budget 1") == 4);
}

TEST_CASE("exactv emits organic fairness fields") {
  const int code = run_cli("--algo exactv --graph " + (kDir / "triangle.txt").string() +
                           " --group " + (kDir / "group.txt").string() +
                           " --budget 1 --source 0 --out-plan " + (kDir / "v.csv").string() +
                           " --out-summary " + (kDir / "v.json").string());
  REQUIRE(code == 0);
  const auto j = nlohmann::json::parse(slurp(kDir / "v.json"));
  CHECK(j.contains("organic_initial"));
  CHECK(j.contains("organic_final"));
  CHECK(j["config"]["source"] == "0");
  CHECK(j["config"]["source_index"] == 0);
}

TEST_CASE("sample-debug emits per-node root frequencies") {
  const int code = run_cli("--algo sample-debug --graph " + (kDir / "triangle.txt").string() +
                           " --psi 4000 --seed 7 --out-report " + (kDir / "hist.csv").string());
  REQUIRE(code == 0);
  std::ifstream in(kDir / "hist.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "node,root,count,frequency");
  double freq_node0 = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    if (field != "0") continue;
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    freq_node0 += std::stod(field);
  }
  CHECK(freq_node0 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the echoed config reconstructs the run") {
  const std::string first = "--algo fast --graph " + (kDir / "triangle.txt").string() +
                            " --group " + (kDir / "group.txt").string() +
                            " --budget 2 --psi 300 --seed 4 --alpha 0.2 --workers 2";
  REQUIRE(run_cli(first + " --out-plan " + (kDir / "rt1.csv").string() + " --out-summary " +
                  (kDir / "rt1.json").string()) == 0);
  const auto cfg = nlohmann::json::parse(slurp(kDir / "rt1.json"))["config"];
  std::ostringstream rebuilt;
  rebuilt << "--algo " << cfg["algo"].get<std::string>() << " --graph "
          << cfg["graph"].get<std::string>() << " --group " << cfg["group"].get<std::string>()
          << " --budget " << cfg["budget"].get<int>() << " --psi " << cfg["psi"].get<long>()
          << " --seed " << cfg["seed"].get<unsigned long>() << " --alpha "
          << cfg["alpha"].get<double>() << " --workers " << cfg["workers"].get<int>()
          << " --dense-cap " << cfg["dense_cap"].get<long>() << " --trajectory "
          << cfg["trajectory"].get<std::string>();
  REQUIRE(run_cli(rebuilt.str() + " --out-plan " + (kDir / "rt2.csv").string() +
                  " --out-summary " + (kDir / "rt2.json").string()) == 0);
  CHECK(slurp(kDir / "rt1.csv") == slurp(kDir / "rt2.csv"));
}

TEST_CASE("experiment mode drives the runner end to end") {
  nlohmann::json cfg{{"graph", (kDir / "triangle.txt").string()},
                     {"group", (kDir / "group.txt").string()},
                     {"budget", 1},
                     {"psi", 500},
                     {"seed", 2},
                     {"algorithms", {"exact"}},
                     {"output_dir", (kDir / "exp").string()}};
  std::ofstream out(kDir / "exp.json");
  out << cfg.dump();
  out.close();
  REQUIRE(run_cli("--experiment " + (kDir / "exp.json").string()) == 0);
  CHECK(fs::exists(kDir / "exp" / "results.csv"));
  CHECK(fs::exists(kDir / "exp" / "manifest.json"));
}
