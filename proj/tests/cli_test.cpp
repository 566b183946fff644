#include "cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "jointmeas/io.hpp"

using namespace jointmeas;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "jointmeas");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(JOINTMEAS_TEST_DATA) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("jointmeas_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<std::vector<double>> read_csv(const std::string& path, std::string* header) {
  std::istringstream in(io::read_file(path));
  std::string line;
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_F(CliTest, validate_exit_codes) {
  EXPECT_EQ(run({"validate", data("trivial_half.json")}).code, 0);
  const CliRun bad = run({"validate", data("not_psd.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("negative eigenvalue"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(bad.out)["valid"], false);
  EXPECT_EQ(run({"validate", "--lenient", data("not_psd.json")}).code, 0);
  EXPECT_EQ(run({"validate", data("missing.json")}).code, 2);

  io::write_file(tmp("broken.json"), "{\"format_version\": \"1\",\n \"dim\": 2,,}");
  const CliRun broken = run({"validate", tmp("broken.json")});
  EXPECT_EQ(broken.code, 2);
  EXPECT_NE(broken.err.find("byte"), std::string::npos);
}

TEST_F(CliTest, usage_errors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"distance", "--metric", "l2", data("pvm_x.json"), data("pvm_z.json")}).code, 2);
  EXPECT_EQ(run({"bounds", "--inequality", "theorem1", data("pvm_x.json"), data("pvm_z.json")}).code, 2);
  EXPECT_EQ(run({"qubit-demo", "--theta", "2.0", "--grid", "10", "--out", tmp("c.csv")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, distance_writes_witness_state) {
  const CliRun r = run({"distance", "--metric", "inf", data("pvm_z.json"), data("pvm_x.json"), "--state-out",
                     tmp("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["value"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
  const State s = io::parse_state(io::read_file(tmp("w.json")));
  EXPECT_EQ(s.dim(), 2u);

  const CliRun l1 = run({"distance", "--metric", "l1", data("pvm_z.json"), data("pvm_x.json"), "--state-out", ""});
  ASSERT_EQ(l1.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(l1.out)["value"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(run({"distance", data("pvm_z.json"), data("not_psd.json")}).code, 1);
}

TEST_F(CliTest, bounds_cor_joint_reports_violation_with_exit_zero) {
  const CliRun r = run({"bounds", "--inequality", "cor-joint", data("noisy_x_072.json"), data("noisy_z_072.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "violated");
  EXPECT_NEAR(doc["lhs"].get<double>(), 0.1204, 1e-12);
  EXPECT_NEAR(doc["rhs"].get<double>(), 0.1296, 1e-12);
  EXPECT_NE(doc["note"].get<std::string>().find("not jointly measurable"), std::string::npos);
}

TEST_F(CliTest, bounds_with_joint_and_maps) {
  // Uninformative joint observable on two outcomes, mapped onto both targets.
  io::write_file(tmp("f.json"), R"({"format_version":"1","dim":2,"outcomes":["x","y"],
    "elements":{"x":[[0.5,0],[0,0],[0,0],[0.5,0]],"y":[[0.5,0],[0,0],[0,0],[0.5,0]]}})");
  io::write_file(tmp("fa.txt"), "x +\ny -\n");
  io::write_file(tmp("fb.txt"), "# second target\nx -\ny +\n");
  const CliRun r = run({"bounds", "--inequality", "theorem1", data("pvm_z.json"), data("pvm_x.json"), "--joint",
                     tmp("f.json"), "--map-a", tmp("fa.txt"), "--map-b", tmp("fb.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["X"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(doc["Y"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(doc["verdict"], "satisfied");

  const CliRun l1 = run({"bounds", "--inequality", "theorem2", data("pvm_z.json"), data("pvm_x.json"), "--joint",
                      tmp("f.json"), "--map-a", tmp("fa.txt"), "--map-b", tmp("fb.txt")});
  EXPECT_EQ(l1.code, 0);
  EXPECT_EQ(run({"bounds", "--inequality", "theorem1", data("pvm_z.json"), data("pvm_x.json"), "--joint",
                 tmp("f.json"), "--map-a", tmp("fa.txt")})
                .code,
            2);
  io::write_file(tmp("bad_map.txt"), "x +\nx -\n");
  EXPECT_EQ(run({"bounds", "--inequality", "theorem1", data("pvm_z.json"), data("pvm_x.json"), "--joint",
                 tmp("f.json"), "--map-a", tmp("bad_map.txt"), "--map-b", tmp("fb.txt")})
                .code,
            1);
}

TEST_F(CliTest, check_joint_writes_revalidating_witness) {
  const CliRun r = run({"check-joint", data("noisy_x_070.json"), data("noisy_z_070.json"), "--witness-out",
                     tmp("joint.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "feasible");
  EXPECT_EQ(run({"validate", tmp("joint.json")}).code, 0);

  // The witness uses product labels, so bounds can infer the coordinate maps.
  const CliRun b = run({"bounds", "--inequality", "theorem1", data("noisy_x_070.json"), data("noisy_z_070.json"),
                     "--joint", tmp("joint.json")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_LT(nlohmann::json::parse(b.out)["X"].get<double>(), 1e-6);

  const CliRun no = run({"check-joint", data("noisy_x_072.json"), data("noisy_z_072.json"), "--witness-out",
                      tmp("none.json")});
  ASSERT_EQ(no.code, 0);
  EXPECT_EQ(nlohmann::json::parse(no.out)["status"], "infeasible");
  EXPECT_FALSE(fs::exists(tmp("none.json")));
}

TEST_F(CliTest, qubit_demo_curves) {
  const CliRun r = run({"qubit-demo", "--theta", "1.5707963", "--grid", "100", "--out", tmp("curves.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = read_csv(tmp("curves.csv"), &header);
  EXPECT_EQ(header, "X,Y_cor1,Y_heinosaari");
  ASSERT_EQ(rows.size(), 100u);
  // Interpolate the crossing of curve 1 with the diagonal X = Y.
  double crossing = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double g0 = rows[i - 1][1] - rows[i - 1][0];
    const double g1 = rows[i][1] - rows[i][0];
    if (g0 >= 0 && g1 < 0) {
      const double t = g0 / (g0 - g1);
      crossing = rows[i - 1][0] + t * (rows[i][0] - rows[i - 1][0]);
    }
  }
  EXPECT_NEAR(crossing, (std::sqrt(10.0) - 3.0) / 2.0, 1e-4);

  ASSERT_EQ(run({"qubit-demo", "--theta", "1.5707963", "--grid", "100", "--out", tmp("again.csv")}).code, 0);
  EXPECT_EQ(io::read_file(tmp("curves.csv")), io::read_file(tmp("again.csv")));
}

TEST_F(CliTest, frontier_csv) {
  const CliRun r = run({"frontier", data("pvm_z.json"), data("pvm_x.json"), "--grid", "3", "--out", tmp("f.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = read_csv(tmp("f.csv"), &header);
  EXPECT_EQ(header, "X_target,X_achieved,Y_achieved");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[2][0], 0.5, 1e-12);
  EXPECT_GE(rows[0][2], rows[2][2]);
}

TEST_F(CliTest, selftest_small) {
  const CliRun r = run({"selftest", "--trials", "20", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("theorem1: 20 trials, 0 violations"), std::string::npos);
}
