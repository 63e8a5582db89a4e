#include <fstream>
#include <iostream>
#include <sstream>

#include "artic/cli.hpp"
#include "artic/dataset.hpp"
#include "artic/evaluate.hpp"
#include "artic/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace artic;

namespace {

const std::filesystem::path kDir = testsup::scratch_dir("cli");

/// Redirects std::cout for the lifetime of the object.
struct CaptureStdout {
  std::ostringstream ss;
  std::streambuf* old = std::cout.rdbuf(ss.rdbuf());
  ~CaptureStdout() { std::cout.rdbuf(old); }
  std::string text() const { return ss.str(); }
};

/// Planar fixture at z = 1 with parts 1 and 2 under the default intrinsics.
struct InferFixture {
  std::filesystem::path depth_path, seg_path, flow_path;

  explicit InferFixture(const std::string& tag, const Vec3& flow_step) {
    const int w = 80, h = 60;
    DepthImage depth(w, h);
    SegImage seg(w, h);
    FlowImage flow(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        depth(x, y) = 1.0f;
        seg(x, y) = x < 16 ? 1 : 2;
        if (x >= 16) flow.set(x, y, flow_step);
      }
    depth_path = kDir / (tag + "-depth.pfm");
    seg_path = kDir / (tag + "-seg.pgm");
    flow_path = kDir / (tag + "-flow.pfm");
    write_pfm(depth_path, depth);
    write_pgm16(seg_path, seg);
    write_pfm(flow_path, flow);
  }

  std::vector<std::string> args() const {
    return {"infer",    "--depth",  depth_path.string(), "--seg", seg_path.string(),
            "--flow",   flow_path.string(), "--part-a", "1",     "--part-b", "2"};
  }
};

}  // namespace

TEST_CASE("bare invocations and parse failures exit with code 2") {
  CaptureStdout cap;
  CHECK(cli::run({}) == 2);
  CHECK(cli::run({"frobnicate"}) == 2);
  CHECK(cli::run({"generate"}) == 2);  // --out is required
  CHECK(cli::run({"infer", "--depth"}) == 2);
}

TEST_CASE("help exits zero and lists the subcommands") {
  CaptureStdout cap;
  CHECK(cli::run({"--help"}) == 0);
  const std::string text = cap.text();
  CHECK(text.find("generate") != std::string::npos);
  CHECK(text.find("infer") != std::string::npos);
  CHECK(text.find("evaluate") != std::string::npos);
  CHECK(text.find("sweep-noise") != std::string::npos);
}

TEST_CASE("generate writes a dataset and reports the scene count") {
  const auto out = kDir / "gen";
  CaptureStdout cap;
  const int rc = cli::run({"generate", "--out", out.string(), "--num-scenes", "2", "--seed",
                           "9", "--category", "door"});
  CHECK(rc == 0);
  CHECK(cap.text().find("wrote 2 scenes") != std::string::npos);
  CHECK(std::filesystem::exists(out / "manifest.json"));
  CHECK(std::filesystem::exists(out / "scene-0000" / "depth.pfm"));
  CHECK(std::filesystem::exists(out / "scene-0001" / "meta.json"));
}

TEST_CASE("infer classifies a sliding pair from files") {
  const InferFixture fix("slide", {0.15, 0.0, 0.0});
  CaptureStdout cap;
  REQUIRE(cli::run(fix.args()) == 0);
  const Json j = Json::parse(cap.text());
  CHECK(j.at("kind").get<std::string>() == "prismatic");
  CHECK(j.at("direction").at(0).get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j.at("diagnostics").at("mean_flow_norm").get<double>() ==
        doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("infer writes its report to a file when asked") {
  const InferFixture fix("slide-out", {0.0, 0.12, 0.0});
  auto args = fix.args();
  const auto out = kDir / "estimate.json";
  args.push_back("--out");
  args.push_back(out.string());
  CaptureStdout cap;
  REQUIRE(cli::run(args) == 0);
  CHECK(cap.text().empty());
  const Json j = load_json(out);
  CHECK(j.at("kind").get<std::string>() == "prismatic");
  CHECK(j.at("direction").at(1).get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("infer reports a still pair as fixed") {
  const InferFixture fix("still", {0.0, 0.0, 0.0});
  CaptureStdout cap;
  REQUIRE(cli::run(fix.args()) == 0);
  const Json j = Json::parse(cap.text());
  CHECK(j.at("kind").get<std::string>() == "fixed");
  CHECK(!j.contains("axis"));
  CHECK(!j.contains("direction"));
}

TEST_CASE("infer respects the connectivity gate") {
  const InferFixture fix("cold", {0.15, 0.0, 0.0});
  auto args = fix.args();
  args.push_back("--prob");
  args.push_back("0.2");
  CaptureStdout cap;
  REQUIRE(cli::run(args) == 0);
  const Json j = Json::parse(cap.text());
  CHECK(j.at("kind").get<std::string>() == "unconnected");
}

TEST_CASE("infer maps failure classes onto distinct exit codes") {
  const InferFixture fix("errs", {0.15, 0.0, 0.0});

  // Malformed raster: parse error.
  const auto bad = kDir / "bad.pfm";
  std::ofstream(bad) << "this is not a pfm";
  auto args = fix.args();
  args[2] = bad.string();
  CaptureStdout cap;
  CHECK(cli::run(args) == 2);

  // Unknown part id: missing entity.
  args = fix.args();
  args[9] = "--part-b";
  args[10] = "9";
  CHECK(cli::run(args) == 3);

  // Mismatched raster shapes.
  DepthImage tiny(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) tiny(x, y) = 1.0f;
  const auto tiny_path = kDir / "tiny.pfm";
  write_pfm(tiny_path, tiny);
  args = fix.args();
  args[2] = tiny_path.string();
  CHECK(cli::run(args) == 4);
}

TEST_CASE("evaluate scores a dataset and writes the report bundle") {
  const auto data = kDir / "eval-data";
  {
    CaptureStdout cap;
    REQUIRE(cli::run({"generate", "--out", data.string(), "--num-scenes", "2", "--seed",
                      "31", "--category", "mixed"}) == 0);
  }
  const auto out = kDir / "eval-out";
  CaptureStdout cap;
  const int rc = cli::run({"evaluate", "--dataset", data.string(), "--oracle", "--out-dir",
                           out.string()});
  REQUIRE(rc == 0);
  CHECK(cap.text().find("Avg") != std::string::npos);
  CHECK(std::filesystem::exists(out / "report.json"));
  CHECK(std::filesystem::exists(out / "table.txt"));
  CHECK(std::filesystem::exists(out / "curves.csv"));
  const Json report = load_json(out / "report.json");
  CHECK(report.at("report").at("average").at("ca").get<double>() == doctest::Approx(100.0));
  CHECK(testsup::slurp(out / "table.txt") == cap.text());

  // The curves file has the documented columns and row count.
  std::istringstream csv(testsup::slurp(out / "curves.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "metric,threshold,fraction");
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 30);
}

TEST_CASE("evaluate rejects oracle and predictions together") {
  CaptureStdout cap;
  CHECK(cli::run({"evaluate", "--dataset", (kDir / "eval-data").string(), "--oracle",
                  "--predictions", (kDir / "nowhere").string()}) == 2);
}

TEST_CASE("evaluate surfaces incomplete predictions as exit code 4") {
  const auto data = kDir / "eval-data";  // written above
  REQUIRE(std::filesystem::exists(data / "manifest.json"));
  const Manifest manifest = load_manifest(data);
  const auto preds = kDir / "eval-empty-preds";
  for (const auto& name : manifest.scenes) {
    std::filesystem::create_directories(preds / name);
    Json j;
    j["pairs"] = Json::array();
    save_json(preds / name / "predictions.json", j);
  }
  CaptureStdout cap;
  CHECK(cli::run({"evaluate", "--dataset", data.string(), "--predictions", preds.string()}) ==
        4);
}

TEST_CASE("sweep-noise emits one row per value anchored at the clean score") {
  const auto data = kDir / "eval-data";  // written above
  REQUIRE(std::filesystem::exists(data / "manifest.json"));
  const auto out = kDir / "sweep.csv";
  {
    CaptureStdout cap;
    REQUIRE(cli::run({"sweep-noise", "--dataset", data.string(), "--param", "depth_sigma",
                      "--values", "0,0.003", "--out", out.string()}) == 0);
  }

  std::istringstream csv(testsup::slurp(out));
  std::string header, row0, row1, extra;
  REQUIRE(std::getline(csv, header));
  REQUIRE(std::getline(csv, row0));
  REQUIRE(std::getline(csv, row1));
  CHECK(!std::getline(csv, extra));
  CHECK(header ==
        "param,value,at,pc,ca,rev_angle_mean_rad,rev_dist_mean_m,prism_angle_mean_rad,pairs");
  CHECK(row0.rfind("depth_sigma,0,", 0) == 0);
  CHECK(row1.rfind("depth_sigma,0.003,", 0) == 0);

  // The zero row reproduces the clean oracle scores.
  EvaluateOptions options;
  const EvaluationResult clean = evaluate_dataset(data, options);
  std::stringstream ss(row0);
  std::string tok;
  std::vector<std::string> cols;
  while (std::getline(ss, tok, ',')) cols.push_back(tok);
  REQUIRE(cols.size() == 9);
  // Scores pass through six-significant-digit CSV formatting.
  CHECK(std::stod(cols[2]) == doctest::Approx(clean.report.average.at).epsilon(1e-5));
  CHECK(std::stod(cols[3]) == doctest::Approx(clean.report.average.pc).epsilon(1e-5));
  CHECK(std::stod(cols[4]) == doctest::Approx(clean.report.average.ca).epsilon(1e-5));
  CHECK(std::stoi(cols[8]) == clean.report.average.pairs);
}

TEST_CASE("sweep-noise validates its parameter and value list") {
  const auto data = kDir / "eval-data";
  CaptureStdout cap;
  CHECK(cli::run({"sweep-noise", "--dataset", data.string(), "--param", "contrast",
                  "--values", "0"}) == 2);
  CHECK(cli::run({"sweep-noise", "--dataset", data.string(), "--param", "depth_sigma",
                  "--values", "zero"}) == 2);
}
