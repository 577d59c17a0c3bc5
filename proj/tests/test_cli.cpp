#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "asc/audio_io.hpp"
#include "asc/ensemble.hpp"
#include "asc/labels.hpp"
#include "asc/predictions_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string("\"") + ASC_CLI_PATH + "\" " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::size_t line_count(const fs::path& p) {
  const auto s = oracle::read_file(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Four clips: three training clips of different classes and one validation clip.
struct Workspace {
  fs::path root = oracle::temp_dir("cli");
  fs::path manifest = root / "manifest.csv";
  fs::path features = root / "features";
  fs::path run_dir = root / "run";

  Workspace() {
    fs::create_directories(root / "audio");
    const std::array<std::pair<std::size_t, const char*>, 4> clips = {
        {{6, "train"}, {9, "train"}, {2, "train"}, {6, "validation"}}};
    std::ofstream m(manifest);
    m << "path,label,split\n";
    for (std::size_t i = 0; i < clips.size(); ++i) {
      const auto s = oracle::scene_clip(clips[i].first, i, 48000, 10.0);
      const std::vector<std::vector<double>> ch = {s.left, s.right};
      const auto name = "c" + std::to_string(i) + ".wav";
      asc::write_wav(root / "audio" / name, ch, 48000);
      m << "audio/" << name << ',' << asc::LabelSet::scenes().name(clips[i].first) << ',' << clips[i].second << '\n';
    }
  }
};

Workspace& ws() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("preprocess writes one file per clip and is idempotent") {
  auto& w = ws();
  auto r = run("preprocess --manifest " + q(w.manifest) + " --combo HPD --combo M --out " + q(w.features) + " --workers 2");
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("wrote 8 feature files, skipped 0") != std::string::npos);
  CHECK(fs::exists(w.features / "c0.HPD.lmt"));
  CHECK(fs::exists(w.features / "c3.M.lmt"));
  const auto before = fs::last_write_time(w.features / "c0.HPD.lmt");

  r = run("preprocess --manifest " + q(w.manifest) + " --combo HPD --out " + q(w.features));
  CHECK(r.code == 0);
  CHECK(r.out.find("wrote 0 feature files, skipped 4") != std::string::npos);
  CHECK(fs::last_write_time(w.features / "c0.HPD.lmt") == before);

  r = run("preprocess --manifest " + q(w.manifest) + " --combo M --force --out " + q(w.features));
  CHECK(r.out.find("wrote 4 feature files") != std::string::npos);
}

TEST_CASE("preprocess reports a missing audio file by path with exit code 2") {
  const auto dir = oracle::temp_dir("cli_missing");
  std::ofstream(dir / "m.csv") << "gone.wav,park\n";
  const auto r = run("preprocess --manifest " + q(dir / "m.csv") + " --combo M --out " + q(dir / "f"));
  CHECK(r.code == 2);
  CHECK(r.out.find("gone.wav") != std::string::npos);
}

TEST_CASE("bad usage exits with 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("params --filters 0").code == 1);
  auto& w = ws();
  CHECK(run("preprocess --manifest " + q(w.manifest) + " --combo XYZ --out " + q(w.features)).code == 1);
}

TEST_CASE("train for one epoch writes a checkpoint and a one-row log") {
  auto& w = ws();
  const auto r = run("train --manifest " + q(w.manifest) + " --features " + q(w.features) +
                     " --combo HPD --filters 2 --epochs 1 --batch-size 2 --seed 3 --out " + q(w.run_dir));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("train 3 clips, validation 1 clips") != std::string::npos);
  CHECK(r.out.find("outside {16, 32, 64}") != std::string::npos);
  CHECK(fs::exists(w.run_dir / "model.vfyc"));
  CHECK(line_count(w.run_dir / "train_log.csv") == 2);
}

TEST_CASE("predict writes distributions; mismatched features name both shapes") {
  auto& w = ws();
  const auto pred = w.root / "pred.csv";
  auto r = run("predict --checkpoint " + q(w.run_dir / "model.vfyc") + " --manifest " + q(w.manifest) +
               " --features " + q(w.features) + " --combo HPD --out " + q(pred));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const auto t = asc::read_predictions(pred);
  REQUIRE(t.size() == 4);
  for (const auto& row : t.scores) {
    double s = 0;
    for (double v : row) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-6);
  }

  r = run("predict --checkpoint " + q(w.run_dir / "model.vfyc") + " --manifest " + q(w.manifest) + " --features " +
          q(w.features) + " --combo HPD --split test --out " + q(w.root / "empty.csv"));
  CHECK(r.code == 0);
  CHECK(line_count(w.root / "empty.csv") == 1);

  r = run("predict --checkpoint " + q(w.run_dir / "model.vfyc") + " --manifest " + q(w.manifest) + " --features " +
          q(w.features) + " --combo M --out " + q(w.root / "bad.csv"));
  CHECK(r.code == 2);
  CHECK(r.out.find("ShapeMismatch") != std::string::npos);
  CHECK(r.out.find("64x500x1") != std::string::npos);
  CHECK(r.out.find("64x500x3") != std::string::npos);
}

TEST_CASE("ensemble of one file under sum reproduces its argmax; three-file OWA; clip-set mismatch") {
  auto& w = ws();
  const auto pred = w.root / "pred.csv";
  REQUIRE(fs::exists(pred));
  auto r = run("ensemble --predictions " + q(pred) + " --method sum --out " + q(w.root / "sum"));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const auto table = asc::read_predictions(pred);
  const auto decisions = asc::read_decisions(w.root / "sum" / "decisions.csv");
  REQUIRE(decisions.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(decisions[i].clip_id == table.clip_ids[i]);
    CHECK(decisions[i].label == asc::LabelSet::scenes().name(asc::ensemble::decide(table.scores[i])));
  }

  r = run("ensemble --predictions " + q(pred) + " " + q(pred) + " " + q(pred) + " --method owa --out " + q(w.root / "owa"));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const auto fused = asc::read_predictions(w.root / "owa" / "fused.csv");
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t c = 0; c < 10; ++c) CHECK(fused.scores[i][c] == doctest::Approx(table.scores[i][c]).epsilon(1e-8));
  }

  r = run("ensemble --predictions " + q(pred) + " " + q(pred) + " --method owa --out " + q(w.root / "owa2"));
  CHECK(r.code == 2);
  CHECK(r.out.find("WeightLengthMismatch") != std::string::npos);

  auto other = table;
  other.clip_ids[0] = "stranger";
  asc::write_predictions(w.root / "other.csv", other);
  r = run("ensemble --predictions " + q(pred) + " " + q(w.root / "other.csv") + " --method prod --out " + q(w.root / "x"));
  CHECK(r.code == 2);
  CHECK(r.out.find("ClipSetMismatch") != std::string::npos);
}

TEST_CASE("evaluate writes CSV and table reports") {
  auto& w = ws();
  REQUIRE(fs::exists(w.root / "sum" / "decisions.csv"));
  auto r = run("evaluate --manifest " + q(w.manifest) + " --decisions Sum=" + q(w.root / "sum" / "decisions.csv") +
               " OWA=" + q(w.root / "owa" / "decisions.csv") + " --out " + q(w.root / "report"));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("Average") != std::string::npos);
  CHECK(r.out.find("no samples") != std::string::npos);
  const auto csv = oracle::read_file(w.root / "report" / "report.csv");
  CHECK(csv.rfind("class,Sum,OWA\n", 0) == 0);
  CHECK(line_count(w.root / "report" / "report.csv") == 12);
  CHECK(fs::exists(w.root / "report" / "report.txt"));

  std::ofstream(w.root / "stray.csv") << "clip_id,label\nnowhere,park\n";
  r = run("evaluate --manifest " + q(w.manifest) + " --decisions X=" + q(w.root / "stray.csv") + " --out " +
          q(w.root / "report2"));
  CHECK(r.code == 2);
}

TEST_CASE("params prints the parameter count") {
  auto r = run("params --filters 16 --in-channels 3");
  CHECK(r.code == 0);
  CHECK(r.out == "176926\n");
  r = run("params --filters 32 --in-channels 3");
  CHECK(r.out == "495150\n");
}
