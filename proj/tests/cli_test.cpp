#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace discocirc;
using discocirc::fixtures::fixture;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "discocirc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir()
      : path_(fs::temp_directory_path() /
              ("discocirc_cli_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = path_ / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

}  // namespace

TEST(Cli, TreeOfFig4) {
  auto r = run({"tree", "--input", fixture("fig4.json"), "--format", "text"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1:reads [s]\n  0:Alice [n]\n  2:books [n]\n");
}

TEST(Cli, CircuitOfFig8) {
  auto r = run({"circuit", "--input", fixture("fig8.json"), "--ansatz", "sim4", "--qubits-per-wire", "1",
                "--layers", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto c = circuit_from_json(r.out);
  EXPECT_EQ(c.n_qubits, 4);
  EXPECT_EQ(c.outputs.size(), 4u);
}

TEST(Cli, ReducedFig9Dot) {
  auto r = run({"diagram", "--input", fixture("fig9.json"), "--rewrites", "determiner,noun_modification",
                "--format", "dot"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("label=\"blue bike\""), std::string::npos);
  EXPECT_EQ(r.out.find("label=\"the\""), std::string::npos);
}

TEST(Cli, ChainedStagesMatchPipeline) {
  TempDir tmp;
  const std::vector<std::string> flags{"--ansatz", "iqp", "--layers", "2", "--foliated", "--merge-box", "--seed", "4"};
  auto whole = run([&] {
    std::vector<std::string> a{"circuit", "--input", fixture("fig1.json")};
    a.insert(a.end(), flags.begin(), flags.end());
    return a;
  }());
  ASSERT_EQ(whole.code, 0) << whole.err;
  const auto diagram = tmp.file("d.json");
  ASSERT_EQ(run({"diagram", "--input", fixture("fig1.json"), "--out", diagram}).code, 0);
  std::vector<std::string> a{"circuit", "--input", diagram};
  a.insert(a.end(), flags.begin(), flags.end());
  auto chained = run(a);
  ASSERT_EQ(chained.code, 0) << chained.err;
  EXPECT_EQ(whole.out, chained.out);
  const auto circuit = tmp.file("c.json", whole.out);
  EXPECT_EQ(run({"circuit", "--input", circuit}).out, whole.out);
  EXPECT_EQ(run(a).out, chained.out);
}

TEST(Cli, PlainTextAndAllParses) {
  TempDir tmp;
  const auto text = tmp.file("t.txt", "Alice reads books\nShe likes them\n");
  auto r = run({"parse", "--input", text, "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sentence 1"), std::string::npos);
  EXPECT_NE(r.out.find("chain 0 0:0 1:0"), std::string::npos);
  auto all = run({"parse", "--input", text, "--all-parses"});
  ASSERT_EQ(all.code, 0) << all.err;
  EXPECT_EQ(all.out.front(), '[');
  EXPECT_EQ(run({"parse", "--input", fixture("fig4.json"), "--all-parses"}).code, cli::Exit::other);
}

TEST(Cli, ExitCodes) {
  TempDir tmp;
  EXPECT_EQ(run({"diagram", "--input", tmp.file("missing.json")}).code, cli::Exit::format_error);
  auto bad = run({"diagram", "--input", tmp.file("bad.json", "{\"sentences\": [")});
  EXPECT_EQ(bad.code, cli::Exit::format_error);
  EXPECT_EQ(bad.err.rfind("FormatError: ", 0), 0u);
  auto np = run({"diagram", "--input", tmp.file("np.txt", "books books books\n")});
  EXPECT_EQ(np.code, cli::Exit::no_parse);
  EXPECT_EQ(np.err.rfind("NoParse: ", 0), 0u);
  EXPECT_EQ(run({"circuit", "--input", fixture("fig8.json"), "--qubits-per-wire", "4"}).code,
            cli::Exit::cap_exceeded);
  EXPECT_EQ(run({"circuit", "--input", fixture("fig8.json"), "--format", "dot"}).code, cli::Exit::other);
  EXPECT_EQ(run({"diagram"}).code, cli::Exit::other);
  EXPECT_EQ(run({"nonsense"}).code, cli::Exit::other);
  EXPECT_EQ(run({"--help"}).code, cli::Exit::ok);
}

TEST(Cli, Train) {
  TempDir tmp;
  const auto circuit = tmp.file("c.json");
  ASSERT_EQ(run({"circuit", "--input", fixture("fig1.json"), "--merge-box", "--out", circuit}).code, 0);
  const auto data = tmp.file("d.jsonl", "{\"text_id\": \"a\", \"label\": 1, \"circuit_path\": \"c.json\"}\n");
  const auto params = tmp.file("p.json");
  auto r = run({"train", "--input", data, "--epochs", "3", "--params-out", params});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("epoch,train_loss,train_acc,test_acc\n", 0), 0u);
  EXPECT_TRUE(fs::exists(params));

  const auto wide = tmp.file("w.json");
  ASSERT_EQ(run({"circuit", "--input", fixture("fig4.json"), "--out", wide}).code, 0);
  const auto bad = tmp.file("b.jsonl", "{\"text_id\": \"a\", \"label\": 1, \"circuit_path\": \"w.json\"}\n");
  EXPECT_EQ(run({"train", "--input", bad}).code, cli::Exit::training_failure);
  EXPECT_EQ(run({"train", "--input", fixture("fig4.json")}).code, cli::Exit::other);
}

TEST(Cli, Batch) {
  TempDir tmp;
  const auto in = tmp.path() / "in";
  const auto out = tmp.path() / "out";
  fs::create_directories(in);
  fs::copy_file(fixture("fig1.json"), in / "fig1.json");
  fs::copy_file(fixture("fig4.json"), in / "fig4.json");
  std::ofstream(in / "broken.json") << "{";
  auto r = run({"diagram", "--batch", in.string(), "--out", out.string(), "--format", "text", "-j", "2"});
  EXPECT_EQ(r.code, cli::Exit::format_error);
  EXPECT_TRUE(fs::exists(out / "fig1.diagram.txt"));
  EXPECT_TRUE(fs::exists(out / "fig4.diagram.txt"));
  EXPECT_NE(r.err.find("ok fig4.json"), std::string::npos);
  EXPECT_NE(r.err.find("FormatError: broken.json"), std::string::npos);
}
