#include "fastctx/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fastctx/corpus.h"

namespace fastctx::cli {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = FASTCTX_DATA_DIR;
const std::string kExampleRules = kDataDir + "/rules/example_rules.tsv";
const std::string kStarterRules = kDataDir + "/rules/starter_rules.tsv";
const std::string kHandGold = kDataDir + "/gold/hand_gold.jsonl";

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "fastctx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Result r;
  r.code = Run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fastctx_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

  fs::path dir_;
};

constexpr char kAtrial[] =
    R"({"tokens":["no","atrial","septal","defect","is","found"],"concept":[1,4]})";

TEST_F(CliTest, AnnotateWorkedExample) {
  const std::string rules = Write("r.tsv", "no\tforward\ttrigger\tnegated\t30\n");
  const Result r = Invoke({"annotate", "--rules", rules}, std::string(kAtrial) + "\n");
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  const Json j = Json::parse(lines[0]);
  EXPECT_EQ(j["pred"]["negation"], "negated");
  EXPECT_EQ(j["pred"]["experiencer"], "patient");
  EXPECT_EQ(j["pred"]["evidence"]["negation"]["span"], Json::array({0, 1}));
  EXPECT_EQ(j["tokens"][0], "no");
}

TEST_F(CliTest, ExampleRulesAloneLeaveAtrialAffirmed) {
  // The three example lines carry no "no" cue; the starter file adds it.
  Result r = Invoke({"annotate", "--rules", kExampleRules}, kAtrial);
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(Json::parse(Lines(r.out).at(0))["pred"]["negation"], "affirmed");
  r = Invoke({"annotate", "--rules", kStarterRules}, kAtrial);
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(Json::parse(Lines(r.out).at(0))["pred"]["negation"], "negated");
}

TEST_F(CliTest, AnnotateExampleRulesFileCanRuleOut) {
  const Result r = Invoke(
      {"annotate", "--rules", kExampleRules, "--engine", "naive"},
      R"({"text":"We can rule out pneumonia","concept":[4,5]})" "\n");
  ASSERT_EQ(r.code, kOk) << r.err;
  const Json j = Json::parse(Lines(r.out).at(0));
  EXPECT_EQ(j["pred"]["negation"], "negated");
  EXPECT_EQ(j["pred"]["evidence"]["negation"]["span"], Json::array({1, 4}));
}

TEST_F(CliTest, AnnotateEmptyCorpus) {
  const Result r = Invoke({"annotate", "--rules", kExampleRules}, "");
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, AnnotateToFile) {
  const std::string out = (dir_ / "out.jsonl").string();
  const Result r = Invoke({"annotate", "--rules", kExampleRules, "--output", out},
                          std::string(kAtrial) + "\n");
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_NE(line.find("\"pred\""), std::string::npos);
}

TEST_F(CliTest, BadRuleLineExitsTwoWithLineNumber) {
  const std::string rules = Write("bad.tsv",
                                  "no\tforward\ttrigger\tnegated\t30\n"
                                  "although\tforward\ttermination\tnegated\n");
  const Result r = Invoke({"annotate", "--rules", rules}, kAtrial);
  EXPECT_EQ(r.code, kRuleError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, MissingRuleFileExitsTwo) {
  EXPECT_EQ(Invoke({"annotate", "--rules", "/nonexistent.tsv"}, kAtrial).code,
            kRuleError);
}

TEST_F(CliTest, BadCorpusExitsThree) {
  const Result r = Invoke({"annotate", "--rules", kExampleRules},
                          std::string(kAtrial) + "\n{\"tokens\":[\"x\"]}\n");
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, InvalidSpanEchoedWithError) {
  const std::string input =
      std::string(kAtrial) + "\n" + R"({"tokens":["no","fever"],"concept":[1,7]})" + "\n";
  const Result r = Invoke({"annotate", "--rules", kExampleRules}, input);
  EXPECT_EQ(r.code, kOk);
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_TRUE(Json::parse(lines[0]).contains("pred"));
  const Json bad = Json::parse(lines[1]);
  EXPECT_FALSE(bad.contains("pred"));
  EXPECT_TRUE(bad.contains("error"));
  EXPECT_NE(r.err.find("record 1"), std::string::npos);

  EXPECT_EQ(Invoke({"annotate", "--rules", kExampleRules, "--strict"}, input).code,
            kAssertionFailed);
}

TEST_F(CliTest, UnknownFlagAndEngineRejected) {
  EXPECT_NE(Invoke({"annotate", "--rules", kExampleRules, "--bogus"}).code, kOk);
  EXPECT_NE(Invoke({"annotate", "--rules", kExampleRules, "--engine", "regex"}).code,
            kOk);
  EXPECT_NE(Invoke({}).code, kOk);
}

TEST_F(CliTest, HelpOnEverySubcommand) {
  for (const char* sub : {"annotate", "evaluate", "bench", "rules-validate",
                          "generate"}) {
    const Result r = Invoke({sub, "--help"});
    EXPECT_EQ(r.code, kOk) << sub;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << sub;
  }
}

TEST_F(CliTest, EvaluateHandGoldFullRules) {
  const Result r = Invoke({"evaluate", "--rules", kStarterRules, "--gold", kHandGold});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("negated.tp=22\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("negated.f=1.000000\n"), std::string::npos);
  EXPECT_NE(r.out.find("possible.f=1.000000\n"), std::string::npos);
  EXPECT_NE(r.out.find("other.f=1.000000\n"), std::string::npos);
}

TEST_F(CliTest, EvaluateHalfRulesCsv) {
  std::ifstream in(kStarterRules);
  std::string text, line;
  std::size_t kept = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (kept++ < 12) text += line + "\n";
  }
  const std::string half = Write("half.tsv", text);
  const Result r = Invoke({"evaluate", "--rules", half, "--gold", kHandGold,
                           "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[1], "negated,21,2,1,0.913043,0.954545,0.933333");
  EXPECT_EQ(lines[2], "possible,3,0,2,1.000000,0.600000,0.750000");
  EXPECT_EQ(lines[3], "other,0,0,6,0.000000,0.000000,0.000000");
}

TEST_F(CliTest, EvaluateSelfConsistentGeneratedGold) {
  const std::string rules = (dir_ / "gen.tsv").string();
  ASSERT_EQ(Invoke({"generate", "rules", "--seed", "7", "--count", "300",
                    "--output", rules})
                .code,
            kOk);
  const std::string gold = (dir_ / "gold.jsonl").string();
  ASSERT_EQ(Invoke({"generate", "corpus", "--rules", rules, "--sentences", "400",
                    "--output", gold})
                .code,
            kOk);
  const Result r = Invoke({"evaluate", "--rules", rules, "--gold", gold});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* key : {"negated.f=1.000000", "possible.f=1.000000",
                          "other.f=1.000000"}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key << "\n" << r.out;
  }
}

TEST_F(CliTest, EvaluateMissingGoldDimensionReportsSkipped) {
  const std::string gold = Write(
      "g.jsonl",
      R"({"tokens":["no","fever"],"concept":[1,2],"gold":{"negation":"negated"}})" "\n");
  const Result r = Invoke({"evaluate", "--rules", kExampleRules, "--gold", gold});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("other.skipped=1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("negated.skipped=0\n"), std::string::npos);
}

TEST_F(CliTest, EvaluateMisalignedPredictionsExitThree) {
  const std::string gold = Write(
      "g.jsonl",
      R"({"tokens":["no","fever"],"concept":[1,2],"gold":{"negation":"negated"}})" "\n"
      R"({"tokens":["fever"],"concept":[0,1],"gold":{"negation":"affirmed"}})" "\n");
  const std::string pred = Write(
      "p.jsonl",
      R"({"tokens":["no","fever"],"concept":[1,2],"pred":{"negation":"negated","experiencer":"patient","temporality":"recent"}})" "\n");
  const Result r = Invoke({"evaluate", "--gold", gold, "--pred", pred});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("misalignment"), std::string::npos);
}

TEST_F(CliTest, AnnotateThenEvaluatePredictions) {
  const std::string annotated = (dir_ / "pred.jsonl").string();
  ASSERT_EQ(Invoke({"annotate", "--rules", kStarterRules, "--input", kHandGold,
                    "--output", annotated})
                .code,
            kOk);
  const Result r = Invoke({"evaluate", "--gold", kHandGold, "--pred", annotated});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("negated.f=1.000000"), std::string::npos);
}

TEST_F(CliTest, RulesValidate) {
  Result r = Invoke({"rules-validate", kExampleRules});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("3 rules OK"), std::string::npos);

  r = Invoke({"rules-validate", "--rules", kExampleRules, "--canonical"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out,
            "can rule out\tforward\ttrigger\tnegated\t10\n"
            "although\tforward\ttermination\tnegated\t30\n"
            "false negative\tbidirectional\tpseudo\tnegated\t30\n");

  const std::string dup = Write("dup.tsv",
                                "no\tforward\ttrigger\tnegated\t30\n"
                                "no\tforward\ttrigger\tnegated\t30\n");
  r = Invoke({"rules-validate", dup});
  EXPECT_EQ(r.code, kRuleError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const Result a = Invoke({"generate", "corpus", "--seed", "1", "--sentences", "50"});
  const Result b = Invoke({"generate", "corpus", "--seed", "1", "--sentences", "50"});
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Lines(a.out).size(), 50u);
  const Result rules = Invoke({"generate", "rules", "--count", "5"});
  EXPECT_EQ(Lines(rules.out).size(), 5u);
  EXPECT_EQ(Invoke({"generate", "corpus", "--min-length", "50"}).code, kDataError);
}

TEST_F(CliTest, BenchSingleStep) {
  const Result r = Invoke({"bench", "--base", "409", "--final", "409", "--runs", "1",
                           "--warmup", "0", "--sentences", "50"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "rule_count,engine,mean_ms,stddev_ms,speedup_vs_naive");
  EXPECT_EQ(lines[1].rfind("409,trie,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("409,naive,", 0), 0u);
}

TEST_F(CliTest, BenchTrieOnlyHasEmptySpeedup) {
  const Result r = Invoke({"bench", "--base", "409", "--final", "409", "--runs", "1",
                           "--sentences", "20", "--engines", "trie"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].back(), ',');
}

TEST_F(CliTest, BenchCheckFailsOnImpossibleThreshold) {
  const Result r = Invoke({"bench", "--base", "100", "--final", "200", "--step",
                           "100", "--runs", "1", "--sentences", "20", "--check",
                           "--speedup-min", "1e9"});
  EXPECT_EQ(r.code, kAssertionFailed);
  EXPECT_NE(r.err.find("FAIL speedup_at_final"), std::string::npos) << r.err;
}

TEST_F(CliTest, BenchBadConfigExitsThree) {
  EXPECT_EQ(Invoke({"bench", "--base", "900"}).code, kDataError);
}

TEST_F(CliTest, BenchFromConfigFile) {
  const std::string config = Write("bench.ini",
                                   "[bench]\n"
                                   "base=409\n"
                                   "final=409\n"
                                   "runs=1\n"
                                   "sentences=10\n"
                                   "engines=trie\n");
  const Result r = Invoke({"--config", config, "bench"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(Lines(r.out).size(), 2u);
}

}  // namespace
}  // namespace fastctx::cli
