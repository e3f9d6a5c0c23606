#include "fastctx/matcher.h"

#include <gtest/gtest.h>

#include "fastctx/corpus.h"
#include "oracle.h"

namespace fastctx {
namespace {

using Tokens = std::vector<std::string>;

RuleSet Rules(std::initializer_list<const char*> phrases) {
  std::string text;
  for (const char* p : phrases) {
    text += std::string(p) + "\tforward\ttrigger\tnegated\t10\n";
  }
  return LoadRulesFromString(text);
}

TEST(BuildTrieTest, NestedPhrases) {
  const RuleSet rs = Rules({"no", "no evidence of"});
  const RuleTrie trie = BuildTrie(rs);
  EXPECT_EQ(trie.rule_count(), 2u);
  ASSERT_EQ(trie.root().children.size(), 1u);
  const NodeIndex no = trie.root().children.at("no");
  EXPECT_EQ(trie.node(no).terminal_rules, std::vector<RuleId>{0});
  ASSERT_TRUE(trie.node(no).children.contains("evidence"));
  const NodeIndex evidence = trie.node(no).children.at("evidence");
  EXPECT_TRUE(trie.node(evidence).terminal_rules.empty());
  const NodeIndex of = trie.node(evidence).children.at("of");
  EXPECT_EQ(trie.node(of).terminal_rules, std::vector<RuleId>{1});
  EXPECT_EQ(trie.max_depth(), 3u);
}

TEST(BuildTrieTest, EmptyRuleSet) {
  const RuleTrie trie = BuildTrie(RuleSet());
  EXPECT_TRUE(trie.root().children.empty());
  EXPECT_EQ(trie.root().wildcard_child, kNoNode);
  EXPECT_EQ(trie.rule_count(), 0u);
  EXPECT_TRUE(FindMatchesTrie(trie, Tokens{"no", "fever"}).empty());
}

TEST(BuildTrieTest, EveryGeneratedRuleReachableFromRoot) {
  const RuleSet rs = GenerateRules(7, 849);
  const RuleTrie trie = BuildTrie(rs);
  EXPECT_EQ(trie.rule_count(), 849u);
  for (const auto& rule : rs) {
    const NodeIndex node = trie.Walk(rule.phrase);
    ASSERT_NE(node, kNoNode) << SerializeRule(rule);
    const auto& ids = trie.node(node).terminal_rules;
    EXPECT_TRUE(std::binary_search(ids.begin(), ids.end(), rule.id));
  }
}

TEST(BuildTrieTest, TerminalSetsHoldExactlyTheirRules) {
  const RuleSet rs = GenerateRules(11, 400);
  const RuleTrie trie = BuildTrie(rs);
  std::size_t total = 0;
  for (NodeIndex i = 0; i < trie.node_count(); ++i) {
    for (RuleId id : trie.node(i).terminal_rules) {
      EXPECT_EQ(trie.Walk(rs[id].phrase), i);
      ++total;
    }
  }
  EXPECT_EQ(total, rs.size());
}

TEST(FindMatchesTest, CanRuleOut) {
  const RuleSet rs = Rules({"can rule out"});
  const Tokens tokens{"we", "can", "rule", "out", "mi"};
  const std::vector<CueMatch> expected = {{0, {1, 4}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), tokens), expected);
  EXPECT_EQ(FindMatchesNaive(rs, tokens), expected);
}

TEST(FindMatchesTest, LongestAtStartWins) {
  const RuleSet rs = Rules({"rule", "rule out"});
  const Tokens tokens{"can", "rule", "out"};
  const std::vector<CueMatch> expected = {{1, {1, 3}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), tokens), expected);
  EXPECT_EQ(FindMatchesNaive(rs, tokens), expected);
  EXPECT_EQ(oracle::Matches(rs, tokens), expected);
}

TEST(FindMatchesTest, WildcardBindsOneToken) {
  const RuleSet rs = Rules({"denies \\w+ pain"});
  const std::vector<CueMatch> expected = {{0, {0, 3}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), Tokens{"denies", "chest", "pain"}),
            expected);
  EXPECT_EQ(FindMatchesNaive(rs, Tokens{"denies", "chest", "pain"}), expected);
  EXPECT_TRUE(FindMatchesTrie(BuildTrie(rs), Tokens{"denies", "pain"}).empty());
  EXPECT_TRUE(
      FindMatchesTrie(BuildTrie(rs), Tokens{"denies", "a", "b", "pain"}).empty());
}

TEST(FindMatchesTest, LiteralAndWildcardBranchesBothExplored) {
  // "no chest" is a dead end past depth 2; the wildcard branch must still
  // find "no \w+ pain".
  const RuleSet rs = Rules({"no chest wall", "no \\w+ pain", "no"});
  const Tokens tokens{"no", "chest", "pain"};
  const std::vector<CueMatch> expected = {{1, {0, 3}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), tokens), expected);
  EXPECT_EQ(FindMatchesNaive(rs, tokens), expected);
}

TEST(FindMatchesTest, IdenticalSpansAreAllKept) {
  const RuleSet rs = LoadRulesFromString(
      "family history of\tforward\ttrigger\tnonpatient\t10\n"
      "family \\w+ of\tforward\ttrigger\tnegated\t10\n"
      "family history of\tforward\tpseudo\thistorical\t10\n");
  const Tokens tokens{"family", "history", "of", "cancer"};
  const std::vector<CueMatch> expected = {
      {0, {0, 3}}, {1, {0, 3}}, {2, {0, 3}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), tokens), expected);
  EXPECT_EQ(FindMatchesNaive(rs, tokens), expected);
}

TEST(FindMatchesTest, OverlapsAtDifferentStartsAreKept) {
  const RuleSet rs = Rules({"false negative", "negative"});
  const Tokens tokens{"a", "false", "negative"};
  const std::vector<CueMatch> expected = {{0, {1, 3}}, {1, {2, 3}}};
  EXPECT_EQ(FindMatchesTrie(BuildTrie(rs), tokens), expected);
  EXPECT_EQ(FindMatchesNaive(rs, tokens), expected);
}

TEST(FindMatchesTest, EmptyTokens) {
  const RuleSet rs = Rules({"no"});
  EXPECT_TRUE(FindMatchesTrie(BuildTrie(rs), Tokens{}).empty());
  EXPECT_TRUE(FindMatchesNaive(rs, Tokens{}).empty());
}

TEST(FindMatchesTest, SingleTokenManyNonMatchingRules) {
  const RuleSet rs = GenerateRules(3, 1000);
  const Tokens tokens{"w12345"};
  EXPECT_TRUE(FindMatchesNaive(rs, tokens).empty());
  EXPECT_TRUE(FindMatchesTrie(BuildTrie(rs), tokens).empty());
}

TEST(FindMatchesTest, PhraseLongerThanSentence) {
  const RuleSet rs = Rules({"can rule out"});
  EXPECT_TRUE(FindMatchesTrie(BuildTrie(rs), Tokens{"can", "rule"}).empty());
  EXPECT_TRUE(FindMatchesNaive(rs, Tokens{"can", "rule"}).empty());
}

// The central property: trie and naive agree, and both agree with the
// brute-force oracle; every match re-verifies and is longest at its start.
TEST(FindMatchesPropertyTest, TrieEqualsNaiveEqualsOracle) {
  Sampler rng(20240601);
  for (int i = 0; i < 2000; ++i) {
    const auto c = oracle::MakeRandomCase(rng, 60, 30);
    const RuleTrie trie = BuildTrie(c.rules);
    const auto trie_matches = FindMatchesTrie(trie, c.tokens);
    ASSERT_EQ(trie_matches, FindMatchesNaive(c.rules, c.tokens)) << "case " << i;
    ASSERT_EQ(trie_matches, oracle::Matches(c.rules, c.tokens)) << "case " << i;

    for (std::size_t k = 0; k < trie_matches.size(); ++k) {
      const CueMatch& m = trie_matches[k];
      const ContextRule& rule = c.rules[m.rule_id];
      ASSERT_EQ(m.span.length(), rule.length());
      ASSERT_LE(m.span.end, c.tokens.size());
      ASSERT_TRUE(PhraseMatchesAt(rule, c.tokens, m.span.start));
      for (const auto& other : c.rules) {
        if (PhraseMatchesAt(other, c.tokens, m.span.start)) {
          ASSERT_LE(other.length(), m.span.length());
        }
      }
      if (k > 0) {
        const CueMatch& prev = trie_matches[k - 1];
        ASSERT_TRUE(prev.span.start < m.span.start ||
                    (prev.span.start == m.span.start &&
                     prev.rule_id < m.rule_id));
      }
    }
  }
}

TEST(FindMatchesPropertyTest, BuildIsPure) {
  Sampler rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto c = oracle::MakeRandomCase(rng, 40, 20);
    const RuleTrie a = BuildTrie(c.rules);
    const RuleTrie b = BuildTrie(c.rules);
    EXPECT_EQ(a.node_count(), b.node_count());
    EXPECT_EQ(FindMatchesTrie(a, c.tokens), FindMatchesTrie(b, c.tokens));
  }
}

}  // namespace
}  // namespace fastctx
