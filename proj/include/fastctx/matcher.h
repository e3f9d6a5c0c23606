// Cue matching over token sequences.
//
// RuleTrie is a word-level nested map over rule phrases: the root's keys are
// first words, each child's keys are the next words, and so on. Matching
// walks the trie once per start position, so the cost per token is bounded
// by the longest phrase rather than by the number of rules.
//
// Child maps are small open-addressing tables of (hash tag, child) pairs so a
// failed lookup, by far the common case, touches one contiguous array.
//
// FindMatchesNaive loops over every rule at every start position. It is the
// reference the trie must agree with, and the slow baseline in benchmarks.

#ifndef FASTCTX_MATCHER_H_
#define FASTCTX_MATCHER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fastctx/rules.h"

namespace fastctx {

// Half-open token interval [start, end).
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool Overlaps(const TokenSpan& o) const {
    return start < o.end && o.start < end;
  }
  bool Contains(std::size_t i) const { return start <= i && i < end; }

  bool operator==(const TokenSpan&) const = default;
};

struct CueMatch {
  RuleId rule_id = 0;
  TokenSpan span;

  bool operator==(const CueMatch&) const = default;
};

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);

inline std::uint64_t HashToken(std::string_view s) {
  return std::hash<std::string_view>{}(s);
}

// Word -> child node map with linear probing; load factor at most 1/2.
class ChildTable {
 public:
  NodeIndex find(std::string_view key) const { return find(key, HashToken(key)); }
  NodeIndex find(std::string_view key, std::uint64_t hash) const {
    if (slots_.empty()) return kNoNode;
    const std::size_t mask = slots_.size() - 1;
    const std::uint32_t tag = Tag(hash);
    for (std::size_t i = hash & mask;; i = (i + 1) & mask) {
      const Slot& slot = slots_[i];
      if (slot.child == kNoNode) return kNoNode;
      if (slot.tag == tag && keys_[i] == key) return slot.child;
    }
  }
  bool contains(std::string_view key) const { return find(key) != kNoNode; }
  // Throws std::out_of_range if absent.
  NodeIndex at(std::string_view key) const;

  // The key must not be present yet.
  void insert(std::string_view key, NodeIndex child);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  struct Slot {
    std::uint32_t tag = 0;
    NodeIndex child = kNoNode;
  };
  static std::uint32_t Tag(std::uint64_t hash) {
    return static_cast<std::uint32_t>(hash >> 32);
  }
  void Place(std::string key, NodeIndex child, std::uint64_t hash);

  std::vector<Slot> slots_;
  std::vector<std::string> keys_;
  std::size_t size_ = 0;
};

struct TrieNode {
  ChildTable children;
  NodeIndex wildcard_child = kNoNode;
  // Ascending ids of the rules whose phrase ends here.
  std::vector<RuleId> terminal_rules;
};

class RuleTrie {
 public:
  RuleTrie();

  static constexpr NodeIndex kRoot = 0;

  // Inserts a phrase. The wildcard token goes to the wildcard child.
  void Insert(std::span<const std::string> phrase, RuleId id);

  const TrieNode& node(NodeIndex i) const { return nodes_[i]; }
  const TrieNode& root() const { return nodes_[kRoot]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t rule_count() const { return rule_count_; }
  std::size_t max_depth() const { return max_depth_; }

  // Follows phrase tokens literally (the wildcard marker follows the wildcard
  // edge). Returns kNoNode if the path does not exist.
  NodeIndex Walk(std::span<const std::string> phrase) const;

 private:
  std::vector<TrieNode> nodes_;
  std::size_t rule_count_ = 0;
  std::size_t max_depth_ = 0;
};

RuleTrie BuildTrie(const RuleSet& rules);

// For each start position keeps only the longest matches beginning there
// (several rules with the identical span are all kept). The output is sorted
// by (span.start, rule_id). Tokens must already be lowercased.
std::vector<CueMatch> FindMatchesTrie(const RuleTrie& trie,
                                      std::span<const std::string> tokens);

// Same contract as FindMatchesTrie, computed by testing every rule at every
// start position.
std::vector<CueMatch> FindMatchesNaive(const RuleSet& rules,
                                       std::span<const std::string> tokens);

// True if the rule's phrase matches tokens starting at `start`.
bool PhraseMatchesAt(const ContextRule& rule,
                     std::span<const std::string> tokens, std::size_t start);

}  // namespace fastctx

#endif  // FASTCTX_MATCHER_H_
