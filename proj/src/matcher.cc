#include "fastctx/matcher.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fastctx {

NodeIndex ChildTable::at(std::string_view key) const {
  const NodeIndex child = find(key);
  if (child == kNoNode) {
    throw std::out_of_range("no child '" + std::string(key) + "'");
  }
  return child;
}

void ChildTable::insert(std::string_view key, NodeIndex child) {
  if (2 * (size_ + 1) > slots_.size()) {
    std::vector<Slot> old_slots = std::move(slots_);
    std::vector<std::string> old_keys = std::move(keys_);
    const std::size_t capacity = std::max<std::size_t>(4, old_slots.size() * 2);
    slots_.assign(capacity, Slot{});
    keys_.assign(capacity, std::string());
    for (std::size_t i = 0; i < old_slots.size(); ++i) {
      if (old_slots[i].child == kNoNode) continue;
      const std::uint64_t hash = HashToken(old_keys[i]);
      Place(std::move(old_keys[i]), old_slots[i].child, hash);
    }
  }
  Place(std::string(key), child, HashToken(key));
  ++size_;
}

void ChildTable::Place(std::string key, NodeIndex child, std::uint64_t hash) {
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = hash & mask;
  while (slots_[i].child != kNoNode) i = (i + 1) & mask;
  slots_[i] = {Tag(hash), child};
  keys_[i] = std::move(key);
}

RuleTrie::RuleTrie() : nodes_(1) {}

void RuleTrie::Insert(std::span<const std::string> phrase, RuleId id) {
  NodeIndex current = kRoot;
  for (const auto& word : phrase) {
    NodeIndex next;
    if (word == kWildcard) {
      next = nodes_[current].wildcard_child;
      if (next == kNoNode) {
        next = static_cast<NodeIndex>(nodes_.size());
        nodes_[current].wildcard_child = next;
        nodes_.emplace_back();
      }
    } else {
      next = nodes_[current].children.find(word);
      if (next == kNoNode) {
        next = static_cast<NodeIndex>(nodes_.size());
        // emplace_back may reallocate; insert the edge first.
        nodes_[current].children.insert(word, next);
        nodes_.emplace_back();
      }
    }
    current = next;
  }
  auto& terminal = nodes_[current].terminal_rules;
  terminal.insert(std::upper_bound(terminal.begin(), terminal.end(), id), id);
  ++rule_count_;
  max_depth_ = std::max(max_depth_, phrase.size());
}

NodeIndex RuleTrie::Walk(std::span<const std::string> phrase) const {
  NodeIndex current = kRoot;
  for (const auto& word : phrase) {
    if (word == kWildcard) {
      current = nodes_[current].wildcard_child;
    } else {
      current = nodes_[current].children.find(word);
    }
    if (current == kNoNode) return kNoNode;
  }
  return current;
}

RuleTrie BuildTrie(const RuleSet& rules) {
  RuleTrie trie;
  for (const auto& rule : rules) trie.Insert(rule.phrase, rule.id);
  return trie;
}

std::vector<CueMatch> FindMatchesTrie(const RuleTrie& trie,
                                      std::span<const std::string> tokens) {
  std::vector<CueMatch> out;
  if (trie.rule_count() == 0) return out;

  struct Frame {
    NodeIndex node;
    std::size_t depth;
  };
  std::vector<Frame> stack;
  std::vector<RuleId> best_ids;
  std::vector<std::uint64_t> hashes(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) hashes[i] = HashToken(tokens[i]);

  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::size_t best_len = 0;
    best_ids.clear();
    stack.clear();
    stack.push_back({RuleTrie::kRoot, 0});
    while (!stack.empty()) {
      const Frame frame = stack.back();
      stack.pop_back();
      const TrieNode& node = trie.node(frame.node);
      if (!node.terminal_rules.empty() && frame.depth >= best_len) {
        if (frame.depth > best_len) {
          best_len = frame.depth;
          best_ids.clear();
        }
        best_ids.insert(best_ids.end(), node.terminal_rules.begin(),
                        node.terminal_rules.end());
      }
      const std::size_t pos = start + frame.depth;
      if (pos >= tokens.size()) continue;
      // Pushed in reverse so the literal branch is explored first.
      if (node.wildcard_child != kNoNode) {
        stack.push_back({node.wildcard_child, frame.depth + 1});
      }
      if (!node.children.empty()) {
        const NodeIndex child = node.children.find(tokens[pos], hashes[pos]);
        if (child != kNoNode) stack.push_back({child, frame.depth + 1});
      }
    }
    if (best_len == 0) continue;
    std::sort(best_ids.begin(), best_ids.end());
    for (RuleId id : best_ids) {
      out.push_back({id, {start, start + best_len}});
    }
  }
  return out;
}

bool PhraseMatchesAt(const ContextRule& rule,
                     std::span<const std::string> tokens, std::size_t start) {
  if (start + rule.phrase.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < rule.phrase.size(); ++k) {
    const std::string& word = rule.phrase[k];
    if (word != kWildcard && word != tokens[start + k]) return false;
  }
  return true;
}

std::vector<CueMatch> FindMatchesNaive(const RuleSet& rules,
                                       std::span<const std::string> tokens) {
  std::vector<CueMatch> out;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::size_t best_len = 0;
    const std::size_t first = out.size();
    for (const auto& rule : rules) {
      if (rule.length() < best_len) continue;
      if (!PhraseMatchesAt(rule, tokens, start)) continue;
      if (rule.length() > best_len) {
        best_len = rule.length();
        out.resize(first);
      }
      out.push_back({rule.id, {start, start + rule.length()}});
    }
  }
  return out;
}

}  // namespace fastctx
