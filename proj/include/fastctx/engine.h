// Scope resolution and per-concept modifier assignment.
//
// Cue matches become scopes: a trigger affects up to `window` tokens after
// its span (forward), before it (backward) or both. Pseudo cues discard any
// trigger or termination of the same dimension they overlap. Termination
// cues cut same-dimension scopes that reach past them. A concept takes, per
// dimension, the value of the nearest surviving cue whose scope covers it.

#ifndef FASTCTX_ENGINE_H_
#define FASTCTX_ENGINE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fastctx/matcher.h"
#include "fastctx/rules.h"

namespace fastctx {

using ConceptSpan = TokenSpan;

enum class Negation : std::uint8_t { kAffirmed, kNegated, kPossible };
enum class Experiencer : std::uint8_t { kPatient, kOther };
enum class Temporality : std::uint8_t { kRecent, kHistorical, kHypothetical };

std::string_view ToString(Negation v);
std::string_view ToString(Experiencer v);
std::string_view ToString(Temporality v);
std::optional<Negation> ParseNegation(std::string_view s);
std::optional<Experiencer> ParseExperiencer(std::string_view s);
std::optional<Temporality> ParseTemporality(std::string_view s);

struct ContextAnnotation {
  Negation negation = Negation::kAffirmed;
  Experiencer experiencer = Experiencer::kPatient;
  Temporality temporality = Temporality::kRecent;
  // Indexed by Dimension. Present exactly when that dimension is non-default.
  std::array<std::optional<CueMatch>, kDimensionCount> evidence;

  const std::optional<CueMatch>& evidence_for(Dimension d) const {
    return evidence[static_cast<std::size_t>(d)];
  }

  bool operator==(const ContextAnnotation&) const = default;
};

// Modifier values and evidence spans agree; evidence rule ids are ignored.
bool SameLabelsAndSpans(const ContextAnnotation& a, const ContextAnnotation& b);

struct Scope {
  CueMatch cue;
  Dimension dimension = Dimension::kNegation;
  ModifierValue value = ModifierValue::kNegated;
  // Affected tokens on each side of the cue; either side may be empty.
  TokenSpan before;
  TokenSpan after;

  bool Covers(const TokenSpan& s) const {
    return before.Overlaps(s) || after.Overlaps(s);
  }
  bool operator==(const Scope&) const = default;
};

class InvalidSpan : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Applies pseudo suppression, windows and termination truncation. Scopes are
// returned in the order of their trigger matches.
std::vector<Scope> ResolveScopes(std::span<const CueMatch> matches,
                                 const RuleSet& rules,
                                 std::size_t sentence_len);

// Picks per-dimension values for the mention from resolved scopes. Throws
// InvalidSpan if the mention is empty or exceeds sentence_len.
ContextAnnotation AnnotateFromScopes(std::span<const Scope> scopes,
                                     ConceptSpan mention,
                                     std::size_t sentence_len);

ContextAnnotation Annotate(std::span<const std::string> tokens,
                           ConceptSpan mention, const RuleTrie& trie,
                           const RuleSet& rules);

ContextAnnotation AnnotateNaive(std::span<const std::string> tokens,
                                ConceptSpan mention, const RuleSet& rules);

enum class MatcherBackend { kTrie, kNaive };

std::string_view ToString(MatcherBackend b);
std::optional<MatcherBackend> ParseMatcherBackend(std::string_view s);

struct AnnotateInput {
  std::span<const std::string> tokens;
  ConceptSpan mention;
};

struct RecordError {
  std::size_t index = 0;
  std::string message;
};

struct BatchResult {
  // One entry per input; empty where the record failed.
  std::vector<std::optional<ContextAnnotation>> annotations;
  std::vector<RecordError> errors;
};

// Owns a rule set and, for the trie backend, its trie.
class ContextEngine {
 public:
  explicit ContextEngine(RuleSet rules,
                         MatcherBackend backend = MatcherBackend::kTrie);

  ContextAnnotation Annotate(std::span<const std::string> tokens,
                             ConceptSpan mention) const;
  std::vector<CueMatch> FindMatches(std::span<const std::string> tokens) const;

  // Errors are collected per record; processing continues.
  BatchResult AnnotateBatch(std::span<const AnnotateInput> records) const;

  const RuleSet& rules() const { return rules_; }
  const RuleTrie& trie() const { return trie_; }
  MatcherBackend backend() const { return backend_; }

 private:
  RuleSet rules_;
  RuleTrie trie_;
  MatcherBackend backend_;
};

}  // namespace fastctx

#endif  // FASTCTX_ENGINE_H_
