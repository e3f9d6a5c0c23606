#include "fastctx/engine.h"

#include <algorithm>
#include <tuple>

#include "fastctx/text.h"

namespace fastctx {

std::string_view ToString(Negation v) {
  switch (v) {
    case Negation::kAffirmed:
      return "affirmed";
    case Negation::kNegated:
      return "negated";
    case Negation::kPossible:
      return "possible";
  }
  return "?";
}

std::string_view ToString(Experiencer v) {
  return v == Experiencer::kPatient ? "patient" : "other";
}

std::string_view ToString(Temporality v) {
  switch (v) {
    case Temporality::kRecent:
      return "recent";
    case Temporality::kHistorical:
      return "historical";
    case Temporality::kHypothetical:
      return "hypothetical";
  }
  return "?";
}

std::optional<Negation> ParseNegation(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "affirmed") return Negation::kAffirmed;
  if (lower == "negated") return Negation::kNegated;
  if (lower == "possible") return Negation::kPossible;
  return std::nullopt;
}

std::optional<Experiencer> ParseExperiencer(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "patient") return Experiencer::kPatient;
  if (lower == "other") return Experiencer::kOther;
  return std::nullopt;
}

std::optional<Temporality> ParseTemporality(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "recent") return Temporality::kRecent;
  if (lower == "historical") return Temporality::kHistorical;
  if (lower == "hypothetical") return Temporality::kHypothetical;
  return std::nullopt;
}

std::string_view ToString(MatcherBackend b) {
  return b == MatcherBackend::kTrie ? "trie" : "naive";
}

std::optional<MatcherBackend> ParseMatcherBackend(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "trie") return MatcherBackend::kTrie;
  if (lower == "naive") return MatcherBackend::kNaive;
  return std::nullopt;
}

bool SameLabelsAndSpans(const ContextAnnotation& a,
                        const ContextAnnotation& b) {
  if (a.negation != b.negation || a.experiencer != b.experiencer ||
      a.temporality != b.temporality) {
    return false;
  }
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    if (a.evidence[d].has_value() != b.evidence[d].has_value()) return false;
    if (a.evidence[d] && a.evidence[d]->span != b.evidence[d]->span) {
      return false;
    }
  }
  return true;
}

namespace {

TokenSpan Canonical(TokenSpan s) { return s.empty() ? TokenSpan{} : s; }

bool StopsForward(Direction d) { return d != Direction::kBackward; }
bool StopsBackward(Direction d) { return d != Direction::kForward; }

// Larger wins on an exact distance tie.
int Precedence(ModifierValue v) {
  switch (v) {
    case ModifierValue::kPossible:
    case ModifierValue::kHypothetical:
      return 1;
    default:
      return 0;
  }
}

void CheckMention(ConceptSpan mention, std::size_t sentence_len) {
  if (mention.start >= mention.end || mention.end > sentence_len) {
    throw InvalidSpan("concept [" + std::to_string(mention.start) + ", " +
                      std::to_string(mention.end) +
                      ") outside sentence of length " +
                      std::to_string(sentence_len));
  }
}

std::size_t GapBetween(const TokenSpan& cue, const TokenSpan& mention) {
  return cue.end <= mention.start ? mention.start - cue.end
                                  : cue.start - mention.end;
}

}  // namespace

std::vector<Scope> ResolveScopes(std::span<const CueMatch> matches,
                                 const RuleSet& rules,
                                 std::size_t sentence_len) {
  std::vector<const CueMatch*> pseudo;
  for (const auto& m : matches) {
    if (rules[m.rule_id].cue_type == CueType::kPseudo) pseudo.push_back(&m);
  }
  const auto suppressed = [&](const CueMatch& m) {
    const Dimension dim = rules[m.rule_id].dimension();
    return std::any_of(pseudo.begin(), pseudo.end(), [&](const CueMatch* p) {
      return rules[p->rule_id].dimension() == dim && p->span.Overlaps(m.span);
    });
  };

  std::vector<const CueMatch*> terminations;
  std::vector<Scope> scopes;
  for (const auto& m : matches) {
    const ContextRule& rule = rules[m.rule_id];
    if (rule.cue_type == CueType::kPseudo || suppressed(m)) continue;
    if (rule.cue_type == CueType::kTermination) {
      terminations.push_back(&m);
      continue;
    }
    Scope scope;
    scope.cue = m;
    scope.dimension = rule.dimension();
    scope.value = rule.value;
    if (rule.direction != Direction::kBackward) {
      const std::size_t reach = std::min(rule.window,
                                         sentence_len - m.span.end);
      scope.after = Canonical({m.span.end, m.span.end + reach});
    }
    if (rule.direction != Direction::kForward) {
      const std::size_t reach = std::min(rule.window, m.span.start);
      scope.before = Canonical({m.span.start - reach, m.span.start});
    }
    scopes.push_back(scope);
  }

  for (const CueMatch* term : terminations) {
    const ContextRule& rule = rules[term->rule_id];
    for (Scope& scope : scopes) {
      if (scope.dimension != rule.dimension()) continue;
      if (StopsForward(rule.direction) && !scope.after.empty() &&
          scope.after.start <= term->span.start &&
          term->span.start < scope.after.end) {
        scope.after = Canonical({scope.after.start, term->span.start});
      }
      if (StopsBackward(rule.direction) && !scope.before.empty() &&
          scope.before.start < term->span.end &&
          term->span.end <= scope.before.end) {
        scope.before = Canonical({term->span.end, scope.before.end});
      }
    }
  }
  return scopes;
}

ContextAnnotation AnnotateFromScopes(std::span<const Scope> scopes,
                                     ConceptSpan mention,
                                     std::size_t sentence_len) {
  CheckMention(mention, sentence_len);

  std::array<const Scope*, kDimensionCount> best{};
  const auto rank = [&](const Scope& s) {
    return std::make_tuple(GapBetween(s.cue.span, mention),
                           -Precedence(s.value), s.cue.span.start,
                           s.cue.rule_id);
  };
  for (const Scope& scope : scopes) {
    if (!scope.Covers(mention) || scope.cue.span.Overlaps(mention)) continue;
    const Scope*& slot = best[static_cast<std::size_t>(scope.dimension)];
    if (slot == nullptr || rank(scope) < rank(*slot)) slot = &scope;
  }

  ContextAnnotation out;
  for (const Scope* scope : best) {
    if (scope == nullptr) continue;
    out.evidence[static_cast<std::size_t>(scope->dimension)] = scope->cue;
    switch (scope->value) {
      case ModifierValue::kNegated:
        out.negation = Negation::kNegated;
        break;
      case ModifierValue::kPossible:
        out.negation = Negation::kPossible;
        break;
      case ModifierValue::kNonpatient:
        out.experiencer = Experiencer::kOther;
        break;
      case ModifierValue::kHistorical:
        out.temporality = Temporality::kHistorical;
        break;
      case ModifierValue::kHypothetical:
        out.temporality = Temporality::kHypothetical;
        break;
    }
  }
  return out;
}

ContextAnnotation Annotate(std::span<const std::string> tokens,
                           ConceptSpan mention, const RuleTrie& trie,
                           const RuleSet& rules) {
  CheckMention(mention, tokens.size());
  const auto matches = FindMatchesTrie(trie, tokens);
  const auto scopes = ResolveScopes(matches, rules, tokens.size());
  return AnnotateFromScopes(scopes, mention, tokens.size());
}

ContextAnnotation AnnotateNaive(std::span<const std::string> tokens,
                                ConceptSpan mention, const RuleSet& rules) {
  CheckMention(mention, tokens.size());
  const auto matches = FindMatchesNaive(rules, tokens);
  const auto scopes = ResolveScopes(matches, rules, tokens.size());
  return AnnotateFromScopes(scopes, mention, tokens.size());
}

ContextEngine::ContextEngine(RuleSet rules, MatcherBackend backend)
    : rules_(std::move(rules)), backend_(backend) {
  if (backend_ == MatcherBackend::kTrie) trie_ = BuildTrie(rules_);
}

std::vector<CueMatch> ContextEngine::FindMatches(
    std::span<const std::string> tokens) const {
  return backend_ == MatcherBackend::kTrie ? FindMatchesTrie(trie_, tokens)
                                           : FindMatchesNaive(rules_, tokens);
}

ContextAnnotation ContextEngine::Annotate(std::span<const std::string> tokens,
                                          ConceptSpan mention) const {
  return backend_ == MatcherBackend::kTrie
             ? fastctx::Annotate(tokens, mention, trie_, rules_)
             : AnnotateNaive(tokens, mention, rules_);
}

BatchResult ContextEngine::AnnotateBatch(
    std::span<const AnnotateInput> records) const {
  BatchResult result;
  result.annotations.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      result.annotations.emplace_back(
          Annotate(records[i].tokens, records[i].mention));
    } catch (const InvalidSpan& e) {
      result.annotations.emplace_back(std::nullopt);
      result.errors.push_back({i, e.what()});
    }
  }
  return result;
}

}  // namespace fastctx
