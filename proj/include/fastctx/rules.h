// Rule model and the tab-delimited rule file format.
//
// One rule per line, five tab-separated columns:
//
//   phrase <TAB> direction <TAB> cue_type <TAB> value <TAB> window
//
//   can rule out	forward	trigger	negated	10
//   although	forward	termination	negated	30
//   false negative	both	pseudo	negated	30
//
// Blank lines and lines starting with '#' are ignored. All columns are
// case-insensitive; phrases are stored lowercased.

#ifndef FASTCTX_RULES_H_
#define FASTCTX_RULES_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fastctx {

using RuleId = std::uint32_t;

// Phrase token that matches exactly one arbitrary token.
inline constexpr std::string_view kWildcard = "\\w+";

enum class Direction : std::uint8_t { kForward, kBackward, kBidirectional };
enum class CueType : std::uint8_t { kTrigger, kPseudo, kTermination };
enum class ModifierValue : std::uint8_t {
  kNegated,
  kPossible,
  kNonpatient,
  kHistorical,
  kHypothetical,
};
enum class Dimension : std::uint8_t { kNegation, kExperiencer, kTemporality };

inline constexpr std::size_t kDimensionCount = 3;

// negated, possible -> negation; nonpatient -> experiencer;
// historical, hypothetical -> temporality.
Dimension DimensionOf(ModifierValue value);

std::string_view ToString(Direction d);
std::string_view ToString(CueType t);
std::string_view ToString(ModifierValue v);
std::string_view ToString(Dimension d);

// Case-insensitive; "both" is accepted for kBidirectional.
std::optional<Direction> ParseDirection(std::string_view s);
std::optional<CueType> ParseCueType(std::string_view s);
std::optional<ModifierValue> ParseModifierValue(std::string_view s);

struct ContextRule {
  RuleId id = 0;
  std::vector<std::string> phrase;
  Direction direction = Direction::kForward;
  CueType cue_type = CueType::kTrigger;
  ModifierValue value = ModifierValue::kNegated;
  std::size_t window = 0;

  Dimension dimension() const { return DimensionOf(value); }
  std::size_t length() const { return phrase.size(); }

  bool operator==(const ContextRule&) const = default;
};

// Builds a rule, lowercasing the phrase. Throws std::invalid_argument if the
// phrase is empty or a token is empty or contains whitespace.
ContextRule MakeRule(std::vector<std::string> phrase, Direction direction,
                     CueType cue_type, ModifierValue value,
                     std::size_t window);

class MalformedRule : public std::runtime_error {
 public:
  // line is 1-based (0 when unknown); column is 1-based, 0 for the whole line.
  MalformedRule(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DuplicateRule : public std::runtime_error {
 public:
  DuplicateRule(std::size_t line, std::size_t first_line,
                const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t first_line() const { return first_line_; }

 private:
  std::size_t line_;
  std::size_t first_line_;
};

// Immutable ordered collection of rules with dense ids 0..n-1.
class RuleSet {
 public:
  RuleSet() = default;

  // Reassigns ids to match position. Throws DuplicateRule if two rules share
  // (phrase, direction, cue_type, value).
  explicit RuleSet(std::vector<ContextRule> rules,
                   std::optional<std::string> source = std::nullopt);

  const std::vector<ContextRule>& rules() const { return rules_; }
  const ContextRule& operator[](RuleId id) const { return rules_[id]; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const std::optional<std::string>& source() const { return source_; }

  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  // Field-wise comparison of the rules; the source path is ignored.
  bool operator==(const RuleSet& other) const { return rules_ == other.rules_; }

 private:
  std::vector<ContextRule> rules_;
  std::optional<std::string> source_;
};

// Parses one non-blank, non-comment line. A trailing '\r' is tolerated.
ContextRule ParseRuleLine(std::string_view line, std::size_t line_number = 0);

RuleSet LoadRules(std::istream& in,
                  std::optional<std::string> source = std::nullopt);
RuleSet LoadRulesFromString(std::string_view text);
// Throws std::runtime_error if the file cannot be opened.
RuleSet LoadRulesFromFile(const std::string& path);

// Canonical form: lowercase, "bidirectional" spelled out, one '\n'-terminated
// line per rule.
std::string SerializeRule(const ContextRule& rule);
std::string SerializeRules(const RuleSet& rules);

}  // namespace fastctx

#endif  // FASTCTX_RULES_H_
