#include "fastctx/rules.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "fastctx/text.h"

namespace fastctx {

Dimension DimensionOf(ModifierValue value) {
  switch (value) {
    case ModifierValue::kNegated:
    case ModifierValue::kPossible:
      return Dimension::kNegation;
    case ModifierValue::kNonpatient:
      return Dimension::kExperiencer;
    case ModifierValue::kHistorical:
    case ModifierValue::kHypothetical:
      return Dimension::kTemporality;
  }
  return Dimension::kNegation;
}

std::string_view ToString(Direction d) {
  switch (d) {
    case Direction::kForward:
      return "forward";
    case Direction::kBackward:
      return "backward";
    case Direction::kBidirectional:
      return "bidirectional";
  }
  return "?";
}

std::string_view ToString(CueType t) {
  switch (t) {
    case CueType::kTrigger:
      return "trigger";
    case CueType::kPseudo:
      return "pseudo";
    case CueType::kTermination:
      return "termination";
  }
  return "?";
}

std::string_view ToString(ModifierValue v) {
  switch (v) {
    case ModifierValue::kNegated:
      return "negated";
    case ModifierValue::kPossible:
      return "possible";
    case ModifierValue::kNonpatient:
      return "nonpatient";
    case ModifierValue::kHistorical:
      return "historical";
    case ModifierValue::kHypothetical:
      return "hypothetical";
  }
  return "?";
}

std::string_view ToString(Dimension d) {
  switch (d) {
    case Dimension::kNegation:
      return "negation";
    case Dimension::kExperiencer:
      return "experiencer";
    case Dimension::kTemporality:
      return "temporality";
  }
  return "?";
}

std::optional<Direction> ParseDirection(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "forward") return Direction::kForward;
  if (lower == "backward") return Direction::kBackward;
  if (lower == "bidirectional" || lower == "both") {
    return Direction::kBidirectional;
  }
  return std::nullopt;
}

std::optional<CueType> ParseCueType(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "trigger") return CueType::kTrigger;
  if (lower == "pseudo") return CueType::kPseudo;
  if (lower == "termination") return CueType::kTermination;
  return std::nullopt;
}

std::optional<ModifierValue> ParseModifierValue(std::string_view s) {
  const std::string lower = ToLowerAscii(s);
  if (lower == "negated") return ModifierValue::kNegated;
  if (lower == "possible") return ModifierValue::kPossible;
  if (lower == "nonpatient") return ModifierValue::kNonpatient;
  if (lower == "historical") return ModifierValue::kHistorical;
  if (lower == "hypothetical") return ModifierValue::kHypothetical;
  return std::nullopt;
}

ContextRule MakeRule(std::vector<std::string> phrase, Direction direction,
                     CueType cue_type, ModifierValue value,
                     std::size_t window) {
  if (phrase.empty()) throw std::invalid_argument("rule phrase is empty");
  for (auto& token : phrase) {
    if (token.empty() || ContainsSpace(token)) {
      throw std::invalid_argument("invalid phrase token '" + token + "'");
    }
    token = ToLowerAscii(token);
  }
  ContextRule rule;
  rule.phrase = std::move(phrase);
  rule.direction = direction;
  rule.cue_type = cue_type;
  rule.value = value;
  rule.window = window;
  return rule;
}

MalformedRule::MalformedRule(std::size_t line, std::size_t column,
                             const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

DuplicateRule::DuplicateRule(std::size_t line, std::size_t first_line,
                             const std::string& what)
    : std::runtime_error("line " + std::to_string(line) +
                         ": duplicate of line " + std::to_string(first_line) +
                         ": " + what),
      line_(line),
      first_line_(first_line) {}

namespace {

using RuleKey = std::tuple<std::vector<std::string>, Direction, CueType,
                           ModifierValue>;

RuleKey KeyOf(const ContextRule& r) {
  return {r.phrase, r.direction, r.cue_type, r.value};
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> columns;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      columns.push_back(line.substr(pos));
      break;
    }
    columns.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return columns;
}

bool IsSkippable(std::string_view line) {
  const std::string_view trimmed = TrimAscii(line);
  return trimmed.empty() || trimmed.front() == '#';
}

}  // namespace

RuleSet::RuleSet(std::vector<ContextRule> rules,
                 std::optional<std::string> source)
    : rules_(std::move(rules)), source_(std::move(source)) {
  std::map<RuleKey, std::size_t> seen;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    rules_[i].id = static_cast<RuleId>(i);
    auto [it, inserted] = seen.emplace(KeyOf(rules_[i]), i);
    if (!inserted) {
      std::string text = SerializeRule(rules_[i]);
      text.pop_back();
      throw DuplicateRule(i + 1, it->second + 1,
                          "rule '" + text + "' repeats rule " +
                              std::to_string(it->second));
    }
  }
}

ContextRule ParseRuleLine(std::string_view line, std::size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto columns = SplitTabs(line);
  if (columns.size() != 5) {
    throw MalformedRule(line_number, 0,
                        "expected 5 tab-separated columns, found " +
                            std::to_string(columns.size()));
  }

  std::vector<std::string> phrase;
  std::size_t pos = 0;
  const std::string_view text = TrimAscii(columns[0]);
  while (pos < text.size()) {
    const std::size_t space = text.find(' ', pos);
    const std::size_t stop = space == std::string_view::npos ? text.size()
                                                             : space;
    if (stop > pos) phrase.emplace_back(text.substr(pos, stop - pos));
    pos = stop + 1;
  }
  if (phrase.empty()) throw MalformedRule(line_number, 1, "empty phrase");
  for (const auto& token : phrase) {
    if (ContainsSpace(token)) {
      throw MalformedRule(line_number, 1,
                          "phrase token '" + token + "' contains whitespace");
    }
  }

  const auto direction = ParseDirection(TrimAscii(columns[1]));
  if (!direction) {
    throw MalformedRule(line_number, 2,
                        "unknown direction '" + std::string(columns[1]) + "'");
  }
  const auto cue_type = ParseCueType(TrimAscii(columns[2]));
  if (!cue_type) {
    throw MalformedRule(line_number, 3,
                        "unknown cue type '" + std::string(columns[2]) + "'");
  }
  const auto value = ParseModifierValue(TrimAscii(columns[3]));
  if (!value) {
    throw MalformedRule(line_number, 4,
                        "unknown value '" + std::string(columns[3]) + "'");
  }

  const std::string_view window_text = TrimAscii(columns[4]);
  std::size_t window = 0;
  const auto [end, ec] = std::from_chars(
      window_text.data(), window_text.data() + window_text.size(), window);
  if (window_text.empty() || ec != std::errc() ||
      end != window_text.data() + window_text.size()) {
    throw MalformedRule(line_number, 5,
                        "window '" + std::string(columns[4]) +
                            "' is not a non-negative integer");
  }

  return MakeRule(std::move(phrase), *direction, *cue_type, *value, window);
}

RuleSet LoadRules(std::istream& in, std::optional<std::string> source) {
  std::vector<ContextRule> rules;
  std::vector<std::size_t> line_of;
  std::map<RuleKey, std::size_t> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (IsSkippable(line)) continue;
    ContextRule rule = ParseRuleLine(line, line_number);
    auto [it, inserted] = seen.emplace(KeyOf(rule), line_number);
    if (!inserted) {
      throw DuplicateRule(line_number, it->second,
                          "'" + std::string(TrimAscii(line).substr(0, 80)) +
                              "'");
    }
    rules.push_back(std::move(rule));
  }
  return RuleSet(std::move(rules), std::move(source));
}

RuleSet LoadRulesFromString(std::string_view text) {
  std::istringstream in{std::string(text)};
  return LoadRules(in);
}

RuleSet LoadRulesFromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open rule file '" + path + "'");
  return LoadRules(in, path);
}

std::string SerializeRule(const ContextRule& rule) {
  std::string out;
  for (std::size_t i = 0; i < rule.phrase.size(); ++i) {
    if (i > 0) out += ' ';
    out += rule.phrase[i];
  }
  out += '\t';
  out += ToString(rule.direction);
  out += '\t';
  out += ToString(rule.cue_type);
  out += '\t';
  out += ToString(rule.value);
  out += '\t';
  out += std::to_string(rule.window);
  out += '\n';
  return out;
}

std::string SerializeRules(const RuleSet& rules) {
  std::string out;
  for (const auto& rule : rules) out += SerializeRule(rule);
  return out;
}

}  // namespace fastctx
