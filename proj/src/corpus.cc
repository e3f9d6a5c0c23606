#include "fastctx/corpus.h"

#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <tuple>

#include "fastctx/random.h"
#include "fastctx/text.h"

namespace fastctx {

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (IsAsciiSpace(c)) {
      flush();
    } else if (u < 0x80 && std::ispunct(u) && c != '-' && c != '\'' &&
               c != '_') {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current += ToLowerAscii(c);
    }
  }
  flush();
  return tokens;
}

GoldLabels GoldFromAnnotation(const ContextAnnotation& a) {
  return {a.negation, a.experiencer, a.temporality};
}

bool IsValid(const CorpusRecord& record) {
  return record.mention.start < record.mention.end &&
         record.mention.end <= record.tokens.size();
}

CorpusError::CorpusError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

template <typename T>
T ParseGoldValue(const Json& gold, const char* key,
                 std::optional<T> (*parse)(std::string_view),
                 std::size_t line) {
  const Json& v = gold.at(key);
  if (!v.is_string()) {
    throw CorpusError(line, std::string("gold.") + key + " must be a string");
  }
  const auto parsed = parse(v.get<std::string>());
  if (!parsed) {
    throw CorpusError(line, std::string("unknown gold.") + key + " value '" +
                                v.get<std::string>() + "'");
  }
  return *parsed;
}

}  // namespace

CorpusRecord RecordFromJson(const Json& j, std::size_t line) {
  if (!j.is_object()) throw CorpusError(line, "record is not a JSON object");
  CorpusRecord record;

  if (j.contains("tokens")) {
    const Json& tokens = j["tokens"];
    if (!tokens.is_array()) throw CorpusError(line, "\"tokens\" is not a list");
    record.tokens.reserve(tokens.size());
    for (const auto& t : tokens) {
      if (!t.is_string()) throw CorpusError(line, "non-string token");
      std::string token = ToLowerAscii(t.get<std::string>());
      if (token.empty() || ContainsSpace(token)) {
        throw CorpusError(line, "token '" + token + "' is empty or has spaces");
      }
      record.tokens.push_back(std::move(token));
    }
  } else if (j.contains("text")) {
    if (!j["text"].is_string()) throw CorpusError(line, "\"text\" not a string");
    record.tokens = Tokenize(j["text"].get<std::string>());
  } else {
    throw CorpusError(line, "missing \"tokens\"");
  }

  if (!j.contains("concept")) throw CorpusError(line, "missing \"concept\"");
  const Json& concept_span = j["concept"];
  if (!concept_span.is_array() || concept_span.size() != 2 ||
      !concept_span[0].is_number_unsigned() ||
      !concept_span[1].is_number_unsigned()) {
    throw CorpusError(line,
                      "\"concept\" must be [start, end] with non-negative "
                      "integers");
  }
  record.mention = {concept_span[0].get<std::size_t>(),
                    concept_span[1].get<std::size_t>()};

  if (j.contains("gold")) {
    const Json& gold = j["gold"];
    if (!gold.is_object()) throw CorpusError(line, "\"gold\" is not an object");
    for (const auto& [key, _] : gold.items()) {
      if (key != "negation" && key != "experiencer" && key != "temporality") {
        throw CorpusError(line, "unknown gold key '" + key + "'");
      }
    }
    if (gold.contains("negation")) {
      record.gold.negation =
          ParseGoldValue<Negation>(gold, "negation", ParseNegation, line);
    }
    if (gold.contains("experiencer")) {
      record.gold.experiencer = ParseGoldValue<Experiencer>(
          gold, "experiencer", ParseExperiencer, line);
    }
    if (gold.contains("temporality")) {
      record.gold.temporality = ParseGoldValue<Temporality>(
          gold, "temporality", ParseTemporality, line);
    }
  }
  return record;
}

Json RecordToJson(const CorpusRecord& record) {
  Json j;
  j["tokens"] = record.tokens;
  j["concept"] = {record.mention.start, record.mention.end};
  if (!record.gold.empty()) {
    Json gold = Json::object();
    if (record.gold.negation) gold["negation"] = ToString(*record.gold.negation);
    if (record.gold.experiencer) {
      gold["experiencer"] = ToString(*record.gold.experiencer);
    }
    if (record.gold.temporality) {
      gold["temporality"] = ToString(*record.gold.temporality);
    }
    j["gold"] = std::move(gold);
  }
  return j;
}

Json AnnotationToJson(const ContextAnnotation& a) {
  Json j;
  j["negation"] = ToString(a.negation);
  j["experiencer"] = ToString(a.experiencer);
  j["temporality"] = ToString(a.temporality);
  Json evidence = Json::object();
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    if (!a.evidence[d]) continue;
    const CueMatch& cue = *a.evidence[d];
    evidence[std::string(ToString(static_cast<Dimension>(d)))] = {
        {"rule", cue.rule_id}, {"span", {cue.span.start, cue.span.end}}};
  }
  j["evidence"] = std::move(evidence);
  return j;
}

std::vector<CorpusRecord> ReadCorpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimAscii(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw CorpusError(line_number, std::string("invalid JSON: ") + e.what());
    }
    records.push_back(RecordFromJson(j, line_number));
  }
  return records;
}

std::vector<CorpusRecord> ReadCorpusFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(0, "cannot open corpus file '" + path + "'");
  return ReadCorpus(in);
}

void WriteCorpus(std::ostream& out, std::span<const CorpusRecord> records) {
  for (const auto& record : records) out << RecordToJson(record).dump() << '\n';
}

void GeneratorConfig::Validate() const {
  if (sentence_count == 0) throw ConfigError("sentence_count must be positive");
  if (vocab_size == 0) throw ConfigError("vocab_size must be positive");
  if (rule_count == 0) throw ConfigError("rule_count must be positive");
  if (min_length == 0) throw ConfigError("min_length must be positive");
  if (min_length > max_length) {
    throw ConfigError("min_length " + std::to_string(min_length) +
                      " exceeds max_length " + std::to_string(max_length));
  }
  if (!(cue_injection_rate >= 0.0 && cue_injection_rate <= 1.0)) {
    throw ConfigError("cue_injection_rate must lie in [0, 1]");
  }
}

namespace {

std::string FillerWord(std::size_t i) { return "w" + std::to_string(i); }

constexpr std::array<std::string_view, 48> kCueWords = {
    "no",        "not",       "denies",    "denied",     "without",
    "absent",    "negative",  "free",      "rule",       "out",
    "ruled",     "evidence",  "of",        "for",        "can",
    "cannot",    "exclude",   "possible",  "probable",   "likely",
    "suspected", "question",  "may",       "might",      "concern",
    "history",   "previous",  "prior",     "past",       "family",
    "mother",    "father",    "sister",    "brother",    "if",
    "should",    "return",    "risk",      "although",   "but",
    "however",   "though",    "except",    "false",      "resolved",
    "status",    "post",      "since"};

constexpr std::size_t kRuleVocabSize = 600;

std::string RuleWord(std::size_t i) {
  if (i < kCueWords.size()) return std::string(kCueWords[i]);
  return "cue" + std::to_string(i);
}

}  // namespace

RuleSet GenerateRules(std::uint64_t seed, std::size_t count) {
  Sampler rng(seed);
  std::vector<ContextRule> rules;
  rules.reserve(count);
  std::set<std::tuple<std::vector<std::string>, Direction, CueType,
                      ModifierValue>>
      seen;

  constexpr std::array<double, 5> kLengthWeights = {0.15, 0.35, 0.30, 0.12,
                                                    0.08};
  constexpr std::array<double, 3> kTypeWeights = {0.80, 0.10, 0.10};
  constexpr std::array<double, 5> kValueWeights = {0.40, 0.20, 0.15, 0.15,
                                                   0.10};
  constexpr std::array<double, 3> kDirectionWeights = {0.60, 0.25, 0.15};

  while (rules.size() < count) {
    std::vector<std::string> phrase;
    if (rng.Chance(0.05)) {
      const std::size_t length = rng.Between(3, 5);
      const std::size_t wildcard_at = rng.Between(1, length - 2);
      for (std::size_t k = 0; k < length; ++k) {
        phrase.push_back(k == wildcard_at ? std::string(kWildcard)
                                          : RuleWord(rng.Below(kRuleVocabSize)));
      }
    } else {
      const std::size_t length = rng.Weighted(kLengthWeights) + 1;
      for (std::size_t k = 0; k < length; ++k) {
        phrase.push_back(RuleWord(rng.Below(kRuleVocabSize)));
      }
    }
    const auto cue_type = static_cast<CueType>(rng.Weighted(kTypeWeights));
    const auto value = static_cast<ModifierValue>(rng.Weighted(kValueWeights));
    const auto direction =
        static_cast<Direction>(rng.Weighted(kDirectionWeights));
    const std::size_t window =
        cue_type == CueType::kTrigger ? rng.Between(1, 30) : 30;

    ContextRule rule =
        MakeRule(std::move(phrase), direction, cue_type, value, window);
    if (!seen.emplace(rule.phrase, rule.direction, rule.cue_type, rule.value)
             .second) {
      continue;
    }
    rules.push_back(std::move(rule));
  }
  return RuleSet(std::move(rules));
}

std::vector<CorpusRecord> GenerateCorpus(const GeneratorConfig& config,
                                         const RuleSet& rules) {
  config.Validate();
  Sampler rng(config.seed);

  std::vector<const ContextRule*> injectable;
  for (const auto& rule : rules) {
    if (rule.cue_type == CueType::kTrigger && rule.window > 0) {
      injectable.push_back(&rule);
    }
  }

  const auto filler = [&] { return FillerWord(rng.Below(config.vocab_size)); };

  std::vector<CorpusRecord> corpus;
  corpus.reserve(config.sentence_count);
  for (std::size_t i = 0; i < config.sentence_count; ++i) {
    std::size_t length = rng.Between(config.min_length, config.max_length);
    const std::size_t mention_len = rng.Between(1, std::min<std::size_t>(3, length));

    const ContextRule* cue = nullptr;
    if (!injectable.empty() && rng.Chance(config.cue_injection_rate)) {
      cue = injectable[rng.Below(injectable.size())];
    }

    CorpusRecord record;
    if (cue == nullptr) {
      const std::size_t start = rng.Below(length - mention_len + 1);
      for (std::size_t k = 0; k < length; ++k) record.tokens.push_back(filler());
      record.mention = {start, start + mention_len};
    } else {
      bool cue_first = cue->direction == Direction::kForward;
      if (cue->direction == Direction::kBidirectional) cue_first = rng.Chance(0.5);
      const std::size_t phrase_len = cue->length();
      length = std::max(length, phrase_len + mention_len);
      const std::size_t room = length - phrase_len - mention_len;
      const std::size_t gap = rng.Below(std::min(cue->window, room + 1));
      const std::size_t outside = room - gap;
      const std::size_t lead = rng.Below(outside + 1);

      std::vector<std::string> cue_tokens;
      for (const auto& word : cue->phrase) {
        cue_tokens.push_back(word == kWildcard ? filler() : word);
      }
      for (std::size_t k = 0; k < lead; ++k) record.tokens.push_back(filler());
      const auto append_mention = [&] {
        record.mention.start = record.tokens.size();
        for (std::size_t k = 0; k < mention_len; ++k) {
          record.tokens.push_back(filler());
        }
        record.mention.end = record.tokens.size();
      };
      if (cue_first) {
        record.tokens.insert(record.tokens.end(), cue_tokens.begin(),
                             cue_tokens.end());
        for (std::size_t k = 0; k < gap; ++k) record.tokens.push_back(filler());
        append_mention();
      } else {
        append_mention();
        for (std::size_t k = 0; k < gap; ++k) record.tokens.push_back(filler());
        record.tokens.insert(record.tokens.end(), cue_tokens.begin(),
                             cue_tokens.end());
      }
      while (record.tokens.size() < length) record.tokens.push_back(filler());
    }
    record.gold = GoldFromAnnotation(
        AnnotateNaive(record.tokens, record.mention, rules));
    corpus.push_back(std::move(record));
  }
  return corpus;
}

}  // namespace fastctx
