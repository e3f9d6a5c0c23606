// Tokenization, the JSON-lines corpus format, and seeded generators for
// synthetic rules and corpora.
//
// Corpus file: one JSON object per line,
//
//   {"tokens":["no","atrial","septal","defect"],"concept":[1,4],
//    "gold":{"negation":"negated","experiencer":"patient"}}
//
// "text" may replace "tokens"; it is run through Tokenize. "gold" and any
// of its keys are optional.

#ifndef FASTCTX_CORPUS_H_
#define FASTCTX_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fastctx/engine.h"
#include "fastctx/rules.h"

namespace fastctx {

using Json = nlohmann::ordered_json;

// Splits on whitespace, detaches ASCII punctuation other than '-', '\'' and
// '_' into single-character tokens, and lowercases.
std::vector<std::string> Tokenize(std::string_view text);

struct GoldLabels {
  std::optional<Negation> negation;
  std::optional<Experiencer> experiencer;
  std::optional<Temporality> temporality;

  bool empty() const { return !negation && !experiencer && !temporality; }
  bool operator==(const GoldLabels&) const = default;
};

GoldLabels GoldFromAnnotation(const ContextAnnotation& a);

struct CorpusRecord {
  std::vector<std::string> tokens;
  ConceptSpan mention;
  GoldLabels gold;

  bool operator==(const CorpusRecord&) const = default;
};

// True when the mention is a non-empty interval inside the tokens.
bool IsValid(const CorpusRecord& record);

class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structural parsing only: a mention outside the tokens is accepted here and
// rejected later by the engine. Tokens are lowercased.
CorpusRecord RecordFromJson(const Json& j, std::size_t line = 0);
Json RecordToJson(const CorpusRecord& record);
Json AnnotationToJson(const ContextAnnotation& a);

std::vector<CorpusRecord> ReadCorpus(std::istream& in);
std::vector<CorpusRecord> ReadCorpusFile(const std::string& path);
void WriteCorpus(std::ostream& out, std::span<const CorpusRecord> records);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t sentence_count = 1000;
  std::size_t vocab_size = 2000;
  std::size_t min_length = 8;
  std::size_t max_length = 40;
  double cue_injection_rate = 0.5;
  std::size_t rule_count = 849;

  // Throws ConfigError.
  void Validate() const;
};

// Filler tokens never collide with generated rule words. Each record gets a
// mention and, with probability cue_injection_rate, one trigger phrase placed
// inside that trigger's window. A record grows past max_length when the
// phrase would not fit. Gold labels come from the naive engine.
std::vector<CorpusRecord> GenerateCorpus(const GeneratorConfig& config,
                                         const RuleSet& rules);

// Rules are drawn sequentially from one seeded stream, so a smaller count
// yields a prefix of a larger one.
RuleSet GenerateRules(std::uint64_t seed, std::size_t count);

}  // namespace fastctx

#endif  // FASTCTX_CORPUS_H_
