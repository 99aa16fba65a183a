#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cloze {

// Half-open [begin,end) byte range into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool overlaps(const Span& other) const {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const Span&) const = default;
};

// Canonical token form used by the F1 comparison: lowercase, no
// punctuation, no English articles.
struct NormalizedTokens {
  std::vector<std::string> tokens;

  bool operator==(const NormalizedTokens&) const = default;
};

NormalizedTokens normalize(std::string_view text);

std::string join_tokens(const NormalizedTokens& toks);

std::string to_lower_ascii(std::string_view s);

// Rule-based sentence splitter. Spans are trimmed of surrounding
// whitespace, disjoint, ordered, and cover all non-whitespace text.
std::vector<Span> split_sentences(std::string_view text);

}  // namespace cloze
