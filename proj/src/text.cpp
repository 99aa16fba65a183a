#include "cloze/text.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace cloze {

namespace {

// Decodes one UTF-8 codepoint starting at s[i]; advances i past it.
// Invalid bytes are passed through as single-byte codepoints.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    cp = c & 0x1F;
    extra = 1;
  } else if ((c & 0xF0) == 0xE0) {
    cp = c & 0x0F;
    extra = 2;
  } else if ((c & 0xF8) == 0xF0) {
    cp = c & 0x07;
    extra = 3;
  } else {
    ++i;
    return c;
  }
  if (i + extra >= s.size() + 1 || i + extra > s.size()) {
    ++i;
    return c;
  }
  std::size_t j = i + 1;
  for (int n = 0; n < extra; ++n, ++j) {
    unsigned char cc = static_cast<unsigned char>(s[j]);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return c;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i = j;
  return cp;
}

bool is_punct_cp(char32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  // Common non-ASCII punctuation: Latin-1 marks, general punctuation
  // block (quotes, dashes, ellipsis), CJK brackets.
  if (cp == 0x00A1 || cp == 0x00BF || cp == 0x00AB || cp == 0x00BB || cp == 0x00B7)
    return true;
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  return false;
}

bool is_space_cp(char32_t cp) {
  if (cp < 0x80) return std::isspace(static_cast<int>(cp)) != 0;
  return cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x3000;
}

bool is_alnum_ascii(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

const std::unordered_set<std::string>& articles() {
  static const std::unordered_set<std::string> kArticles = {"a", "an", "the"};
  return kArticles;
}

// Abbreviations that end with '.' without terminating a sentence.
const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "mr",  "mrs", "ms",  "dr",   "prof", "st",  "mt",  "jr",   "sr",
      "vs",  "etc", "e.g", "i.e",  "eg",   "ie",  "no",  "inc",  "ltd",
      "co",  "fig", "al",  "approx", "dept", "est", "min", "max", "gen",
      "gov", "sgt", "capt", "col",  "lt",   "rev", "hon", "u.s", "u.k"};
  return kAbbrev;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

NormalizedTokens normalize(std::string_view text) {
  NormalizedTokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !articles().contains(cur)) out.tokens.push_back(cur);
    cur.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = decode_utf8(text, i);
    if (is_space_cp(cp)) {
      flush();
      continue;
    }
    if (is_punct_cp(cp)) {
      // Keep '-' when it sits between alphanumerics ("28-24").
      if (cp == U'-' && !cur.empty() && is_alnum_ascii(cur.back()) && i < text.size() &&
          is_alnum_ascii(text[i])) {
        cur.push_back('-');
      }
      continue;
    }
    if (cp < 0x80) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
    } else {
      cur.append(text.substr(start, i - start));
    }
  }
  flush();
  return out;
}

std::string join_tokens(const NormalizedTokens& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += toks.tokens[i];
  }
  return out;
}

namespace {

// Word immediately preceding position `pos` (exclusive), lowercased,
// with trailing '.' stripped but internal dots kept ("e.g").
std::string preceding_word(std::string_view text, std::size_t pos) {
  std::size_t end = pos;
  std::size_t begin = end;
  while (begin > 0 && !std::isspace(static_cast<unsigned char>(text[begin - 1]))) --begin;
  std::string w = to_lower_ascii(text.substr(begin, end - begin));
  while (!w.empty() && (w.back() == '.' || std::ispunct(static_cast<unsigned char>(w.back()))))
    w.pop_back();
  return w;
}

}  // namespace

std::vector<Span> split_sentences(std::string_view text) {
  std::vector<Span> spans;
  std::size_t n = text.size();
  std::size_t start = 0;

  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (begin < end) spans.push_back({begin, end});
  };

  std::size_t i = 0;
  while (i < n) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      // Swallow a run of terminators plus closing quotes/brackets.
      std::size_t end = i + 1;
      while (end < n && (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
                         text[end] == '"' || text[end] == '\'' || text[end] == ')'))
        ++end;
      bool at_eof = end >= n;
      bool followed_by_space = !at_eof && std::isspace(static_cast<unsigned char>(text[end]));
      bool boundary = at_eof || followed_by_space;
      if (boundary && c == '.' && end == i + 1) {
        std::string prev = preceding_word(text, i);
        // Abbreviations do not end sentences.
        if (abbreviations().contains(prev)) boundary = at_eof;
      }
      if (boundary) {
        emit(start, end);
        start = end;
        i = end;
        continue;
      }
    }
    ++i;
  }
  emit(start, n);
  return spans;
}

}  // namespace cloze
