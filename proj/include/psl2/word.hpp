#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "psl2/common.hpp"

namespace psl2 {

/// One letter of a word in a free group: generator index and exponent +-1.
struct Letter {
  uint32_t gen = 0;
  int32_t exp = 1;

  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
  bool operator!=(const Letter& o) const { return !(*this == o); }
};

struct Word {
  std::vector<Letter> letters;

  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator!=(const Word& o) const { return letters != o.letters; }
  bool empty() const { return letters.empty(); }
  size_t size() const { return letters.size(); }
};

inline Word make_word(std::initializer_list<int32_t> signed_gens) {
  // Convenience: 1-based signed indices, negative for inverse.
  Word w;
  for (int32_t g : signed_gens) {
    check(g != 0, "word letters are nonzero signed indices");
    w.letters.push_back({uint32_t(g > 0 ? g - 1 : -g - 1), g > 0 ? 1 : -1});
  }
  return w;
}

inline Word free_reduce(const Word& w) {
  Word out;
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().gen == l.gen &&
        out.letters.back().exp == -l.exp) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

inline Word word_inverse(const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back({it->gen, -it->exp});
  return out;
}

inline Word word_mul(const Word& a, const Word& b) {
  Word out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return free_reduce(out);
}

inline Word word_pow(const Word& w, uint32_t k) {
  Word out;
  out.letters.reserve(w.size() * k);
  for (uint32_t i = 0; i < k; ++i)
    out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  return out;
}

struct Presentation {
  uint32_t generator_count = 0;
  std::vector<std::string> names;  // size generator_count
  std::vector<Word> relators;

  friend bool operator==(const Presentation&, const Presentation&) = default;

  void validate() const {
    check(names.size() == generator_count, "presentation name list size mismatch");
    for (const Word& r : relators)
      for (const Letter& l : r.letters) {
        check(l.gen < generator_count, "relator uses out-of-range generator");
        check(l.exp == 1 || l.exp == -1, "letter exponent must be +-1");
      }
  }
};

/// Default generator names x1, x2, ... used when building presentations in
/// code rather than from a file.
inline std::vector<std::string> default_names(uint32_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (uint32_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

class ParseError : public UsageError {
 public:
  ParseError(size_t line, size_t col, const std::string& msg)
      : UsageError("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " +
                   msg),
        line_(line),
        col_(col) {}
  size_t line() const { return line_; }
  size_t col() const { return col_; }

 private:
  size_t line_;
  size_t col_;
};

namespace detail {

inline bool is_name_start(char c) { return std::isalpha(uint8_t(c)) || c == '_'; }
inline bool is_name_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }

struct WordParser {
  const std::string& s;
  size_t line;
  size_t pos = 0;
  const std::vector<std::string>& names;

  void skip_spaces() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  [[noreturn]] void fail(size_t at, const std::string& msg) const {
    throw ParseError(line, at + 1, msg);
  }

  uint32_t parse_exponent() {
    ++pos;  // consume '^'
    size_t start = pos;
    while (pos < s.size() && std::isdigit(uint8_t(s[pos]))) ++pos;
    if (start == pos) fail(start, "expected integer exponent after '^'");
    uint64_t k = 0;
    for (size_t i = start; i < pos; ++i) {
      k = k * 10 + uint64_t(s[i] - '0');
      if (k > 1'000'000) fail(start, "exponent too large");
    }
    if (k == 0) fail(start, "exponent must be >= 1");
    return static_cast<uint32_t>(k);
  }

  uint32_t lookup(size_t at, const std::string& name) const {
    for (uint32_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    fail(at, "unknown generator '" + name + "'");
  }

  // Parses atoms until end of line or an unconsumed ')'.
  Word parse_word(bool inside_group, size_t open_at) {
    Word w;
    for (;;) {
      skip_spaces();
      if (pos >= s.size()) {
        if (inside_group) fail(open_at, "unclosed '('");
        return w;
      }
      char c = s[pos];
      if (c == ')') {
        if (!inside_group) fail(pos, "unmatched ')'");
        return w;
      }
      if (c == '(') {
        size_t at = pos++;
        Word inner = parse_word(true, at);
        ++pos;  // consume ')'
        skip_spaces();
        if (pos >= s.size() || s[pos] != '^') fail(at, "expected '^k' after '(...)'");
        uint32_t k = parse_exponent();
        Word rep = word_pow(inner, k);
        w.letters.insert(w.letters.end(), rep.letters.begin(), rep.letters.end());
        continue;
      }
      if (!is_name_start(c)) fail(pos, "unexpected character");
      size_t at = pos;
      while (pos < s.size() && is_name_char(s[pos])) ++pos;
      uint32_t gen = lookup(at, s.substr(at, pos - at));
      if (pos < s.size() && s[pos] == '\'') {
        ++pos;
        w.letters.push_back({gen, -1});
      } else if (pos < s.size() && s[pos] == '^') {
        uint32_t k = parse_exponent();
        for (uint32_t i = 0; i < k; ++i) w.letters.push_back({gen, 1});
      } else {
        w.letters.push_back({gen, 1});
      }
    }
  }
};

}  // namespace detail

/// File format: one `gens: a b c` line, then `rel: <word>` lines. A word is a
/// sequence of atoms: name, name' (inverse), name^k, or (word)^k with k >= 1.
/// `#` starts a comment.
inline Presentation parse_presentation(const std::string& text) {
  Presentation pres;
  bool saw_gens = false;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    size_t next = end + 1;

    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      if (end == text.size()) break;
      start = next;
      continue;
    }

    if (line.compare(first, 5, "gens:") == 0) {
      if (saw_gens) throw ParseError(line_no, first + 1, "duplicate 'gens:' line");
      saw_gens = true;
      size_t pos = first + 5;
      while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
          ++pos;
        if (pos >= line.size()) break;
        if (!detail::is_name_start(line[pos]))
          throw ParseError(line_no, pos + 1, "invalid generator name");
        size_t at = pos;
        while (pos < line.size() && detail::is_name_char(line[pos])) ++pos;
        std::string name = line.substr(at, pos - at);
        for (const std::string& n : pres.names)
          if (n == name) throw ParseError(line_no, at + 1, "duplicate generator '" + name + "'");
        pres.names.push_back(name);
      }
      if (pres.names.empty())
        throw ParseError(line_no, first + 1, "'gens:' line names no generators");
      pres.generator_count = static_cast<uint32_t>(pres.names.size());
    } else if (line.compare(first, 4, "rel:") == 0) {
      if (!saw_gens) throw ParseError(line_no, first + 1, "'rel:' before 'gens:'");
      detail::WordParser wp{line, line_no, first + 4, pres.names};
      pres.relators.push_back(wp.parse_word(false, 0));
    } else {
      throw ParseError(line_no, first + 1, "expected 'gens:' or 'rel:'");
    }

    if (end == text.size()) break;
    start = next;
  }
  if (!saw_gens) throw ParseError(line_no ? line_no : 1, 1, "missing 'gens:' line");
  pres.validate();
  return pres;
}

inline std::string to_string(const Word& w, const std::vector<std::string>& names) {
  std::string out;
  for (const Letter& l : w.letters) {
    if (!out.empty()) out += ' ';
    check(l.gen < names.size(), "word letter out of range for name list");
    out += names[l.gen];
    if (l.exp < 0) out += '\'';
  }
  return out;
}

inline std::string serialize_presentation(const Presentation& pres) {
  pres.validate();
  std::string out = "gens:";
  for (const std::string& n : pres.names) {
    out += ' ';
    out += n;
  }
  out += '\n';
  for (const Word& r : pres.relators) {
    out += "rel:";
    std::string body = to_string(r, pres.names);
    if (!body.empty()) {
      out += ' ';
      out += body;
    }
    out += '\n';
  }
  return out;
}

}  // namespace psl2
