#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "margulis/error.hpp"

namespace margulis {

/// Word in the free group on k generators. Letters are nonzero signed
/// 1-based indices: +i for the i-th generator, -i for its inverse.
struct FreeWord {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }

  friend bool operator==(const FreeWord& a, const FreeWord& b) { return a.letters == b.letters; }
};

/// Canonical reduced form: adjacent cancelling pairs removed until none
/// remain.
inline FreeWord reduce_word(const FreeWord& w) {
  FreeWord out;
  out.letters.reserve(w.letters.size());
  for (int letter : w.letters) {
    if (letter == 0) fail(Errc::InvalidInput, "reduce_word: zero letter");
    if (!out.letters.empty() && out.letters.back() == -letter)
      out.letters.pop_back();
    else
      out.letters.push_back(letter);
  }
  return out;
}

inline FreeWord word_inverse(const FreeWord& w) {
  FreeWord out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

inline FreeWord word_concat(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return reduce_word(out);
}

/// Enumeration rank of a letter: 1 < 1' < 2 < 2' < ...
inline int letter_rank(int letter) { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }

inline int letter_from_rank(int rank) {
  const int index = rank / 2 + 1;
  return (rank % 2 == 0) ? index : -index;
}

/// Length-lexicographic comparison under the letter order above.
inline bool word_less(const FreeWord& a, const FreeWord& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (int i = 0; i < a.length(); ++i) {
    const int ra = letter_rank(a.letters[static_cast<std::size_t>(i)]);
    const int rb = letter_rank(b.letters[static_cast<std::size_t>(i)]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

/// Number of reduced words of exactly the given length: 2k (2k-1)^{len-1}.
inline std::uint64_t words_at_length(int k, int len) {
  if (len == 0) return 1;
  std::uint64_t count = static_cast<std::uint64_t>(2 * k);
  for (int i = 1; i < len; ++i) count *= static_cast<std::uint64_t>(2 * k - 1);
  return count;
}

/// All reduced words of length 1..max_len in canonical order.
inline std::vector<FreeWord> enumerate_words(int k, int max_len) {
  if (k < 1) fail(Errc::InvalidInput, "enumerate_words: at least one generator required");
  std::vector<FreeWord> out;
  std::vector<FreeWord> current;
  for (int rank = 0; rank < 2 * k; ++rank) current.push_back(FreeWord{{letter_from_rank(rank)}});
  for (int len = 1; len <= max_len; ++len) {
    out.insert(out.end(), current.begin(), current.end());
    if (len == max_len) break;
    std::vector<FreeWord> next;
    next.reserve(current.size() * static_cast<std::size_t>(2 * k - 1));
    for (const FreeWord& w : current)
      for (int rank = 0; rank < 2 * k; ++rank) {
        const int letter = letter_from_rank(rank);
        if (letter == -w.letters.back()) continue;  // would cancel
        FreeWord extended = w;
        extended.letters.push_back(letter);
        next.push_back(std::move(extended));
      }
    current = std::move(next);
  }
  return out;
}

/// ASCII rendering: generators a, b, c, ... with "'" marking an inverse;
/// the identity renders as "e".
inline std::string word_to_string(const FreeWord& w) {
  if (w.empty()) return "e";
  std::string out;
  for (int letter : w.letters) {
    const int index = std::abs(letter) - 1;
    if (index >= 26) fail(Errc::InvalidInput, "word_to_string: more than 26 generators");
    out.push_back(static_cast<char>('a' + index));
    if (letter < 0) out.push_back('\'');
  }
  return out;
}

}  // namespace margulis
