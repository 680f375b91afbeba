#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace circlebench {

/// Finite string over {0, ..., d-1} labelling a cylinder interval. The empty
/// word labels [0, 1].
class Word {
 public:
  using Symbol = int;

  Word() = default;
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

  /// Parse "0121". Symbols 10..35 use letters a..z.
  static Word parse(std::string_view text) {
    Word w;
    for (char ch : text) {
      if (ch >= '0' && ch <= '9') {
        w.symbols_.push_back(ch - '0');
      } else if (ch >= 'a' && ch <= 'z') {
        w.symbols_.push_back(ch - 'a' + 10);
      } else {
        throw std::invalid_argument("bad word symbol '" + std::string(1, ch) + "' in \"" +
                                    std::string(text) + "\"");
      }
    }
    return w;
  }

  /// The level-n word whose lexicographic rank among all d^n words is `index`.
  static Word from_index(std::uint64_t index, int degree, int level) {
    std::vector<Symbol> s(static_cast<std::size_t>(level));
    for (int k = level - 1; k >= 0; --k) {
      s[static_cast<std::size_t>(k)] = static_cast<Symbol>(index % static_cast<std::uint64_t>(degree));
      index /= static_cast<std::uint64_t>(degree);
    }
    return Word(std::move(s));
  }

  [[nodiscard]] std::uint64_t index(int degree) const {
    std::uint64_t idx = 0;
    for (Symbol s : symbols_) idx = idx * static_cast<std::uint64_t>(degree) + static_cast<std::uint64_t>(s);
    return idx;
  }

  [[nodiscard]] int level() const { return static_cast<int>(symbols_.size()); }
  [[nodiscard]] bool empty() const { return symbols_.empty(); }
  [[nodiscard]] std::size_t size() const { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  [[nodiscard]] auto begin() const { return symbols_.begin(); }
  [[nodiscard]] auto end() const { return symbols_.end(); }
  [[nodiscard]] auto rbegin() const { return symbols_.rbegin(); }
  [[nodiscard]] auto rend() const { return symbols_.rend(); }
  [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }

  void push_back(Symbol s) { symbols_.push_back(s); }

  [[nodiscard]] Word operator+(const Word& tail) const {
    Word out = *this;
    out.symbols_.insert(out.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    s.reserve(symbols_.size());
    for (Symbol x : symbols_) s.push_back(x < 10 ? static_cast<char>('0' + x) : static_cast<char>('a' + x - 10));
    return s;
  }

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// sigma: drop the first symbol.
inline Word left_shift(const Word& w) {
  if (w.empty()) throw std::invalid_argument("left_shift of the empty word");
  return Word(std::vector<Word::Symbol>(w.begin() + 1, w.end()));
}

/// sigma*: drop the last symbol.
inline Word drop_last(const Word& w) {
  if (w.empty()) throw std::invalid_argument("drop_last of the empty word");
  return Word(std::vector<Word::Symbol>(w.begin(), w.end() - 1));
}

}  // namespace circlebench
