#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spectra {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

inline std::size_t popcount(std::span<const Word> a) {
  std::size_t c = 0;
  for (Word w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

inline std::size_t popcount_xor(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return c;
}

// Fixed-length bit vector over vertex indices {0..n-1}.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_(words_for(n), 0) {}

  static VertexSet full(std::size_t n) {
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v) s.insert(v);
    return s;
  }
  static VertexSet of(std::size_t n, std::span<const std::size_t> members) {
    VertexSet s(n);
    for (auto v : members) s.insert(v);
    return s;
  }
  static VertexSet of(std::size_t n, std::initializer_list<std::size_t> members) {
    VertexSet s(n);
    for (auto v : members) s.insert(v);
    return s;
  }

  std::size_t universe() const noexcept { return n_; }
  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  bool contains(std::size_t v) const { return (words_[v / kWordBits] >> (v % kWordBits)) & 1U; }
  void insert(std::size_t v) { words_[v / kWordBits] |= Word{1} << (v % kWordBits); }
  void erase(std::size_t v) { words_[v / kWordBits] &= ~(Word{1} << (v % kWordBits)); }
  void toggle(std::size_t v) { words_[v / kWordBits] ^= Word{1} << (v % kWordBits); }

  std::size_t size() const { return popcount(words_); }
  bool empty() const {
    for (Word w : words_)
      if (w) return false;
    return true;
  }

  // Smallest member; the set must be non-empty.
  std::size_t first() const {
    for (std::size_t w = 0;; ++w)
      if (words_[w]) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }

  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool is_subset_of(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& operator^=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  // Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator^(VertexSet a, const VertexSet& b) { return a ^= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend bool operator==(const VertexSet&, const VertexSet&) = default;

  VertexSet complement() const {
    VertexSet c = full(n_);
    c -= *this;
    return c;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        const auto b = static_cast<std::size_t>(std::countr_zero(bits));
        fn(w * kWordBits + b);
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for_each([&](std::size_t v) { out.push_back(v); });
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Word> words_;
};

}  // namespace spectra
