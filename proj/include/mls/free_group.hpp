#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mls/edge_path.hpp"

namespace mls {

// One letter g_k^{+1} or g_k^{-1}; generators are numbered from 1.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(std::uint32_t generator, bool inverse) : gen_(generator), inverse_(inverse) {}

  [[nodiscard]] constexpr std::uint32_t generator() const { return gen_; }
  [[nodiscard]] constexpr bool is_inverse() const { return inverse_; }
  [[nodiscard]] constexpr Letter inverse() const { return {gen_, !inverse_}; }
  // g1 < g1^-1 < g2 < g2^-1 < ...
  [[nodiscard]] constexpr std::uint64_t key() const { return (std::uint64_t{gen_} << 1U) | (inverse_ ? 1U : 0U); }

  friend constexpr bool operator==(Letter a, Letter b) { return a.key() == b.key(); }
  friend constexpr auto operator<=>(Letter a, Letter b) { return a.key() <=> b.key(); }

 private:
  std::uint32_t gen_ = 1;
  bool inverse_ = false;
};

// Word in a free basis. Not reduced automatically; see free_reduce().
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  GroupWord(std::initializer_list<int> signed_generators) {
    for (int s : signed_generators) {
      if (s == 0) throw std::invalid_argument("generator index 0 does not exist");
      letters_.emplace_back(static_cast<std::uint32_t>(std::abs(s)), s < 0);
    }
  }
  static GroupWord generator(std::uint32_t k) { return GroupWord({Letter(k, false)}); }

  [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] std::uint32_t max_generator() const {
    std::uint32_t m = 0;
    for (Letter l : letters_) m = std::max(m, l.generator());
    return m;
  }

  [[nodiscard]] GroupWord inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return GroupWord(std::move(out));
  }

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b);
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  friend auto operator<=>(const GroupWord& a, const GroupWord& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

inline GroupWord free_reduce(const GroupWord& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter l : w.letters()) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return GroupWord(std::move(stack));
}

inline bool is_freely_reduced(const GroupWord& w) {
  const auto& l = w.letters();
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i] == l[i - 1].inverse()) return false;
  }
  return true;
}

inline bool GroupWord::is_identity() const { return free_reduce(*this).empty(); }

// Product, freely reduced.
inline GroupWord operator*(const GroupWord& a, const GroupWord& b) {
  std::vector<Letter> out = a.letters_;
  out.insert(out.end(), b.letters_.begin(), b.letters_.end());
  return free_reduce(GroupWord(std::move(out)));
}

inline GroupWord power(const GroupWord& w, int n) {
  GroupWord base = n < 0 ? w.inverse() : w;
  GroupWord out;
  for (int i = 0; i < std::abs(n); ++i) out = out * base;
  return out;
}

struct WordConjugacy {
  GroupWord conjugator;  // w == conjugator * core * conjugator^-1
  GroupWord core;        // cyclically reduced
};

inline WordConjugacy cyclically_reduce_word(const GroupWord& w) {
  const GroupWord r = free_reduce(w);
  const auto& l = r.letters();
  std::size_t lo = 0;
  std::size_t hi = l.size();
  while (hi - lo >= 2 && l[lo] == l[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return {GroupWord(std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(lo))),
          GroupWord(std::vector<Letter>(l.begin() + static_cast<std::ptrdiff_t>(lo),
                                        l.begin() + static_cast<std::ptrdiff_t>(hi)))};
}

inline GroupWord rotate_word(const GroupWord& w, std::size_t k) {
  auto l = w.letters();
  if (!l.empty()) std::rotate(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(k % l.size()), l.end());
  return GroupWord(std::move(l));
}

// Canonical representative of the conjugacy class: cyclically reduce, then
// take the least rotation.
inline GroupWord canonical_cyclic_word(const GroupWord& w) {
  const GroupWord core = cyclically_reduce_word(w).core;
  const auto& l = core.letters();
  return rotate_word(core, least_rotation<Letter>(l));
}

// Visits every freely reduced non-empty word over g1..g_rank of length at most
// max_len: shorter words first, then lexicographic in letter order.
template <typename Visit>
void for_each_reduced_word(std::uint32_t rank, std::size_t max_len, Visit&& visit) {
  if (rank == 0) return;
  std::vector<Letter> alphabet;
  for (std::uint32_t k = 1; k <= rank; ++k) {
    alphabet.emplace_back(k, false);
    alphabet.emplace_back(k, true);
  }
  std::vector<Letter> buf;
  for (std::size_t len = 1; len <= max_len; ++len) {
    buf.assign(len, alphabet.front());
    auto rec = [&](auto&& self, std::size_t pos) -> void {
      if (pos == len) {
        visit(GroupWord(buf));
        return;
      }
      for (Letter l : alphabet) {
        if (pos > 0 && buf[pos - 1] == l.inverse()) continue;
        buf[pos] = l;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
  }
}

inline std::size_t reduced_word_count(std::uint32_t rank, std::size_t max_len) {
  std::size_t total = 0;
  std::size_t layer = 2 * std::size_t{rank};
  for (std::size_t len = 1; len <= max_len && rank > 0; ++len) {
    total += layer;
    layer *= 2 * std::size_t{rank} - 1;
  }
  return total;
}

// ---- literals: "g1 g2^-1" ------------------------------------------------------

inline std::string format_word(const GroupWord& w) {
  std::string out;
  for (Letter l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += 'g';
    out += std::to_string(l.generator());
    if (l.is_inverse()) out += "^-1";
  }
  return out;
}

inline GroupWord parse_word(std::string_view text) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::string_view body = tok;
    bool inverse = false;
    if (body.size() > 3 && body.substr(body.size() - 3) == "^-1") {
      inverse = true;
      body.remove_suffix(3);
    }
    std::uint32_t k = 0;
    if (body.size() < 2 || body.front() != 'g') throw std::invalid_argument("bad word token '" + tok + "'");
    auto [ptr, ec] = std::from_chars(body.data() + 1, body.data() + body.size(), k);
    if (ec != std::errc() || ptr != body.data() + body.size() || k == 0) {
      throw std::invalid_argument("bad word token '" + tok + "'");
    }
    letters.emplace_back(k, inverse);
  }
  return GroupWord(std::move(letters));
}

// ---- homomorphisms ----------------------------------------------------------

class HomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Homomorphism of free groups given by the image of each source generator.
struct GroupHom {
  std::vector<GroupWord> images;  // images[k-1] is the image of g_k

  [[nodiscard]] std::size_t source_rank() const { return images.size(); }
  [[nodiscard]] std::uint32_t max_target_generator() const {
    std::uint32_t m = 0;
    for (const auto& w : images) m = std::max(m, w.max_generator());
    return m;
  }

  static GroupHom identity(std::size_t rank) {
    GroupHom h;
    for (std::size_t k = 1; k <= rank; ++k) h.images.push_back(GroupWord::generator(static_cast<std::uint32_t>(k)));
    return h;
  }

  friend bool operator==(const GroupHom&, const GroupHom&) = default;
};

inline GroupWord apply_hom(const GroupHom& h, const GroupWord& w) {
  std::vector<Letter> out;
  for (Letter l : w.letters()) {
    if (l.generator() == 0 || l.generator() > h.images.size()) {
      throw HomError("word uses g" + std::to_string(l.generator()) + " outside the source basis of rank " +
                     std::to_string(h.images.size()));
    }
    const GroupWord& img = h.images[l.generator() - 1];
    if (l.is_inverse()) {
      const GroupWord inv = img.inverse();
      out.insert(out.end(), inv.letters().begin(), inv.letters().end());
    } else {
      out.insert(out.end(), img.letters().begin(), img.letters().end());
    }
  }
  return free_reduce(GroupWord(std::move(out)));
}

// first, then second.
inline GroupHom compose(const GroupHom& second, const GroupHom& first) {
  GroupHom out;
  for (const auto& w : first.images) out.images.push_back(apply_hom(second, w));
  return out;
}

inline bool is_identity_on_generators(const GroupHom& h) {
  for (std::size_t k = 0; k < h.images.size(); ++k) {
    if (free_reduce(h.images[k]) != GroupWord::generator(static_cast<std::uint32_t>(k + 1))) return false;
  }
  return true;
}

// Certifies that `inverse` inverts `forward`: both compositions fix every generator.
inline bool certifies_isomorphism(const GroupHom& forward, const GroupHom& inverse) {
  if (forward.max_target_generator() > inverse.source_rank() || inverse.max_target_generator() > forward.source_rank()) {
    return false;
  }
  return is_identity_on_generators(compose(inverse, forward)) && is_identity_on_generators(compose(forward, inverse));
}

struct HomPair {
  std::string name;
  GroupHom forward;
  GroupHom inverse;
  bool has_inverse = false;
};

// Hom file:
//   hom <name>
//   gen g1 = <word>        (one line per source generator, in order)
//   inverse
//   gen g1 = <word>        (images under the inverse hom)
inline HomPair parse_hom(std::istream& in) {
  HomPair out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  GroupHom* current = &out.forward;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head)) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (!have_header) {
      if (head != "hom" || !(tokens >> out.name)) throw HomError(where + "expected 'hom <name>'");
      have_header = true;
      continue;
    }
    if (head == "inverse") {
      if (out.has_inverse) throw HomError(where + "duplicate inverse section");
      out.has_inverse = true;
      current = &out.inverse;
      continue;
    }
    if (head != "gen") throw HomError(where + "unknown record '" + head + "'");
    std::string gen;
    std::string eq;
    if (!(tokens >> gen >> eq) || eq != "=") throw HomError(where + "expected 'gen g<k> = <word>'");
    const std::string expected = "g" + std::to_string(current->images.size() + 1);
    if (gen != expected) throw HomError(where + "expected " + expected + ", generators must appear in index order");
    std::string rest;
    std::getline(tokens, rest);
    try {
      current->images.push_back(parse_word(rest));
    } catch (const std::invalid_argument& e) {
      throw HomError(where + e.what());
    }
  }
  if (!have_header) throw HomError("missing 'hom <name>' header");
  return out;
}

inline HomPair parse_hom(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_hom(in);
}

inline HomPair read_hom_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HomError("cannot open " + path);
  return parse_hom(in);
}

inline std::string format_hom(const HomPair& h) {
  std::ostringstream out;
  out << "hom " << (h.name.empty() ? "phi" : h.name) << '\n';
  for (std::size_t k = 0; k < h.forward.images.size(); ++k) {
    out << "gen g" << k + 1 << " = " << format_word(h.forward.images[k]) << '\n';
  }
  if (h.has_inverse) {
    out << "inverse\n";
    for (std::size_t k = 0; k < h.inverse.images.size(); ++k) {
      out << "gen g" << k + 1 << " = " << format_word(h.inverse.images[k]) << '\n';
    }
  }
  return out.str();
}

}  // namespace mls
