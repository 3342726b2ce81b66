#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mls {

__extension__ using int128 = __int128;

// Exact rational number over 64-bit integers. Every operation is exact; an
// intermediate result that does not fit in 64 bits throws std::overflow_error
// instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design of the arithmetic type
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  [[nodiscard]] constexpr std::int64_t num() const { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const { return den_; }

  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0; }
  [[nodiscard]] constexpr bool is_positive() const { return num_ > 0; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }

  // Accepts "p/q", "-7", "2.75" or "+0.5". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  // "p" for integers, "p/q" otherwise.
  [[nodiscard]] std::string str() const;
  // Always "p/q".
  [[nodiscard]] std::string fraction_str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational& operator+=(const Rational& o) {
    if (den_ == o.den_) {
      assign(wide(num_) + o.num_, den_);
    } else {
      const std::int64_t g = std::gcd(den_, o.den_);
      const int128 lhs_scale = o.den_ / g;
      const int128 rhs_scale = den_ / g;
      assign(num_ * lhs_scale + o.num_ * rhs_scale, den_ * lhs_scale);
    }
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    const std::int64_t g1 = std::gcd(num_, o.den_);
    const std::int64_t g2 = std::gcd(o.num_, den_);
    const std::int64_t a = g1 == 0 ? 0 : num_ / g1;
    const std::int64_t b = g2 == 0 ? 0 : o.num_ / g2;
    const std::int64_t c = g2 == 0 ? den_ : den_ / g2;
    const std::int64_t d = g1 == 0 ? o.den_ : o.den_ / g1;
    assign(wide(a) * b, wide(c) * d);
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return *this *= Rational(o.den_, o.num_);
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const {
    if (num_ == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("rational negation overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    return wide(a.num_) * b.den_ <=> wide(b.num_) * a.den_;
  }

 private:
  static constexpr int128 wide(std::int64_t v) { return v; }

  static std::int64_t narrow(int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
      throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
  }

  static int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(int128 num, int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    if (den != 1) {
      const int128 g = gcd128(num, den);
      num /= g;
      den /= g;
    }
    num_ = narrow(num);
    den_ = narrow(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

inline std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return fraction_str();
}

namespace detail {

inline std::int64_t parse_int64(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("malformed rational literal '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto n = detail::parse_int64(text.substr(0, slash), text);
    const auto d = detail::parse_int64(text.substr(slash + 1), text);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(detail::parse_int64(text, text));

  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  bool negative = false;
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    negative = int_part.front() == '-';
    int_part.remove_prefix(1);
  }
  if ((int_part.empty() && frac_part.empty()) || frac_part.size() > 18) {
    throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
  }
  for (char c : frac_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
  }
  const std::int64_t whole = int_part.empty() ? 0 : detail::parse_int64(int_part, text);
  if (whole < 0) throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::int64_t frac = frac_part.empty() ? 0 : detail::parse_int64(frac_part, text);
  Rational r = Rational(whole) + Rational(frac, scale);
  return negative ? -r : r;
}

}  // namespace mls
