#include "minimax/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <numeric>

#include "minimax/errors.hpp"

namespace minimax {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return out;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 17) return std::nullopt;
    for (char c : frac_part) {
      if (c < '0' || c > '9') return std::nullopt;
    }
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    std::int64_t whole = 0;
    if (!int_part.empty()) {
      auto parsed = parse_int(int_part);
      if (!parsed || *parsed < 0) return std::nullopt;
      whole = *parsed;
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    auto frac = parse_int(frac_part);
    if (!frac) return std::nullopt;
    __int128 num = static_cast<__int128>(whole) * scale + *frac;
    if (num > INT64_MAX) return std::nullopt;
    return Rational(negative ? -static_cast<std::int64_t>(num) : static_cast<std::int64_t>(num), scale);
  }
  if (auto value = parse_int(text)) return Rational(*value);
  return std::nullopt;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator-(const Rational& a, const Rational& b) {
  const __int128 num = static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_;
  const __int128 den = static_cast<__int128>(a.den_) * b.den_;
  if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) {
    // Reduce before narrowing.
    __int128 x = num < 0 ? -num : num, y = den;
    while (y != 0) {
      __int128 t = x % y;
      x = y;
      y = t;
    }
    const __int128 rn = num / x, rd = den / x;
    if (rn > INT64_MAX || rn < INT64_MIN || rd > INT64_MAX) throw InputError("rational overflow");
    return Rational(static_cast<std::int64_t>(rn), static_cast<std::int64_t>(rd));
  }
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace minimax
