#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "qes/error.hpp"

namespace qes {

// Exact rational used for the su(1,1) Bargmann index.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t d = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (d > 1) {
      num_ /= d;
      den_ /= d;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  constexpr bool operator==(const Rational&) const = default;
  constexpr std::strong_ordering operator<=>(const Rational& o) const {
    return num_ * o.den_ <=> o.num_ * den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "a/b", integers and plain decimals ("0.25", "1.5").
  static Rational parse(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::InvalidArgument, "not a rational: '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw bad();
      return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 12 || frac.front() == '-' || frac.front() == '+') throw bad();
      const bool negative = !whole.empty() && whole.front() == '-';
      if (whole.empty() || whole == "-" || whole == "+") whole = whole.empty() ? "0" : (negative ? "-0" : "0");
      if (whole.front() == '+') whole.remove_prefix(1);
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const std::int64_t w = parse_int(whole);
      const std::int64_t f = parse_int(frac);
      const std::int64_t mag = (w < 0 ? -w : w) * scale + f;
      return Rational(negative ? -mag : mag, scale);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    return Rational(parse_int(text));
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace qes
