#include "rtsched/rational.h"

#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace rtsched {
namespace {

WideInt Gcd(WideInt a, WideInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    WideInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t ParseInteger(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument(fmt::format("not a rational number: '{}'", whole));
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t numerator) : num_(numerator), den_(1) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  *this = FromWide(numerator, denominator);
}

Rational Rational::FromWide(WideInt numerator, WideInt denominator) {
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  WideInt g = Gcd(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  constexpr WideInt kMax = std::numeric_limits<std::int64_t>::max();
  constexpr WideInt kMin = std::numeric_limits<std::int64_t>::min();
  if (numerator > kMax || numerator < kMin || denominator > kMax) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(numerator);
  r.den_ = static_cast<std::int64_t>(denominator);
  return r;
}

Rational Rational::Parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = ParseInteger(text.substr(0, slash), whole);
    std::int64_t d = ParseInteger(text.substr(slash + 1), whole);
    return Rational(n, d);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = static_cast<int>(ParseInteger(exp_text, whole));
    text = text.substr(0, e);
  }
  std::string digits;
  bool seen_point = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) --exponent;
    } else {
      throw std::invalid_argument(fmt::format("not a rational number: '{}'", whole));
    }
  }
  if (digits.empty() || digits.size() > 18 || exponent > 18 || exponent < -18) {
    throw std::invalid_argument(fmt::format("not a rational number: '{}'", whole));
  }
  WideInt n = ParseInteger(digits, whole);
  WideInt d = 1;
  for (; exponent > 0; --exponent) n *= 10;
  for (; exponent < 0; ++exponent) d *= 10;
  return FromWide(negative ? -n : n, d);
}

std::string Rational::ToString() const {
  if (den_ == 1) return fmt::format("{}", num_);
  return fmt::format("{}/{}", num_, den_);
}

Rational& Rational::operator+=(const Rational& other) {
  *this = FromWide(static_cast<WideInt>(num_) * other.den_ + static_cast<WideInt>(other.num_) * den_,
                   static_cast<WideInt>(den_) * other.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& other) { return *this += -other; }

Rational& Rational::operator*=(const Rational& other) {
  *this = FromWide(static_cast<WideInt>(num_) * other.num_, static_cast<WideInt>(den_) * other.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.num_ == 0) throw std::domain_error("rational division by zero");
  *this = FromWide(static_cast<WideInt>(num_) * other.den_, static_cast<WideInt>(den_) * other.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  WideInt lhs = static_cast<WideInt>(a.num_) * b.den_;
  WideInt rhs = static_cast<WideInt>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.ToString(); }

}  // namespace rtsched
