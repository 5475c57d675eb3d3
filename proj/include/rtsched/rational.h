#ifndef RTSCHED_RATIONAL_H_
#define RTSCHED_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace rtsched {

__extension__ using WideInt = __int128;

// Exact fraction with a positive denominator, always stored in lowest terms.
// Intermediate products are formed in 128 bits; results that do not fit in
// int64 raise std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator);  // NOLINT: implicit from integers
  Rational(std::int64_t numerator, std::int64_t denominator);

  // Accepts "3", "-7/20", "0.765" or "1e-3". Decimal forms are converted
  // exactly, so "0.9" becomes 9/10.
  static Rational Parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string ToString() const;

  bool IsPositive() const { return num_ > 0; }
  Rational PositivePart() const { return num_ > 0 ? *this : Rational(); }

  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational FromWide(WideInt numerator, WideInt denominator);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace rtsched

#endif  // RTSCHED_RATIONAL_H_
