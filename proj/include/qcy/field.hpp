#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace qcy {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*
 * Exact field element in canonical form: a residue in [0,p) over F_p,
 * a reduced fraction (positive denominator) over the rationals.
 * The tag must match the Field the value is used with; Field operations
 * check this.
 */
class Scalar {
 public:
  Scalar() : v_(static_cast<long long>(0)) {}
  explicit Scalar(long long residue) : v_(residue) {}
  explicit Scalar(mpq_class q) : v_(std::move(q)) {}

  bool is_residue() const { return std::holds_alternative<long long>(v_); }
  long long residue() const { return std::get<long long>(v_); }
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }

  bool operator==(const Scalar& o) const { return v_ == o.v_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  std::variant<long long, mpq_class> v_;
};

/*
 * F_p for a prime p, or the rationals when characteristic() == 0.
 * All operations are pure; Field is freely copyable and shareable.
 */
class Field {
 public:
  static Field rationals() { return Field(0); }
  static Field fp(long long p);

  long long characteristic() const { return p_; }
  bool is_rationals() const { return p_ == 0; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long n) const;
  Scalar from_fraction(long long num, long long den) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;  // throws FieldError on zero
  Scalar div(const Scalar& a, const Scalar& b) const;

  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;
  bool equal(const Scalar& a, const Scalar& b) const;

  Scalar random(std::mt19937_64& rng) const;

  std::string to_string(const Scalar& a) const;
  // Accepts "n" or "n/d"; reduces into canonical form.
  Scalar parse(const std::string& text) const;

  std::string describe() const;  // "2", "3", ... or "Q"

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

 private:
  explicit Field(long long p) : p_(p) {}
  void check(const Scalar& a) const;
  long long p_;  // 0 means rationals
};

}  // namespace qcy
