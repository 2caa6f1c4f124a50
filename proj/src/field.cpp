#include "qcy/field.hpp"

namespace qcy {

namespace {

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long mod_norm(long long a, long long p) {
  long long r = a % p;
  return r < 0 ? r + p : r;
}

// inverse of a mod p via extended Euclid, a in [1,p)
long long mod_inv(long long a, long long p) {
  long long t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    long long q = r / new_r;
    long long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw FieldError("element not invertible mod p");
  return mod_norm(t, p);
}

}  // namespace

Field Field::fp(long long p) {
  if (p >= (1LL << 31)) throw FieldError("characteristic too large");
  if (!is_prime(p)) throw FieldError("characteristic must be 0 or a prime");
  return Field(p);
}

void Field::check(const Scalar& a) const {
  if (a.is_residue() != (p_ != 0)) throw FieldError("scalar from the wrong field");
}

Scalar Field::zero() const { return p_ ? Scalar(0LL) : Scalar(mpq_class(0)); }
Scalar Field::one() const { return p_ ? Scalar(1LL) : Scalar(mpq_class(1)); }

Scalar Field::from_int(long long n) const {
  return p_ ? Scalar(mod_norm(n, p_)) : Scalar(mpq_class(static_cast<long>(n)));
}

Scalar Field::from_fraction(long long num, long long den) const {
  if (den == 0) throw FieldError("zero denominator");
  if (p_ == 0) {
    mpq_class q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return Scalar(q);
  }
  long long d = mod_norm(den, p_);
  if (d == 0) throw FieldError("denominator divisible by p");
  return Scalar(mod_norm(num, p_) * mod_inv(d, p_) % p_);
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  if (p_) return Scalar((a.residue() + b.residue()) % p_);
  return Scalar(mpq_class(a.rational() + b.rational()));
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  if (p_) return Scalar(mod_norm(a.residue() - b.residue(), p_));
  return Scalar(mpq_class(a.rational() - b.rational()));
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  if (p_) return Scalar(a.residue() * b.residue() % p_);
  return Scalar(mpq_class(a.rational() * b.rational()));
}

Scalar Field::neg(const Scalar& a) const {
  check(a);
  if (p_) return Scalar(mod_norm(-a.residue(), p_));
  return Scalar(mpq_class(-a.rational()));
}

Scalar Field::inv(const Scalar& a) const {
  check(a);
  if (is_zero(a)) throw FieldError("division by zero");
  if (p_) return Scalar(mod_inv(a.residue(), p_));
  return Scalar(mpq_class(1 / a.rational()));
}

Scalar Field::div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

bool Field::is_zero(const Scalar& a) const {
  check(a);
  return p_ ? a.residue() == 0 : a.rational() == 0;
}

bool Field::is_one(const Scalar& a) const {
  check(a);
  return p_ ? a.residue() == 1 : a.rational() == 1;
}

bool Field::equal(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  return a == b;
}

Scalar Field::random(std::mt19937_64& rng) const {
  if (p_) {
    std::uniform_int_distribution<long long> d(0, p_ - 1);
    return Scalar(d(rng));
  }
  std::uniform_int_distribution<long long> num(-9, 9);
  std::uniform_int_distribution<long long> den(1, 9);
  return from_fraction(num(rng), den(rng));
}

std::string Field::to_string(const Scalar& a) const {
  check(a);
  if (p_) return std::to_string(a.residue());
  return a.rational().get_str();
}

Scalar Field::parse(const std::string& text) const {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return from_int(std::stoll(text));
    return from_fraction(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw FieldError("cannot parse scalar: " + text);
  } catch (const std::out_of_range&) {
    throw FieldError("scalar out of range: " + text);
  }
}

std::string Field::describe() const { return p_ ? std::to_string(p_) : "Q"; }

}  // namespace qcy
