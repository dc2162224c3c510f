#include "hochkit/scalar.hpp"

#include <ostream>
#include <stdexcept>

namespace hochkit {

namespace {

bool is_prime(std::uint32_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

std::uint32_t reduce_mod(const mpz_class& z, std::uint32_t p)
{
    mpz_class r = z % p;
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    // p prime, a != 0: a^(p-2)
    std::uint64_t result = 1, base = a, e = p - 2;
    while (e) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

} // namespace

Field Field::prime(std::uint32_t p)
{
    if (p >= (1u << 31) || !is_prime(p))
        throw std::invalid_argument("field characteristic must be a prime below 2^31, got " + std::to_string(p));
    return Field(p);
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long v) const
{
    if (is_rational())
        return Scalar(*this, mpq_class(v));
    return Scalar(*this, reduce_mod(mpz_class(v), p_));
}

Scalar Field::from_rational(const mpq_class& q) const
{
    if (is_rational())
        return Scalar(*this, q);
    std::uint32_t den = reduce_mod(q.get_den(), p_);
    if (den == 0)
        throw std::invalid_argument("denominator of " + q.get_str() + " is divisible by " + std::to_string(p_));
    std::uint64_t num = reduce_mod(q.get_num(), p_);
    return Scalar(*this, static_cast<std::uint32_t>(num * inv_mod(den, p_) % p_));
}

Scalar Field::parse(std::string_view text) const
{
    std::string s(text);
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational number: \"" + s + "\"");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in \"" + s + "\"");
    q.canonicalize();
    return from_rational(q);
}

std::string Field::name() const
{
    return is_rational() ? "Q" : "F_" + std::to_string(p_);
}

Field parse_field(std::string_view text)
{
    std::string s(text);
    if (s == "Q")
        return Field::rationals();
    std::string digits;
    if (s.rfind("Fp:", 0) == 0)
        digits = s.substr(3);
    else if (s.size() > 1 && s[0] == 'F')
        digits = s.substr(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 10)
        throw std::invalid_argument("unknown field \"" + s + "\" (expected Q or Fp:<prime>)");
    return Field::prime(static_cast<std::uint32_t>(std::stoull(digits)));
}

void Scalar::check_same(const Scalar& o) const
{
    if (field_ != o.field_)
        throw std::logic_error("scalar field mismatch: " + field_.name() + " vs " + o.field_.name());
}

bool Scalar::is_zero() const
{
    return field_.is_rational() ? sgn(q()) == 0 : r() == 0;
}

bool Scalar::is_one() const
{
    return field_.is_rational() ? q() == 1 : r() == 1;
}

Scalar Scalar::operator+(const Scalar& o) const
{
    Scalar t = *this;
    t += o;
    return t;
}

Scalar Scalar::operator-(const Scalar& o) const
{
    Scalar t = *this;
    t -= o;
    return t;
}

Scalar Scalar::operator*(const Scalar& o) const
{
    Scalar t = *this;
    t *= o;
    return t;
}

Scalar Scalar::operator/(const Scalar& o) const
{
    return *this * o.inverse();
}

Scalar Scalar::operator-() const
{
    if (field_.is_rational())
        return Scalar(field_, mpq_class(-q()));
    std::uint32_t p = field_.characteristic();
    return Scalar(field_, r() == 0 ? 0u : p - r());
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check_same(o);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) += o.q();
    } else {
        std::uint64_t s = std::uint64_t(r()) + o.r();
        value_ = static_cast<std::uint32_t>(s % field_.characteristic());
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    check_same(o);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) -= o.q();
    } else {
        std::uint32_t p = field_.characteristic();
        std::uint64_t s = std::uint64_t(r()) + (p - o.r());
        value_ = static_cast<std::uint32_t>(s % p);
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    check_same(o);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) *= o.q();
    } else {
        std::uint64_t s = std::uint64_t(r()) * o.r();
        value_ = static_cast<std::uint32_t>(s % field_.characteristic());
    }
    return *this;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw std::domain_error("division by zero");
    if (field_.is_rational())
        return Scalar(field_, mpq_class(1 / q()));
    return Scalar(field_, inv_mod(r(), field_.characteristic()));
}

Scalar Scalar::pow(std::uint64_t e) const
{
    Scalar result = field_.one();
    Scalar base = *this;
    while (e) {
        if (e & 1)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

std::string Scalar::str() const
{
    if (field_.is_rational())
        return q().get_str();
    return std::to_string(r());
}

mpq_class Scalar::to_rational() const
{
    if (field_.is_rational())
        return q();
    return mpq_class(r());
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.field_ != b.field_)
        return false;
    if (a.field_.is_rational())
        return a.q() == b.q();
    return a.r() == b.r();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s)
{
    return os << s.str();
}

} // namespace hochkit
