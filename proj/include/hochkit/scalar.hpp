/**
 * Exact scalars over Q (GMP rationals) or a prime field F_p with p < 2^31.
 *
 * A Scalar carries its field, so mixing elements of different fields is
 * caught at the point of arithmetic rather than producing garbage.
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace hochkit {

class Scalar;

/// Q when characteristic() == 0, otherwise F_p.
class Field {
public:
    Field() = default;

    static Field rationals() { return Field(); }
    static Field prime(std::uint32_t p);

    bool is_rational() const { return p_ == 0; }
    std::uint32_t characteristic() const { return p_; }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long v) const;
    Scalar from_rational(const mpq_class& q) const;
    /// Accepts "n", "-n", "p/q". Over F_p the denominator must be a unit.
    Scalar parse(std::string_view text) const;

    std::string name() const;

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Field& a, const Field& b) { return a.p_ != b.p_; }

private:
    explicit Field(std::uint32_t p) : p_(p) {}
    std::uint32_t p_ = 0;
};

class Scalar {
public:
    /// Rational zero. Prefer Field::zero() when the field is known.
    Scalar() = default;

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);

    Scalar inverse() const;
    Scalar pow(std::uint64_t e) const;

    /// Canonical text: reduced "p/q" (or "p" when q = 1) over Q, the residue in [0, p) over F_p.
    std::string str() const;

    /// Rational value; F_p residues are returned as integers in [0, p).
    mpq_class to_rational() const;

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    friend class Field;
    Scalar(Field f, mpq_class q) : field_(f), value_(std::move(q)) {}
    Scalar(Field f, std::uint32_t r) : field_(f), value_(r) {}

    void check_same(const Scalar& o) const;
    const mpq_class& q() const { return std::get<mpq_class>(value_); }
    std::uint32_t r() const { return std::get<std::uint32_t>(value_); }

    Field field_;
    std::variant<mpq_class, std::uint32_t> value_{mpq_class(0)};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Parses "Q", "Fp:<p>" or "F<p>".
Field parse_field(std::string_view text);

} // namespace hochkit
