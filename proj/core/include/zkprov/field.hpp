#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "zkprov/bytes.hpp"

namespace zkprov {

using BigInt = boost::multiprecision::cpp_int;

/// A prime field F_p with p an odd prime of at most 256 bits. Construction
/// validates the modulus (Miller-Rabin); instances are immutable and shared.
class Field {
public:
    static std::shared_ptr<const Field> make(BigInt modulus);

    /// The 254-bit scalar-field prime of the ALT_BN128 curve family.
    static const BigInt& default_modulus();

    const BigInt& modulus() const { return modulus_; }

    bool same_as(const Field& other) const { return modulus_ == other.modulus_; }

    // All inputs and outputs are canonical representatives in [0, p).
    BigInt add(const BigInt& a, const BigInt& b) const;
    BigInt sub(const BigInt& a, const BigInt& b) const;
    BigInt mul(const BigInt& a, const BigInt& b) const;
    BigInt inv(const BigInt& a) const; // throws kDivisionByZero for a = 0
    BigInt neg(const BigInt& a) const;
    BigInt reduce(const BigInt& a) const; // any integer -> canonical

    bool is_canonical(const BigInt& a) const { return a >= 0 && a < modulus_; }

private:
    explicit Field(BigInt modulus) : modulus_(std::move(modulus)) {}
    BigInt modulus_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// A canonical field element bound to its field; the boundary type for the
/// arithmetic operations. Bulk computation paths work on raw BigInt values
/// with a single Field reference instead.
struct FieldElement {
    BigInt value;
    FieldPtr field;

    FieldElement operator+(const FieldElement& rhs) const;
    FieldElement operator-(const FieldElement& rhs) const;
    FieldElement operator*(const FieldElement& rhs) const;
    FieldElement inverse() const;
    bool operator==(const FieldElement& rhs) const;
};

FieldElement make_element(BigInt value, FieldPtr field); // reduces to canonical

/// Strict canonical decimal: digits only, no leading zeros (except "0").
BigInt parse_decimal(std::string_view text);
std::string to_decimal(const BigInt& value);

/// 32-byte little-endian encoding of a canonical value (< 2^256).
Digest to_le_bytes(const BigInt& value);
BigInt from_le_bytes(const Digest& bytes);

} // namespace zkprov
