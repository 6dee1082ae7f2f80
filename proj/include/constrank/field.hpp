#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "constrank/error.hpp"

namespace constrank {

/// Element code of a finite field: 0..q-1, with 0 the additive and 1 the
/// multiplicative identity. For GF(p^e) the code is the base-p digit vector of
/// the residue polynomial, constant coefficient least significant.
using Elem = std::uint16_t;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

/// GF(p^e) with log/exp tables over a primitive element. Immutable once built;
/// share it through `Field`.
class FieldSpec {
public:
    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t e() const noexcept { return e_; }
    std::uint32_t q() const noexcept { return q_; }
    bool is_prime_field() const noexcept { return e_ == 1; }

    /// Coefficients constant term first, as supplied; empty for prime fields.
    const std::vector<Elem>& modulus() const noexcept { return modulus_; }

    bool contains(Elem a) const noexcept { return a < q_; }

    Elem add(Elem a, Elem b) const noexcept {
        if (p_ == 2) return static_cast<Elem>(a ^ b);
        if (e_ == 1) {
            const std::uint32_t s = std::uint32_t{a} + b;
            return static_cast<Elem>(s >= p_ ? s - p_ : s);
        }
        if (!add_table_.empty()) return add_table_[std::size_t{a} * q_ + b];
        return add_digits(a, b);
    }
    Elem neg(Elem a) const noexcept { return neg_table_[a]; }
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg_table_[b]); }
    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_table_[std::size_t{log_table_[a]} + log_table_[b]];
    }
    /// Throws DivisionByZero for a == 0.
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t k) const noexcept;

    /// Generator of the multiplicative group used for the tables.
    Elem primitive() const noexcept { return exp_table_[1 % exp_table_.size()]; }
    std::span<const Elem> exp_table() const noexcept { return {exp_table_.data(), q_ - 1}; }
    std::span<const Elem> log_table() const noexcept { return log_table_; }

    /// Base-p digits of a code, constant coefficient first; always e digits.
    std::vector<Elem> digits(Elem a) const;

    /// `GF(p)` or `GF(p^e)[c0,...,ce]`.
    std::string descriptor() const;

    /// Exhaustive associativity, commutativity, distributivity and inverse
    /// check over all pairs/triples. O(q^3); throws InternalVerificationFailed.
    void verify_axioms() const;

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
        return a.p_ == b.p_ && a.e_ == b.e_ && a.modulus_ == b.modulus_;
    }

private:
    friend std::shared_ptr<const FieldSpec> make_field(std::uint32_t, std::uint32_t,
                                                       std::optional<std::vector<Elem>>);
    FieldSpec() = default;

    Elem add_digits(Elem a, Elem b) const noexcept;

    std::uint32_t p_ = 0;
    std::uint32_t e_ = 0;
    std::uint32_t q_ = 0;
    std::vector<Elem> modulus_;
    std::vector<Elem> exp_table_;  // length 2(q-1), so log sums need no reduction
    std::vector<Elem> log_table_;
    std::vector<Elem> neg_table_;
    std::vector<Elem> add_table_;  // q*q, only for small extension fields
};

using Field = std::shared_ptr<const FieldSpec>;

bool is_prime(std::uint64_t n) noexcept;

/// Builds GF(p^e). Without a modulus the lexicographically smallest monic
/// irreducible of degree e is used (coefficients compared from the top
/// degree down, i.e. the smallest base-p integer).
Field make_field(std::uint32_t p, std::uint32_t e = 1,
                 std::optional<std::vector<Elem>> modulus = std::nullopt);

/// Parses `GF(p)`, `GF(q)`, `GF(p^e)` or `GF(p^e)[c0,...,ce]`.
Field parse_field(std::string_view text);

inline bool same_field(const Field& a, const Field& b) noexcept {
    return a == b || (a && b && *a == *b);
}

}  // namespace constrank
