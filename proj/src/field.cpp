#include "constrank/field.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "constrank/poly.hpp"

namespace constrank {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
        case ErrorKind::ReducibleModulus: return "ReducibleModulus";
        case ErrorKind::InvalidModulus: return "InvalidModulus";
        case ErrorKind::OrderTooLarge: return "OrderTooLarge";
        case ErrorKind::InvalidElement: return "InvalidElement";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ShapeViolation: return "ShapeViolation";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::ZeroSpan: return "ZeroSpan";
        case ErrorKind::DependentBasis: return "DependentBasis";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::NotConstantRank: return "NotConstantRank";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InternalVerificationFailed: return "InternalVerificationFailed";
        case ErrorKind::Parse: return "ParseError";
    }
    return "Error";
}

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Elem FieldSpec::inv(Elem a) const {
    if (a == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    return exp_table_[(q_ - 1 - log_table_[a]) % (q_ - 1)];
}

Elem FieldSpec::pow(Elem a, std::uint64_t k) const noexcept {
    if (k == 0) return 1;
    if (a == 0) return 0;
    return exp_table_[(std::uint64_t{log_table_[a]} * (k % (q_ - 1))) % (q_ - 1)];
}

Elem FieldSpec::add_digits(Elem a, Elem b) const noexcept {
    std::uint32_t out = 0;
    std::uint32_t scale = 1;
    std::uint32_t x = a, y = b;
    for (std::uint32_t i = 0; i < e_; ++i) {
        out += ((x % p_ + y % p_) % p_) * scale;
        x /= p_;
        y /= p_;
        scale *= p_;
    }
    return static_cast<Elem>(out);
}

std::vector<Elem> FieldSpec::digits(Elem a) const {
    std::vector<Elem> out(e_, 0);
    std::uint32_t x = a;
    for (std::uint32_t i = 0; i < e_; ++i) {
        out[i] = static_cast<Elem>(x % p_);
        x /= p_;
    }
    return out;
}

std::string FieldSpec::descriptor() const {
    std::ostringstream os;
    if (e_ == 1) {
        os << "GF(" << p_ << ")";
        return os.str();
    }
    os << "GF(" << p_ << "^" << e_ << ")[";
    for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
    os << "]";
    return os.str();
}

void FieldSpec::verify_axioms() const {
    auto fail = [](const std::string& what) {
        throw Error(ErrorKind::InternalVerificationFailed, what);
    };
    for (std::uint32_t a = 0; a < q_; ++a) {
        const Elem x = static_cast<Elem>(a);
        if (add(x, 0) != x || mul(x, 1) != x || mul(x, 0) != 0) fail("identity");
        if (add(x, neg(x)) != 0) fail("additive inverse");
        if (x != 0 && mul(x, inv(x)) != 1) fail("multiplicative inverse");
        if (pow(x, q_) != x) fail("Frobenius");
        for (std::uint32_t b = 0; b < q_; ++b) {
            const Elem y = static_cast<Elem>(b);
            if (add(x, y) != add(y, x) || mul(x, y) != mul(y, x)) fail("commutativity");
            for (std::uint32_t c = 0; c < q_; ++c) {
                const Elem z = static_cast<Elem>(c);
                if (add(add(x, y), z) != add(x, add(y, z))) fail("additive associativity");
                if (mul(mul(x, y), z) != mul(x, mul(y, z))) fail("multiplicative associativity");
                if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z))) fail("distributivity");
            }
        }
    }
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

Field make_field(std::uint32_t p, std::uint32_t e, std::optional<std::vector<Elem>> modulus) {
    if (!is_prime(p))
        throw Error(ErrorKind::NonPrimeCharacteristic, std::to_string(p) + " is not prime");
    if (e < 1) throw Error(ErrorKind::InvalidModulus, "extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxFieldOrder)
            throw Error(ErrorKind::OrderTooLarge,
                        std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^16");
    }

    std::shared_ptr<FieldSpec> f(new FieldSpec());
    f->p_ = p;
    f->e_ = e;
    f->q_ = static_cast<std::uint32_t>(q);

    // Arithmetic on base-p digit codes modulo the monic reduction polynomial.
    poly::Poly monic;
    if (e > 1) {
        const Field prime = make_field(p, 1);
        if (modulus) {
            poly::Poly m = *modulus;
            for (Elem c : m)
                if (c >= p) throw Error(ErrorKind::InvalidModulus, "coefficient out of range");
            poly::trim(m);
            if (poly::degree(m) != static_cast<int>(e) || modulus->size() != e + 1)
                throw Error(ErrorKind::InvalidModulus, "modulus must have degree " + std::to_string(e));
            if (!poly::is_irreducible(*prime, m))
                throw Error(ErrorKind::ReducibleModulus, "modulus is reducible over GF(" +
                                                             std::to_string(p) + ")");
            const Elem lead_inv = prime->inv(m.back());
            monic = m;
            for (Elem& c : monic) c = prime->mul(c, lead_inv);
            f->modulus_ = *modulus;
        } else {
            monic = poly::smallest_irreducible(*prime, e);
            f->modulus_ = monic;
        }
    } else if (modulus && !modulus->empty()) {
        if (modulus->size() != 2 || (*modulus)[1] == 0 || (*modulus)[1] >= p || (*modulus)[0] >= p)
            throw Error(ErrorKind::InvalidModulus, "prime field modulus must have degree 1");
    }

    const std::uint32_t qq = f->q_;
    auto slow_mul = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
        if (e == 1) return (a * b) % p;
        // Schoolbook product of digit vectors, then reduce by the monic modulus.
        std::vector<std::uint32_t> prod(2 * e - 1, 0);
        std::vector<std::uint32_t> da(e), db(e);
        for (std::uint32_t i = 0; i < e; ++i) {
            da[i] = a % p;
            db[i] = b % p;
            a /= p;
            b /= p;
        }
        for (std::uint32_t i = 0; i < e; ++i)
            for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        for (std::uint32_t k = 2 * e - 1; k-- > e;) {
            const std::uint32_t c = prod[k];
            if (c == 0) continue;
            for (std::uint32_t i = 0; i <= e; ++i) {
                const std::uint32_t idx = k - e + i;
                prod[idx] = (prod[idx] + (p - (c * monic[i]) % p)) % p;
            }
        }
        std::uint32_t out = 0;
        for (std::uint32_t i = e; i-- > 0;) out = out * p + prod[i];
        return out;
    };

    // Smallest code of multiplicative order q-1.
    const auto factors = prime_factors(qq - 1);
    auto slow_pow = [&](std::uint32_t a, std::uint64_t k) {
        std::uint32_t result = 1;
        while (k) {
            if (k & 1) result = slow_mul(result, a);
            a = slow_mul(a, a);
            k >>= 1;
        }
        return result;
    };
    std::uint32_t g = 1;
    if (qq > 2) {
        for (g = 2; g < qq; ++g) {
            bool primitive = true;
            for (std::uint64_t l : factors) {
                if (slow_pow(g, (qq - 1) / l) == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) break;
        }
        if (g == qq) throw Error(ErrorKind::InternalVerificationFailed, "no primitive element");
    }

    f->exp_table_.assign(2 * (qq - 1), 0);
    f->log_table_.assign(qq, 0);
    std::uint32_t x = 1;
    for (std::uint32_t k = 0; k < qq - 1; ++k) {
        f->exp_table_[k] = static_cast<Elem>(x);
        f->exp_table_[k + qq - 1] = static_cast<Elem>(x);
        f->log_table_[x] = static_cast<Elem>(k);
        x = slow_mul(x, g);
    }
    if (x != 1) throw Error(ErrorKind::InternalVerificationFailed, "exp table did not close");

    f->neg_table_.assign(qq, 0);
    for (std::uint32_t a = 0; a < qq; ++a) {
        std::uint32_t out = 0, scale = 1, y = a;
        for (std::uint32_t i = 0; i < e; ++i) {
            out += ((p - y % p) % p) * scale;
            y /= p;
            scale *= p;
        }
        f->neg_table_[a] = static_cast<Elem>(out);
    }
    if (e > 1 && p != 2 && qq <= 256) {
        f->add_table_.resize(std::size_t{qq} * qq);
        for (std::uint32_t a = 0; a < qq; ++a)
            for (std::uint32_t b = 0; b < qq; ++b)
                f->add_table_[std::size_t{a} * qq + b] =
                    f->add_digits(static_cast<Elem>(a), static_cast<Elem>(b));
    }

    // Cheap construction-time checks; the O(q^3) sweep lives in verify_axioms().
    for (std::uint32_t a = 1; a < qq; ++a) {
        const Elem el = static_cast<Elem>(a);
        if (f->exp_table_[f->log_table_[a]] != el || f->mul(el, f->inv(el)) != 1)
            throw Error(ErrorKind::InternalVerificationFailed, "log/exp tables inconsistent");
    }
    return f;
}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(1, pos + 1, what + " in field descriptor '" + std::string(text) + "'");
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::uint64_t number() {
        skip_ws();
        std::uint64_t v = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) fail("expected a number");
        pos += static_cast<std::size_t>(ptr - first);
        return v;
    }
};

}  // namespace

Field parse_field(std::string_view text) {
    Cursor c{text};
    c.skip_ws();
    if (!(c.accept('G') && c.accept('F'))) c.fail("expected 'GF'");
    c.expect('(');
    std::uint64_t base = c.number();
    std::uint64_t exponent = 1;
    bool explicit_exponent = false;
    if (c.accept('^')) {
        exponent = c.number();
        explicit_exponent = true;
    }
    c.expect(')');
    std::optional<std::vector<Elem>> modulus;
    if (c.accept('[')) {
        modulus.emplace();
        if (!c.accept(']')) {
            do {
                const std::uint64_t v = c.number();
                if (v > 0xffff) c.fail("coefficient too large");
                modulus->push_back(static_cast<Elem>(v));
            } while (c.accept(','));
            c.expect(']');
        }
    }
    c.skip_ws();
    if (c.pos != text.size()) c.fail("trailing characters");
    if (base > kMaxFieldOrder || exponent > 16 || exponent < 1)
        throw Error(ErrorKind::OrderTooLarge, std::string(text));

    if (!explicit_exponent && !is_prime(base)) {
        // GF(q) shorthand for a prime power q.
        for (std::uint64_t p = 2; p <= base; ++p) {
            if (!is_prime(p) || base % p != 0) continue;
            std::uint64_t r = base;
            std::uint32_t k = 0;
            while (r % p == 0) {
                r /= p;
                ++k;
            }
            if (r == 1) return make_field(static_cast<std::uint32_t>(p), k, modulus);
            break;
        }
    }
    return make_field(static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(exponent), modulus);
}

}  // namespace constrank
