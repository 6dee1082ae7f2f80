#include "constrank/poly.hpp"

#include <algorithm>

namespace constrank::poly {

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) noexcept {
    for (std::size_t i = a.size(); i > 0; --i)
        if (a[i - 1] != 0) return static_cast<int>(i - 1);
    return -1;
}

Poly add(const FieldSpec& f, const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Elem x = i < a.size() ? a[i] : 0;
        const Elem y = i < b.size() ? b[i] : 0;
        out[i] = f.add(x, y);
    }
    trim(out);
    return out;
}

Poly mul(const FieldSpec& f, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
    }
    trim(out);
    return out;
}

Poly mod(const FieldSpec& f, Poly a, const Poly& m) {
    trim(a);
    const int dm = degree(m);
    const Elem lead_inv = f.inv(m[static_cast<std::size_t>(dm)]);
    for (int da = degree(a); da >= dm; da = degree(a)) {
        const Elem c = f.mul(a[static_cast<std::size_t>(da)], lead_inv);
        const std::size_t shift = static_cast<std::size_t>(da - dm);
        for (int i = 0; i <= dm; ++i) {
            const std::size_t k = shift + static_cast<std::size_t>(i);
            a[k] = f.sub(a[k], f.mul(c, m[static_cast<std::size_t>(i)]));
        }
        trim(a);
    }
    return a;
}

Poly monic_from_index(const FieldSpec& f, unsigned deg, std::uint64_t index) {
    Poly out(deg + 1, 0);
    for (unsigned i = 0; i < deg; ++i) {
        out[i] = static_cast<Elem>(index % f.q());
        index /= f.q();
    }
    out[deg] = 1;
    return out;
}

namespace {

std::uint64_t count_monic(const FieldSpec& f, unsigned deg) {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < deg; ++i) n *= f.q();
    return n;
}

}  // namespace

bool is_irreducible(const FieldSpec& field, const Poly& f) {
    const int d = degree(f);
    if (d < 1) return false;
    for (unsigned k = 1; k <= static_cast<unsigned>(d) / 2; ++k) {
        const std::uint64_t total = count_monic(field, k);
        for (std::uint64_t t = 0; t < total; ++t) {
            if (mod(field, f, monic_from_index(field, k, t)).empty()) return false;
        }
    }
    return true;
}

Poly smallest_irreducible(const FieldSpec& field, unsigned deg) {
    const std::uint64_t total = count_monic(field, deg);
    for (std::uint64_t t = 0; t < total; ++t) {
        Poly f = monic_from_index(field, deg, t);
        if (is_irreducible(field, f)) return f;
    }
    // Irreducibles exist in every degree over a finite field.
    throw Error(ErrorKind::InternalVerificationFailed, "no irreducible polynomial found");
}

}  // namespace constrank::poly
