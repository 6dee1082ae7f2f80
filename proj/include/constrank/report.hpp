#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "constrank/bigint.hpp"
#include "constrank/matrix.hpp"

namespace constrank {

inline constexpr int kReportSchema = 1;

/// Ordered key-value report. Text form: `schema=1` then one `key=value` per
/// line; lists are comma separated. JSON form: one flat object with the same
/// keys, integers too large for 64 bits written as decimal strings.
class Report {
public:
    using List = std::vector<std::uint64_t>;
    using Value = std::variant<bool, std::int64_t, std::uint64_t, BigInt, std::string, List>;

    template <std::integral T>
    Report& set(std::string key, T v) {
        if constexpr (std::is_same_v<T, bool>)
            return put(std::move(key), v);
        else if constexpr (std::is_signed_v<T>)
            return put(std::move(key), static_cast<std::int64_t>(v));
        else
            return put(std::move(key), static_cast<std::uint64_t>(v));
    }
    Report& set(std::string key, const BigInt& v);
    Report& set(std::string key, std::string v);
    Report& set(std::string key, const char* v) { return set(std::move(key), std::string(v)); }
    Report& set(std::string key, List v);

    const Value* find(std::string_view key) const;
    const std::vector<std::pair<std::string, Value>>& entries() const noexcept { return entries_; }

    std::string text() const;
    std::string json() const;

private:
    Report& put(std::string key, Value v);
    std::vector<std::pair<std::string, Value>> entries_;
};

/// One-line matrix form for reports: rows separated by ';', entries by ' '.
std::string inline_matrix(const Matrix& a);

}  // namespace constrank
