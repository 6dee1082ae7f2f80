#include "constrank/report.hpp"

#include <sstream>

#include "json.hpp"

namespace constrank {

Report& Report::put(std::string key, Value v) {
    for (auto& [k, old] : entries_)
        if (k == key) {
            old = std::move(v);
            return *this;
        }
    entries_.emplace_back(std::move(key), std::move(v));
    return *this;
}

Report& Report::set(std::string key, const BigInt& v) { return put(std::move(key), v); }
Report& Report::set(std::string key, std::string v) { return put(std::move(key), std::move(v)); }
Report& Report::set(std::string key, List v) { return put(std::move(key), std::move(v)); }

const Report::Value* Report::find(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

namespace {

struct TextVisitor {
    std::ostream& os;
    void operator()(bool b) const { os << (b ? "true" : "false"); }
    void operator()(std::int64_t x) const { os << x; }
    void operator()(std::uint64_t x) const { os << x; }
    void operator()(const BigInt& x) const { os << x.str(); }
    void operator()(const std::string& s) const { os << s; }
    void operator()(const Report::List& l) const {
        for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
    }
};

}  // namespace

std::string Report::text() const {
    std::ostringstream os;
    os << "schema=" << kReportSchema << '\n';
    for (const auto& [k, v] : entries_) {
        os << k << '=';
        std::visit(TextVisitor{os}, v);
        os << '\n';
    }
    return os.str();
}

std::string Report::json() const {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    for (const auto& [k, v] : entries_) {
        std::visit(
            [&, &key = k](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, BigInt>) {
                    if (x >= 0 && x <= std::numeric_limits<std::uint64_t>::max())
                        doc[key] = x.template convert_to<std::uint64_t>();
                    else if (x < 0 && x >= std::numeric_limits<std::int64_t>::min())
                        doc[key] = x.template convert_to<std::int64_t>();
                    else
                        doc[key] = x.str();
                } else {
                    doc[key] = x;
                }
            },
            v);
    }
    return doc.dump() + "\n";
}

std::string inline_matrix(const Matrix& a) {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
    }
    return os.str();
}

}  // namespace constrank
