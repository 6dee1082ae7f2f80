#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "constrank/error.hpp"

namespace constrank::detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

/// Line-oriented reader that keeps 1-based positions for error messages.
class TextReader {
public:
    explicit TextReader(std::istream& is) {
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines_.push_back(std::move(line));
        }
    }
    explicit TextReader(std::string_view text) {
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string line(text.substr(start, end - start));
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines_.push_back(std::move(line));
            if (end == text.size()) break;
            start = end + 1;
        }
    }

    static bool blank(std::string_view s) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) return false;
        return true;
    }

    void skip_blank() {
        while (next_ < lines_.size() && blank(lines_[next_])) ++next_;
    }
    bool at_end() {
        skip_blank();
        return next_ >= lines_.size();
    }
    /// Next line, blank lines included; fails at end of input.
    std::string_view take_line(const char* what) {
        if (next_ >= lines_.size()) throw ParseError(lines_.size() + 1, 1, std::string("expected ") + what);
        return lines_[next_++];
    }
    std::string_view take_nonblank(const char* what) {
        skip_blank();
        return take_line(what);
    }
    /// 1-based number of the line most recently taken.
    std::size_t line_no() const { return next_; }

    static std::vector<Token> split(std::string_view line) {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) out.push_back({line.substr(start, i - start), start + 1});
        }
        return out;
    }

    std::uint64_t number(const Token& t, const char* what) const {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw ParseError(line_no(), t.column,
                             std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
        return v;
    }

    /// Field descriptor: the remainder of the line from token `from`.
    static std::string_view rest(std::string_view line, const Token& from) {
        std::string_view s = line.substr(from.column - 1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    }

private:
    std::vector<std::string> lines_;
    std::size_t next_ = 0;
};

}  // namespace constrank::detail
