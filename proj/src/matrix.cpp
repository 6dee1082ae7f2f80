#include "constrank/matrix.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>

#include "constrank/kernels.hpp"
#include "detail/matrix_io.hpp"

namespace constrank {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {
    if (!field_) throw Error(ErrorKind::InvalidElement, "matrix without a field");
    if (rows_ < 1 || cols_ < 1) throw Error(ErrorKind::ShapeViolation, "matrix dimensions must be >= 1");
    entries_.assign(rows_ * cols_, 0);
}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : Matrix(std::move(field), rows, cols) {
    if (entries.size() != rows_ * cols_)
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(rows_ * cols_) +
                                                      " entries, got " + std::to_string(entries.size()));
    for (Elem x : entries)
        if (!field_->contains(x))
            throw Error(ErrorKind::InvalidElement, "entry " + std::to_string(x) + " not in " +
                                                       field_->descriptor());
    entries_ = std::move(entries);
}

Matrix Matrix::identity(Field field, std::size_t n) {
    Matrix out(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) out.entries_[i * n + i] = 1;
    return out;
}

Matrix Matrix::unit(Field field, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    Matrix out(std::move(field), rows, cols);
    out.set(i, j, 1);
    return out;
}

Matrix Matrix::column(Field field, std::vector<Elem> entries) {
    const std::size_t n = entries.size();
    return Matrix(std::move(field), n, 1, std::move(entries));
}

void Matrix::set(std::size_t i, std::size_t j, Elem value) {
    if (i >= rows_ || j >= cols_) throw Error(ErrorKind::DimensionMismatch, "index out of range");
    if (!field_->contains(value)) throw Error(ErrorKind::InvalidElement, std::to_string(value));
    entries_[i * cols_ + j] = value;
}

bool Matrix::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](Elem x) { return x == 0; });
}

Matrix Matrix::transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.entries_[j * rows_ + i] = entries_[i * cols_ + j];
    return out;
}

Matrix Matrix::scaled(Elem c) const {
    Matrix out(*this);
    for (Elem& x : out.entries_) x = field_->mul(x, c);
    return out;
}

void Matrix::require_compatible(const Matrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_ || !same_field(field_, other.field_))
        throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": incompatible operands");
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_compatible(other, "+");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] = field_->add(entries_[k], other.entries_[k]);
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_compatible(other, "-");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] = field_->sub(entries_[k], other.entries_[k]);
    return *this;
}

Matrix& Matrix::add_scaled(const Matrix& other, Elem c) {
    require_compatible(other, "add_scaled");
    if (c == 0) return *this;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        entries_[k] = field_->add(entries_[k], field_->mul(c, other.entries_[k]));
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_ || !same_field(a.field_, b.field_))
        throw Error(ErrorKind::DimensionMismatch, "product of incompatible matrices");
    const FieldSpec& f = *a.field_;
    Matrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Elem x = a.entries_[i * a.cols_ + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                Elem& dst = out.entries_[i * b.cols_ + j];
                dst = f.add(dst, f.mul(x, b.entries_[k * b.cols_ + j]));
            }
        }
    }
    return out;
}

bool operator==(const Matrix& a, const Matrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && same_field(a.field_, b.field_) &&
           a.entries_ == b.entries_;
}

std::strong_ordering operator<=>(const Matrix& a, const Matrix& b) noexcept {
    return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                  b.entries_.begin(), b.entries_.end());
}

namespace detail {

namespace {

void row_axpy(const FieldSpec& f, std::span<Elem> dst, std::span<const Elem> src, Elem c) {
    if (c == 0) return;
    if (f.is_prime_field()) {
        kernels::gfp_axpy(dst, src, c, static_cast<std::uint16_t>(f.p()));
        return;
    }
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = f.add(dst[k], f.mul(c, src[k]));
}

}  // namespace

std::vector<std::size_t> echelonize(const FieldSpec& f, std::span<Elem> buf, std::size_t rows,
                                    std::size_t cols, bool reduced) {
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t pr = lead;
        while (pr < rows && buf[pr * cols + col] == 0) ++pr;
        if (pr == rows) continue;
        if (pr != lead)
            std::swap_ranges(buf.begin() + static_cast<std::ptrdiff_t>(pr * cols),
                             buf.begin() + static_cast<std::ptrdiff_t>((pr + 1) * cols),
                             buf.begin() + static_cast<std::ptrdiff_t>(lead * cols));
        auto pivot_row = buf.subspan(lead * cols, cols);
        const Elem scale = f.inv(pivot_row[col]);
        if (scale != 1)
            for (std::size_t k = col; k < cols; ++k) pivot_row[k] = f.mul(pivot_row[k], scale);
        const std::size_t first = reduced ? 0 : lead + 1;
        for (std::size_t r = first; r < rows; ++r) {
            if (r == lead) continue;
            const Elem factor = buf[r * cols + col];
            if (factor == 0) continue;
            row_axpy(f, buf.subspan(r * cols + col, cols - col), pivot_row.subspan(col), f.neg(factor));
        }
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

int rank_of(const FieldSpec& f, std::span<const Elem> buf, std::size_t rows, std::size_t cols) {
    if (f.q() == 2 && rows <= 64 && cols <= 64) {
        std::array<std::uint64_t, 64> packed{};
        for (std::size_t i = 0; i < rows; ++i) {
            std::uint64_t w = 0;
            for (std::size_t j = 0; j < cols; ++j)
                if (buf[i * cols + j]) w |= std::uint64_t{1} << j;
            packed[i] = w;
        }
        return kernels::gf2_rank(std::span<const std::uint64_t>(packed.data(), rows));
    }
    std::vector<Elem> scratch(buf.begin(), buf.end());
    return static_cast<int>(echelonize(f, scratch, rows, cols, false).size());
}

}  // namespace detail

int rank(const Matrix& a) { return detail::rank_of(a.gf(), a.entries(), a.rows(), a.cols()); }

int rank_generic(const Matrix& a) {
    std::vector<Elem> scratch(a.entries().begin(), a.entries().end());
    return static_cast<int>(detail::echelonize(a.gf(), scratch, a.rows(), a.cols(), false).size());
}

std::vector<std::uint64_t> pack_gf2_rows(const Matrix& a) {
    if (a.gf().q() != 2 || a.cols() > 64)
        throw Error(ErrorKind::DimensionMismatch, "packed rows need GF(2) and at most 64 columns");
    std::vector<std::uint64_t> out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j)) out[i] |= std::uint64_t{1} << j;
    return out;
}

int rank_packed_gf2(const Matrix& a) {
    if (a.rows() > 64) throw Error(ErrorKind::DimensionMismatch, "packed rank needs at most 64 rows");
    return kernels::gf2_rank(pack_gf2_rows(a));
}

std::vector<Matrix> kernel_basis(const Matrix& a) {
    const FieldSpec& f = a.gf();
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<Elem> rref(a.entries().begin(), a.entries().end());
    const auto pivots = detail::echelonize(f, rref, m, n, true);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<Matrix> out;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Elem> v(n, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(rref[i * n + free]);
        out.push_back(Matrix::column(a.field(), std::move(v)));
    }
    return out;
}

std::vector<Matrix> image_basis(const Matrix& a) {
    std::vector<Elem> scratch(a.entries().begin(), a.entries().end());
    const auto pivots = detail::echelonize(a.gf(), scratch, a.rows(), a.cols(), false);
    std::vector<Matrix> out;
    out.reserve(pivots.size());
    for (std::size_t c : pivots) {
        std::vector<Elem> col(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) col[i] = a(i, c);
        out.push_back(Matrix::column(a.field(), std::move(col)));
    }
    return out;
}

bool member_of_span(const Matrix& v, std::span<const Matrix> basis) {
    for (const Matrix& b : basis)
        if (b.rows() != v.rows() || b.cols() != v.cols() || !same_field(b.field(), v.field()))
            throw Error(ErrorKind::DimensionMismatch, "member_of_span: vectors differ in shape or field");
    if (basis.empty()) return v.is_zero();
    const std::size_t len = v.size();
    std::vector<Elem> stacked;
    stacked.reserve((basis.size() + 1) * len);
    for (const Matrix& b : basis) stacked.insert(stacked.end(), b.entries().begin(), b.entries().end());
    const int without = detail::rank_of(v.gf(), stacked, basis.size(), len);
    stacked.insert(stacked.end(), v.entries().begin(), v.entries().end());
    const int with = detail::rank_of(v.gf(), stacked, basis.size() + 1, len);
    return with == without;
}

Matrix pad_rows(const Matrix& a, std::size_t rows) {
    if (rows < a.rows())
        throw Error(ErrorKind::ShapeViolation, "cannot pad " + std::to_string(a.rows()) + " rows down to " +
                                                   std::to_string(rows));
    std::vector<Elem> entries(rows * a.cols(), 0);
    std::copy(a.entries().begin(), a.entries().end(), entries.begin());
    return Matrix(a.field(), rows, a.cols(), std::move(entries));
}

Matrix pad_to_square(const Matrix& a) {
    if (a.rows() > a.cols())
        throw Error(ErrorKind::ShapeViolation, std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                   " has more rows than columns");
    return pad_rows(a, a.cols());
}

void write_matrix(std::ostream& os, const Matrix& a) {
    os << a.rows() << ' ' << a.cols() << ' ' << a.gf().descriptor() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
        os << '\n';
    }
}

std::string format_matrix(const Matrix& a) {
    std::ostringstream os;
    write_matrix(os, a);
    return os.str();
}

namespace detail {

Field parse_field_at(const TextReader& reader, std::string_view line, const Token& from) {
    try {
        return parse_field(TextReader::rest(line, from));
    } catch (const ParseError& e) {
        throw ParseError(reader.line_no(), from.column + e.column() - 1, e.message());
    } catch (const Error& e) {
        throw ParseError(reader.line_no(), from.column, e.what());
    }
}

Matrix read_matrix_block(TextReader& reader) {
    const std::string_view header = reader.take_nonblank("matrix header 'm n GF(...)'");
    const auto tokens = TextReader::split(header);
    if (tokens.size() < 3)
        throw ParseError(reader.line_no(), 1, "matrix header must be 'm n GF(...)'");
    const std::uint64_t m = reader.number(tokens[0], "row count");
    const std::uint64_t n = reader.number(tokens[1], "column count");
    if (m < 1 || n < 1 || m > 4096 || n > 4096)
        throw ParseError(reader.line_no(), tokens[0].column, "matrix dimensions out of range");
    Field field = parse_field_at(reader, header, tokens[2]);

    std::vector<Elem> entries;
    entries.reserve(m * n);
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::string_view line = reader.take_line("matrix row");
        const auto row = TextReader::split(line);
        if (row.size() != n) {
            const std::size_t col = row.size() > n ? row[n].column : line.size() + 1;
            throw ParseError(reader.line_no(), col,
                             "expected " + std::to_string(n) + " entries, got " + std::to_string(row.size()));
        }
        for (const Token& t : row) {
            const std::uint64_t v = reader.number(t, "element code");
            if (v >= field->q())
                throw ParseError(reader.line_no(), t.column,
                                 "element " + std::to_string(v) + " not in " + field->descriptor());
            entries.push_back(static_cast<Elem>(v));
        }
    }
    return Matrix(std::move(field), m, n, std::move(entries));
}

}  // namespace detail

Matrix parse_matrix(std::string_view text) {
    detail::TextReader reader(text);
    Matrix out = detail::read_matrix_block(reader);
    if (!reader.at_end()) throw ParseError(reader.line_no() + 1, 1, "unexpected content after matrix");
    return out;
}

Matrix read_matrix(std::istream& is) {
    detail::TextReader reader(is);
    Matrix out = detail::read_matrix_block(reader);
    if (!reader.at_end()) throw ParseError(reader.line_no() + 1, 1, "unexpected content after matrix");
    return out;
}

}  // namespace constrank
