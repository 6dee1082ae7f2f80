#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "constrank/field.hpp"

namespace constrank {

/// Dense m x n matrix over a finite field, row-major element codes. Column
/// vectors are the n x 1 case.
class Matrix {
public:
    /// Zero matrix. Throws ShapeViolation unless rows, cols >= 1.
    Matrix(Field field, std::size_t rows, std::size_t cols);
    /// Throws DimensionMismatch on a wrong entry count, InvalidElement on a
    /// code outside the field.
    Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

    static Matrix identity(Field field, std::size_t n);
    /// E_ij: a single 1 at (i, j), zero-based.
    static Matrix unit(Field field, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
    static Matrix column(Field field, std::vector<Elem> entries);

    const Field& field() const noexcept { return field_; }
    const FieldSpec& gf() const noexcept { return *field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }

    Elem operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Elem value);
    std::span<const Elem> entries() const noexcept { return entries_; }
    std::span<const Elem> row(std::size_t i) const noexcept {
        return std::span<const Elem>(entries_).subspan(i * cols_, cols_);
    }

    bool is_zero() const noexcept;
    Matrix transpose() const;
    Matrix scaled(Elem c) const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    /// this += c * other
    Matrix& add_scaled(const Matrix& other, Elem c);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    /// Equal shape, field and entries.
    friend bool operator==(const Matrix& a, const Matrix& b) noexcept;
    /// Lexicographic on the row-major entry codes; shapes must agree.
    friend std::strong_ordering operator<=>(const Matrix& a, const Matrix& b) noexcept;

private:
    void require_compatible(const Matrix& other, const char* op) const;

    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> entries_;
};

/// Row-echelon rank; uses the packed GF(2) path when it applies.
int rank(const Matrix& a);
/// Table-arithmetic elimination, never the packed path.
int rank_generic(const Matrix& a);
/// GF(2) only, rows and cols <= 64; throws DimensionMismatch otherwise.
int rank_packed_gf2(const Matrix& a);
/// One word per row, bit j holding column j.
std::vector<std::uint64_t> pack_gf2_rows(const Matrix& a);

/// n - rank(a) independent vectors spanning {v : a v = 0}, one per free
/// column of the reduced echelon form, in column order.
std::vector<Matrix> kernel_basis(const Matrix& a);
/// The pivot columns of a, which span its column space.
std::vector<Matrix> image_basis(const Matrix& a);

/// True iff v lies in the span of `basis`. All arguments must share field and
/// shape; throws DimensionMismatch otherwise.
bool member_of_span(const Matrix& v, std::span<const Matrix> basis);

/// Appends n - m zero rows to an m x n matrix; ShapeViolation if m > n.
Matrix pad_to_square(const Matrix& a);
/// Appends zero rows up to `rows` in total; ShapeViolation if that shrinks a.
Matrix pad_rows(const Matrix& a, std::size_t rows);

/// `m n GF(...)` header line followed by m lines of n codes.
std::string format_matrix(const Matrix& a);
void write_matrix(std::ostream& os, const Matrix& a);
Matrix parse_matrix(std::string_view text);
Matrix read_matrix(std::istream& is);

namespace detail {

/// Echelon reduction of a row-major rows x cols buffer in place. Pivots go
/// to the leftmost nonzero column, taking the topmost nonzero row; each pivot
/// is scaled to 1. With `reduced`, entries above pivots are cleared too.
/// Returns the pivot column of each leading row.
std::vector<std::size_t> echelonize(const FieldSpec& f, std::span<Elem> buf, std::size_t rows,
                                    std::size_t cols, bool reduced);

/// Rank of a row-major buffer over f. Does not modify the input.
int rank_of(const FieldSpec& f, std::span<const Elem> buf, std::size_t rows, std::size_t cols);

}  // namespace detail

}  // namespace constrank
