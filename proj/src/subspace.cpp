#include "constrank/subspace.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "constrank/kernels.hpp"
#include "detail/matrix_io.hpp"
#include "detail/scan.hpp"

namespace constrank {

namespace {

void require_uniform(std::span<const Matrix> mats) {
    if (mats.empty()) throw Error(ErrorKind::EmptyInput, "no matrices given");
    const Matrix& first = mats.front();
    for (const Matrix& m : mats)
        if (m.rows() != first.rows() || m.cols() != first.cols() || !same_field(m.field(), first.field()))
            throw Error(ErrorKind::ShapeMismatch, "matrices differ in shape or field");
}

std::vector<Elem> flatten(std::span<const Matrix> mats) {
    std::vector<Elem> out;
    out.reserve(mats.size() * mats.front().size());
    for (const Matrix& m : mats) out.insert(out.end(), m.entries().begin(), m.entries().end());
    return out;
}

}  // namespace

Subspace Subspace::from_basis(std::vector<Matrix> basis) {
    require_uniform(basis);
    const auto flat = flatten(basis);
    if (detail::rank_of(basis.front().gf(), flat, basis.size(), basis.front().size()) !=
        static_cast<int>(basis.size()))
        throw Error(ErrorKind::DependentBasis, "basis matrices are linearly dependent");
    return Subspace(std::move(basis));
}

std::uint64_t Subspace::element_count() const noexcept {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / gf().q())
            return std::numeric_limits<std::uint64_t>::max();
        n *= gf().q();
    }
    return n;
}

Matrix Subspace::combination(std::span<const Elem> coeffs) const {
    if (coeffs.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "coefficient count != dim");
    Matrix out(field(), rows(), cols());
    for (std::size_t i = 0; i < dim(); ++i) out.add_scaled(basis_[i], coeffs[i]);
    return out;
}

std::vector<Elem> Subspace::coefficients_at(std::uint64_t index) const {
    std::vector<Elem> c(dim(), 0);
    for (std::size_t i = dim(); i-- > 0;) {
        c[i] = static_cast<Elem>(index % gf().q());
        index /= gf().q();
    }
    return c;
}

Subspace make_subspace(std::span<const Matrix> mats) {
    require_uniform(mats);
    const Matrix& first = mats.front();
    auto flat = flatten(mats);
    const std::size_t len = first.size();
    const auto pivots = detail::echelonize(first.gf(), flat, mats.size(), len, true);
    if (pivots.empty()) throw Error(ErrorKind::ZeroSpan, "all input matrices are zero");
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        std::vector<Elem> entries(flat.begin() + static_cast<std::ptrdiff_t>(i * len),
                                  flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * len));
        basis.emplace_back(first.field(), first.rows(), first.cols(), std::move(entries));
    }
    return Subspace::from_basis(std::move(basis));
}

ElementEnumerator::ElementEnumerator(const Subspace& s, std::uint64_t begin, std::uint64_t end)
    : s_(&s), index_(begin), end_(std::min(end, s.element_count())),
      coeffs_(s.coefficients_at(begin)), current_(s.combination(coeffs_)) {}

bool ElementEnumerator::next() {
    if (!started_) {
        started_ = true;
        return index_ < end_;
    }
    if (index_ >= end_ || ++index_ >= end_) return false;
    const FieldSpec& f = s_->gf();
    const Elem top = static_cast<Elem>(f.q() - 1);
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const Elem old = coeffs_[i];
        const Elem now = old == top ? 0 : static_cast<Elem>(old + 1);
        coeffs_[i] = now;
        current_.add_scaled(s_->basis()[i], f.sub(now, old));
        if (now != 0) break;
    }
    return true;
}

void require_enumerable(const Subspace& s, std::uint64_t budget) {
    if (s.element_count() > budget)
        throw Error(ErrorKind::BudgetExceeded, "q^d = " + std::to_string(s.gf().q()) + "^" +
                                                   std::to_string(s.dim()) + " exceeds the enumeration budget " +
                                                   std::to_string(budget));
}

void for_each_element(const Subspace& s, const std::function<bool(const Matrix&)>& fn, std::uint64_t budget) {
    require_enumerable(s, budget);
    ElementEnumerator it(s);
    while (it.next())
        if (!fn(it.current())) return;
}

namespace detail {

bool packed_path_applies(const Subspace& s) noexcept {
    return s.gf().q() == 2 && s.rows() <= 64 && s.cols() <= 64;
}

void scan_ranks(const Subspace& s, std::uint64_t begin, std::uint64_t end, const RankBatchFn& fn) {
    end = std::min(end, s.element_count());
    if (begin >= end) return;
    constexpr std::size_t kBatch = 256;
    std::vector<std::uint8_t> ranks;
    ranks.reserve(kBatch);

    if (packed_path_applies(s)) {
        const std::size_t m = s.rows();
        std::vector<std::vector<std::uint64_t>> packed;
        for (const Matrix& b : s.basis()) packed.push_back(pack_gf2_rows(b));
        // Element words for `begin`, then XOR in basis vectors as bits flip.
        std::vector<std::uint64_t> cur(m, 0);
        const std::size_t d = s.dim();
        for (std::size_t i = 0; i < d; ++i)
            if ((begin >> (d - 1 - i)) & 1)
                for (std::size_t r = 0; r < m; ++r) cur[r] ^= packed[i][r];
        std::vector<std::uint64_t> buffer;
        buffer.reserve(kBatch * m);
        std::uint64_t batch_start = begin;
        for (std::uint64_t k = begin; k < end; ++k) {
            if (k != begin) {
                // bits that flip going k-1 -> k: trailing ones of k-1 plus one
                const std::uint64_t flipped = (k - 1) ^ k;
                for (std::size_t i = 0; i < d; ++i)
                    if ((flipped >> (d - 1 - i)) & 1)
                        for (std::size_t r = 0; r < m; ++r) cur[r] ^= packed[i][r];
            }
            buffer.insert(buffer.end(), cur.begin(), cur.end());
            if (buffer.size() == kBatch * m || k + 1 == end) {
                ranks.resize(buffer.size() / m);
                kernels::gf2_rank_batch(buffer, m, ranks);
                if (!fn(batch_start, ranks)) return;
                buffer.clear();
                batch_start = k + 1;
            }
        }
        return;
    }

    ElementEnumerator it(s, begin, end);
    std::uint64_t batch_start = begin;
    while (it.next()) {
        ranks.push_back(static_cast<std::uint8_t>(rank(it.current())));
        if (ranks.size() == kBatch || it.index() + 1 == end) {
            if (!fn(batch_start, ranks)) return;
            ranks.clear();
            batch_start = it.index() + 1;
        }
    }
}

}  // namespace detail

std::uint64_t RankProfile::nonzero_total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

int RankProfile::constant_rank() const noexcept {
    int found = -1;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        if (counts[s] == 0) continue;
        if (found >= 0) return -1;
        found = static_cast<int>(s);
    }
    return found;
}

RankProfile rank_profile(const Subspace& s, const EnumerationOptions& opts) {
    require_enumerable(s, opts.budget);
    const std::size_t buckets = std::min(s.rows(), s.cols()) + 1;
    const std::uint64_t total = s.element_count();
    const unsigned workers = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(opts.workers, total)));

    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(buckets, 0));
    auto work = [&](unsigned w) {
        const std::uint64_t lo = 1 + (total - 1) * w / workers;
        const std::uint64_t hi = 1 + (total - 1) * (w + 1) / workers;
        detail::scan_ranks(s, lo, hi, [&](std::uint64_t, std::span<const std::uint8_t> ranks) {
            for (auto r : ranks) ++partial[w][r];
            return true;
        });
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    RankProfile out{std::vector<std::uint64_t>(buckets, 0)};
    for (const auto& p : partial)
        for (std::size_t b = 0; b < buckets; ++b) out.counts[b] += p[b];
    return out;
}

ConstantRankCheck is_constant_rank(const Subspace& s, int r, std::uint64_t budget) {
    if (r < 1 || static_cast<std::size_t>(r) > std::min(s.rows(), s.cols()))
        throw Error(ErrorKind::ShapeViolation, "rank " + std::to_string(r) + " out of range");
    require_enumerable(s, budget);
    ConstantRankCheck out;
    std::optional<std::uint64_t> bad;
    detail::scan_ranks(s, 1, s.element_count(), [&](std::uint64_t start, std::span<const std::uint8_t> ranks) {
        for (std::size_t k = 0; k < ranks.size(); ++k) {
            if (ranks[k] != r) {
                bad = start + k;
                out.witness_rank = ranks[k];
                return false;
            }
        }
        return true;
    });
    out.holds = !bad;
    if (bad) out.witness = s.combination(s.coefficients_at(*bad));
    return out;
}

Subspace pad_to_square(const Subspace& s) {
    std::vector<Matrix> basis;
    for (const Matrix& b : s.basis()) basis.push_back(pad_to_square(b));
    return Subspace::from_basis(std::move(basis));
}

Subspace change_basis(const Subspace& s, const Matrix& change) {
    if (change.rows() != s.dim() || change.cols() != s.dim() || !same_field(change.field(), s.field()))
        throw Error(ErrorKind::DimensionMismatch, "basis change must be d x d over the same field");
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < s.dim(); ++i) basis.push_back(s.combination(change.row(i)));
    return Subspace::from_basis(std::move(basis));
}

Subspace transform_equivalent(const Subspace& s, const Matrix& left, const Matrix& right) {
    if (left.rows() != s.rows() || left.cols() != s.rows() || right.rows() != s.cols() ||
        right.cols() != s.cols())
        throw Error(ErrorKind::DimensionMismatch, "equivalence transform has the wrong shape");
    if (rank(left) != static_cast<int>(s.rows()) || rank(right) != static_cast<int>(s.cols()))
        throw Error(ErrorKind::DimensionMismatch, "equivalence transform must be invertible");
    std::vector<Matrix> basis;
    for (const Matrix& b : s.basis()) basis.push_back(left * b * right);
    return Subspace::from_basis(std::move(basis));
}

void write_subspace(std::ostream& os, const Subspace& s) {
    os << s.dim() << ' ' << s.rows() << ' ' << s.cols() << ' ' << s.gf().descriptor() << '\n';
    for (std::size_t i = 0; i < s.dim(); ++i) {
        os << '\n';
        write_matrix(os, s.basis()[i]);
    }
}

std::string format_subspace(const Subspace& s) {
    std::ostringstream os;
    write_subspace(os, s);
    return os.str();
}

namespace {

Subspace read_subspace_impl(detail::TextReader& reader) {
    const std::string_view header = reader.take_nonblank("subspace header 'd m n GF(...)'");
    const auto tokens = detail::TextReader::split(header);
    if (tokens.size() < 4) throw ParseError(reader.line_no(), 1, "subspace header must be 'd m n GF(...)'");
    const std::uint64_t d = reader.number(tokens[0], "dimension");
    const std::uint64_t m = reader.number(tokens[1], "row count");
    const std::uint64_t n = reader.number(tokens[2], "column count");
    const std::size_t header_line = reader.line_no();
    if (d < 1 || d > 4096) throw ParseError(header_line, tokens[0].column, "dimension out of range");
    Field field = detail::parse_field_at(reader, header, tokens[3]);

    std::vector<Matrix> mats;
    for (std::uint64_t i = 0; i < d; ++i) {
        if (reader.at_end())
            throw ParseError(reader.line_no() + 1, 1,
                             "expected " + std::to_string(d) + " matrices, found " + std::to_string(i));
        Matrix a = detail::read_matrix_block(reader);
        if (a.rows() != m || a.cols() != n || !same_field(a.field(), field))
            throw ParseError(reader.line_no() - a.rows(), 1,
                             "matrix " + std::to_string(i + 1) + " does not match the subspace header");
        mats.push_back(std::move(a));
    }
    if (!reader.at_end()) throw ParseError(reader.line_no() + 1, 1, "unexpected content after subspace");
    try {
        return Subspace::from_basis(std::move(mats));
    } catch (const Error& e) {
        throw ParseError(header_line, 1, e.what());
    }
}

}  // namespace

Subspace parse_subspace(std::string_view text) {
    detail::TextReader reader(text);
    return read_subspace_impl(reader);
}

Subspace read_subspace(std::istream& is) {
    detail::TextReader reader(is);
    return read_subspace_impl(reader);
}

}  // namespace constrank
