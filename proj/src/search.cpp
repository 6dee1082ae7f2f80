#include "constrank/search.hpp"

#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "constrank/kernels.hpp"

namespace constrank {

std::string_view to_string(SearchStatus s) noexcept {
    switch (s) {
        case SearchStatus::Found: return "Found";
        case SearchStatus::ExhaustedNone: return "ExhaustedNone";
        case SearchStatus::BudgetExceeded: return "BudgetExceeded";
    }
    return "unknown";
}

namespace {

// Largest matrix spaces whose rank-r membership is tabulated up front.
constexpr std::uint64_t kBinaryTableLimit = std::uint64_t{1} << 26;
constexpr std::uint64_t kGenericTableLimit = std::uint64_t{1} << 22;

/// Matrices of M_{m x n}(F_q) keyed by their base-q value with entry t
/// (row-major) weighted q^(N-1-t), so key order is lexicographic entry order.
class KeySpace {
public:
    KeySpace(Field field, std::size_t m, std::size_t n)
        : field_(std::move(field)), f_(*field_), m_(m), n_(n), len_(m * n), q_(f_.q()), binary_(q_ == 2) {
        weight_.assign(len_, 1);
        std::uint64_t w = 1;
        for (std::size_t t = len_; t-- > 0;) {
            weight_[t] = w;
            if (t > 0 && w > (std::numeric_limits<std::uint64_t>::max() >> 1) / q_)
                throw Error(ErrorKind::ShapeViolation, "matrix space too large to index (q^(mn) >= 2^63)");
            w *= q_;
        }
        total_ = w;
    }

    std::size_t len() const noexcept { return len_; }
    std::uint64_t q() const noexcept { return q_; }
    bool binary() const noexcept { return binary_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t rows() const noexcept { return m_; }
    std::size_t cols() const noexcept { return n_; }
    const FieldSpec& gf() const noexcept { return f_; }

    Elem digit(std::uint64_t key, std::size_t t) const noexcept {
        if (binary_) return static_cast<Elem>((key >> (len_ - 1 - t)) & 1);
        return static_cast<Elem>((key / weight_[t]) % q_);
    }

    void decode(std::uint64_t key, std::span<Elem> out) const noexcept {
        for (std::size_t t = len_; t-- > 0;) {
            out[t] = static_cast<Elem>(key % q_);
            key /= q_;
        }
    }

    std::uint64_t encode(std::span<const Elem> digits) const noexcept {
        std::uint64_t key = 0;
        for (Elem d : digits) key = key * q_ + d;
        return key;
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        if (binary_) return a ^ b;
        std::uint64_t out = 0;
        for (std::size_t t = 0; t < len_; ++t)
            out += weight_[t] * f_.add(static_cast<Elem>((a / weight_[t]) % q_), static_cast<Elem>((b / weight_[t]) % q_));
        return out;
    }

    std::uint64_t scale(std::uint64_t a, Elem c) const noexcept {
        if (c == 1) return a;
        std::uint64_t out = 0;
        for (std::size_t t = 0; t < len_; ++t)
            out += weight_[t] * f_.mul(c, static_cast<Elem>((a / weight_[t]) % q_));
        return out;
    }

    /// Position of the first nonzero entry; len() for the zero key.
    std::size_t lead(std::uint64_t key) const noexcept {
        for (std::size_t t = 0; t < len_; ++t)
            if (key >= weight_[t]) return t;
        return len_;
    }

    Matrix to_matrix(std::uint64_t key) const {
        std::vector<Elem> e(len_);
        decode(key, e);
        return Matrix(field_, m_, n_, std::move(e));
    }

    /// GF(2) rows of a key; row bit order is reversed, which rank ignores.
    void unpack_rows(std::uint64_t key, std::uint64_t* rows) const noexcept {
        const std::uint64_t mask = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
        for (std::size_t i = 0; i < m_; ++i) rows[i] = (key >> (len_ - (i + 1) * n_)) & mask;
    }

private:
    Field field_;
    const FieldSpec& f_;
    std::size_t m_, n_, len_;
    std::uint64_t q_;
    bool binary_;
    std::vector<std::uint64_t> weight_;
    std::uint64_t total_ = 0;
};

/// Rank-r membership: a bitmap over the whole space when it is small,
/// otherwise computed per query (batched through the SIMD kernel for GF(2)).
class RankOracle {
public:
    RankOracle(const KeySpace& ks, int r) : ks_(ks), r_(r) {
        const std::uint64_t limit = ks.binary() ? kBinaryTableLimit : kGenericTableLimit;
        if (ks.total() > limit) return;
        tabulated_ = true;
        bits_.assign((ks.total() + 63) / 64, 0);
        if (ks.binary()) {
            constexpr std::uint64_t kChunk = 4096;
            const std::size_t m = ks.rows();
            std::vector<std::uint64_t> rows(kChunk * m);
            std::vector<std::uint8_t> ranks(kChunk);
            for (std::uint64_t base = 0; base < ks.total(); base += kChunk) {
                const std::uint64_t count = std::min(kChunk, ks.total() - base);
                for (std::uint64_t k = 0; k < count; ++k) ks.unpack_rows(base + k, rows.data() + k * m);
                std::span<std::uint8_t> out(ranks.data(), count);
                kernels::gf2_rank_batch(std::span<const std::uint64_t>(rows.data(), count * m), m, out);
                for (std::uint64_t k = 0; k < count; ++k)
                    if (ranks[k] == r) set(base + k);
            }
        } else {
            std::vector<Elem> digits(ks.len(), 0);
            for (std::uint64_t key = 0; key < ks.total(); ++key) {
                if (key > 0) {
                    for (std::size_t t = ks.len(); t-- > 0;) {
                        if (++digits[t] < ks.q()) break;
                        digits[t] = 0;
                    }
                }
                if (detail::rank_of(ks.gf(), digits, ks.rows(), ks.cols()) == r) set(key);
            }
        }
    }

    bool tabulated() const noexcept { return tabulated_; }

    bool is_rank_r(std::uint64_t key) const {
        if (tabulated_) return (bits_[key >> 6] >> (key & 63)) & 1;
        if (ks_.binary()) {
            std::uint64_t rows[64];
            ks_.unpack_rows(key, rows);
            return kernels::gf2_rank(std::span<const std::uint64_t>(rows, ks_.rows())) == r_;
        }
        std::vector<Elem> digits(ks_.len());
        ks_.decode(key, digits);
        return detail::rank_of(ks_.gf(), digits, ks_.rows(), ks_.cols()) == r_;
    }

    /// True iff every key has rank r. `scratch` is caller-owned workspace.
    bool all_rank_r(std::span<const std::uint64_t> keys, std::vector<std::uint64_t>& scratch,
                    std::vector<std::uint8_t>& ranks) const {
        if (tabulated_ || !ks_.binary()) {
            for (auto k : keys)
                if (!is_rank_r(k)) return false;
            return true;
        }
        const std::size_t m = ks_.rows();
        scratch.resize(keys.size() * m);
        ranks.resize(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) ks_.unpack_rows(keys[i], scratch.data() + i * m);
        kernels::gf2_rank_batch(scratch, m, ranks);
        for (auto rk : ranks)
            if (rk != r_) return false;
        return true;
    }

private:
    void set(std::uint64_t key) { bits_[key >> 6] |= std::uint64_t{1} << (key & 63); }

    const KeySpace& ks_;
    int r_;
    bool tabulated_ = false;
    std::vector<std::uint64_t> bits_;
};

/// Candidate positions in ascending key order: indices into a sorted pool
/// when one was built, otherwise raw keys filtered on the fly.
class Candidates {
public:
    Candidates(const KeySpace& ks, const RankOracle& oracle) : ks_(ks), oracle_(oracle) {
        if (!oracle.tabulated()) return;
        pooled_ = true;
        for (std::uint64_t key = 1; key < ks.total(); ++key)
            if (oracle.is_rank_r(key) && ks.digit(key, ks.lead(key)) == 1) pool_.push_back(key);
    }

    std::uint64_t end() const noexcept { return pooled_ ? pool_.size() : ks_.total(); }
    /// Key at a position, or nullopt if that position is not a candidate.
    std::optional<std::uint64_t> at(std::uint64_t pos) const {
        if (pooled_) return pool_[pos];
        if (pos == 0 || ks_.digit(pos, ks_.lead(pos)) != 1 || !oracle_.is_rank_r(pos)) return std::nullopt;
        return pos;
    }
    /// Number of candidates; counts on the fly when no pool exists.
    std::uint64_t count() const {
        if (pooled_) return pool_.size();
        std::uint64_t c = 0;
        for (std::uint64_t k = 1; k < ks_.total(); ++k) c += at(k).has_value();
        return c;
    }

private:
    const KeySpace& ks_;
    const RankOracle& oracle_;
    bool pooled_ = false;
    std::vector<std::uint64_t> pool_;
};

struct Shared {
    Shared(std::uint64_t b, bool all, std::size_t t) : budget(b), count_all(all), target(t) {}
    std::uint64_t budget;
    bool count_all;
    std::size_t target;
    std::atomic<std::uint64_t> next_first{0};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<std::uint64_t> found{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> budget_hit{false};
    std::mutex witness_mutex;
    std::optional<std::pair<std::uint64_t, std::vector<std::uint64_t>>> witness;  // (first position, chain)
};

class Worker {
public:
    Worker(const KeySpace& ks, const RankOracle& oracle, const Candidates& cands, Shared& shared)
        : ks_(ks), oracle_(oracle), cands_(cands), sh_(shared) {
        spans_.resize(sh_.target + 1);
        spans_[0] = {0};
    }

    void run() {
        const std::uint64_t end = cands_.end();
        for (;;) {
            if (sh_.stop.load(std::memory_order_relaxed)) return;
            const std::uint64_t pos = sh_.next_first.fetch_add(1, std::memory_order_relaxed);
            if (pos >= end) return;
            const auto key = cands_.at(pos);
            if (!key) continue;
            if (ks_.lead(*key) + 1 < sh_.target) {
                // later positions only have smaller leads
                sh_.next_first.store(end, std::memory_order_relaxed);
                return;
            }
            first_pos_ = pos;
            try_extend(0, pos, *key);
        }
    }

private:
    /// Chain currently has `depth` elements; attempts to append `key`.
    void try_extend(std::size_t depth, std::uint64_t pos, std::uint64_t key) {
        for (std::size_t l : leads_)
            if (ks_.digit(key, l) != 0) return;  // not reduced against the current pivots
        const auto& span = spans_[depth];
        auto& next = spans_[depth + 1];
        next.assign(span.begin(), span.end());
        for (Elem lambda = 1; lambda < ks_.q(); ++lambda) {
            const std::uint64_t scaled = ks_.scale(key, lambda);
            const std::size_t from = next.size();
            for (std::uint64_t x : span) next.push_back(ks_.add(scaled, x));
            // the first new element is lambda * key itself, rank r by membership in the pool
            if (!oracle_.all_rank_r(std::span<const std::uint64_t>(next).subspan(from + 1), scratch_, ranks_))
                return;
        }

        if (sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1 > sh_.budget) {
            sh_.budget_hit.store(true);
            sh_.stop.store(true);
            return;
        }

        chain_.push_back(key);
        leads_.push_back(ks_.lead(key));
        if (depth + 1 == sh_.target) {
            sh_.found.fetch_add(1, std::memory_order_relaxed);
            {
                std::lock_guard lock(sh_.witness_mutex);
                if (!sh_.witness || first_pos_ < sh_.witness->first) sh_.witness.emplace(first_pos_, chain_);
            }
            if (!sh_.count_all) sh_.stop.store(true);
        } else {
            const std::size_t need_lead = sh_.target - depth - 2;  // leads left to place below this one
            const std::uint64_t end = cands_.end();
            for (std::uint64_t p = pos + 1; p < end; ++p) {
                if (sh_.stop.load(std::memory_order_relaxed)) break;
                const auto next_key = cands_.at(p);
                if (!next_key) continue;
                if (ks_.lead(*next_key) < need_lead) break;
                try_extend(depth + 1, p, *next_key);
            }
        }
        chain_.pop_back();
        leads_.pop_back();
    }

    const KeySpace& ks_;
    const RankOracle& oracle_;
    const Candidates& cands_;
    Shared& sh_;
    std::uint64_t first_pos_ = 0;
    std::vector<std::uint64_t> chain_;
    std::vector<std::size_t> leads_;
    std::vector<std::vector<std::uint64_t>> spans_;
    std::vector<std::uint64_t> scratch_;
    std::vector<std::uint8_t> ranks_;
};

void require_search_shape(std::size_t m, std::size_t n, std::size_t r, std::size_t dim) {
    if (!(1 <= r && r <= m && m <= n) || dim < 1)
        throw Error(ErrorKind::ShapeViolation, "need 1 <= r <= m <= n and dim >= 1; got r = " + std::to_string(r) +
                                                   ", m = " + std::to_string(m) + ", n = " + std::to_string(n) +
                                                   ", dim = " + std::to_string(dim));
}

}  // namespace

SearchOutcome search_constant_rank(const Field& field, std::size_t m, std::size_t n, std::size_t r,
                                   std::size_t target_dim, const SearchOptions& opts) {
    require_search_shape(m, n, r, target_dim);
    const auto start = std::chrono::steady_clock::now();
    const KeySpace ks(field, m, n);
    const RankOracle oracle(ks, static_cast<int>(r));
    const Candidates cands(ks, oracle);

    Shared shared(opts.node_budget, opts.count_all, target_dim);
    SearchOutcome out;
    if (target_dim <= ks.len()) {
        const unsigned workers = std::max(1u, opts.workers);
        if (workers == 1) {
            Worker(ks, oracle, cands, shared).run();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] { Worker(ks, oracle, cands, shared).run(); });
            for (auto& t : pool) t.join();
        }
    }

    out.nodes_explored = std::min(shared.nodes.load(), opts.node_budget);
    out.found_count = shared.found.load();
    out.candidate_count = cands.count();
    if (shared.witness) {
        std::vector<Matrix> basis;
        for (auto key : shared.witness->second) basis.push_back(ks.to_matrix(key));
        Subspace w = Subspace::from_basis(std::move(basis));
        if (!is_constant_rank(w, static_cast<int>(r)).holds || w.dim() != target_dim)
            throw Error(ErrorKind::InternalVerificationFailed, "search produced an invalid witness");
        out.witness = std::move(w);
    }
    if (shared.budget_hit.load())
        out.status = SearchStatus::BudgetExceeded;
    else
        out.status = out.found_count > 0 ? SearchStatus::Found : SearchStatus::ExhaustedNone;
    // An early exit on Found can race a budget hit in another worker; Found wins.
    if (!opts.count_all && out.witness) out.status = SearchStatus::Found;
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

BigInt census_size(const Field& field, std::size_t m, std::size_t n, std::size_t dim) {
    return gaussian_binomial(static_cast<unsigned>(m * n), static_cast<unsigned>(dim), field->q());
}

std::uint64_t brute_force_census(const Field& field, std::size_t m, std::size_t n, std::size_t r,
                                 std::size_t dim, std::uint64_t limit) {
    require_search_shape(m, n, r, dim);
    const std::size_t len = m * n;
    if (dim > len) return 0;
    if (census_size(field, m, n, dim) > limit)
        throw Error(ErrorKind::BudgetExceeded, "Gaussian binomial [" + std::to_string(len) + ", " +
                                                   std::to_string(dim) + "]_" + std::to_string(field->q()) +
                                                   " exceeds the census limit " + std::to_string(limit));
    const FieldSpec& f = *field;
    const Elem q = static_cast<Elem>(f.q());

    std::vector<Elem> scratch(len);
    auto has_rank_r = [&](std::span<const Elem> entries) {
        std::copy(entries.begin(), entries.end(), scratch.begin());
        return detail::echelonize(f, scratch, m, n, false).size() == r;
    };

    std::uint64_t count = 0;
    std::vector<std::size_t> pivots(dim);
    for (std::size_t i = 0; i < dim; ++i) pivots[i] = i;
    std::vector<Elem> rows(dim * len), combo(len), coeffs(dim);

    for (;;) {
        // free slots: (row, position) with position after the row's pivot and not a pivot itself
        std::vector<bool> is_pivot(len, false);
        for (auto p : pivots) is_pivot[p] = true;
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t t = pivots[i] + 1; t < len; ++t)
                if (!is_pivot[t]) free.emplace_back(i, t);

        std::fill(rows.begin(), rows.end(), 0);
        for (std::size_t i = 0; i < dim; ++i) rows[i * len + pivots[i]] = 1;
        std::vector<Elem> digits(free.size(), 0);
        for (;;) {
            bool ok = true;
            for (std::size_t i = 0; i < dim && ok; ++i)
                ok = has_rank_r(std::span<const Elem>(rows).subspan(i * len, len));
            // every nonzero combination up to scalars: leading coefficient 1
            for (std::size_t lead = 0; lead < dim && ok; ++lead) {
                std::fill(coeffs.begin(), coeffs.end(), 0);
                coeffs[lead] = 1;
                for (;;) {
                    std::fill(combo.begin(), combo.end(), 0);
                    for (std::size_t i = lead; i < dim; ++i)
                        if (coeffs[i])
                            for (std::size_t t = 0; t < len; ++t)
                                combo[t] = f.add(combo[t], f.mul(coeffs[i], rows[i * len + t]));
                    if (!has_rank_r(combo)) {
                        ok = false;
                        break;
                    }
                    std::size_t i = dim;
                    while (i-- > lead + 1) {
                        if (++coeffs[i] < q) break;
                        coeffs[i] = 0;
                    }
                    if (i == lead) break;
                }
            }
            if (ok) ++count;

            std::size_t k = free.size();
            while (k-- > 0) {
                const auto [row, pos] = free[k];
                if (++digits[k] < q) {
                    rows[row * len + pos] = digits[k];
                    break;
                }
                digits[k] = 0;
                rows[row * len + pos] = 0;
            }
            if (k == static_cast<std::size_t>(-1)) break;
        }

        // next pivot combination in lexicographic order
        std::size_t i = dim;
        while (i-- > 0) {
            if (pivots[i] < len - dim + i) break;
        }
        if (i == static_cast<std::size_t>(-1)) break;
        ++pivots[i];
        for (std::size_t j = i + 1; j < dim; ++j) pivots[j] = pivots[j - 1] + 1;
    }
    return count;
}

namespace detail {

bool is_coset_leader_bruteforce(const Matrix& c, std::span<const Matrix> basis) {
    if (basis.empty()) return true;
    const Subspace s = Subspace::from_basis(std::vector<Matrix>(basis.begin(), basis.end()));
    bool least = true;
    for_each_element(s, [&](const Matrix& x) {
        if (c + x < c) least = false;
        return least;
    });
    return least;
}

}  // namespace detail

}  // namespace constrank
