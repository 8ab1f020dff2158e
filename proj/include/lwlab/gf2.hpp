#pragma once

// Bit-packed binary vectors, column-sparse binary matrices, and the syndrome
// algebra on sets of fault columns: XOR sums, Hamming weight w, unique-check
// count n_u, and canceled-check count n_c = n_u - w.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lwlab {

// Dense bit-packed vector over GF(2). Word-level XOR and popcount; used for
// syndromes, fault indicators, and decoder hard decisions.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    static BitVec from_indices(std::size_t n_bits, std::span<const std::uint32_t> indices) {
        BitVec v(n_bits);
        for (std::uint32_t i : indices) v.set(i);
        return v;
    }

    std::size_t size() const { return n_bits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    void xor_with(const BitVec& other) {
        if (other.n_bits_ != n_bits_)
            throw std::invalid_argument("BitVec::xor_with: size mismatch");
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool none() const {
        for (std::uint64_t w : words_)
            if (w != 0) return false;
        return true;
    }

    std::vector<std::uint32_t> nonzero_indices() const {
        std::vector<std::uint32_t> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    // lowest set bit index, or size() if none
    std::size_t lowest_set() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != 0) return w * 64 + std::countr_zero(words_[w]);
        return n_bits_;
    }

    std::span<const std::uint64_t> words() const { return words_; }

    bool operator==(const BitVec&) const = default;

private:
    std::size_t n_bits_ = 0;
    std::vector<std::uint64_t> words_;
};

// A syndrome is one bit per check, i.e. a BitVec of length n_rows of the
// owning matrix.
using Syndrome = BitVec;

// Column-sparse binary matrix. Immutable after construction; each column is a
// strictly increasing list of row indices.
class SparseBitMatrix {
public:
    SparseBitMatrix() = default;

    SparseBitMatrix(std::uint32_t n_rows, std::uint32_t n_cols,
                    std::vector<std::vector<std::uint32_t>> columns)
        : n_rows_(n_rows), n_cols_(n_cols), cols_(std::move(columns)) {
        if (cols_.size() != n_cols_)
            throw std::invalid_argument("SparseBitMatrix: column count mismatch");
        for (std::uint32_t j = 0; j < n_cols_; ++j) {
            const auto& col = cols_[j];
            for (std::size_t k = 0; k < col.size(); ++k) {
                if (col[k] >= n_rows_)
                    throw std::invalid_argument("SparseBitMatrix: row index " +
                                                std::to_string(col[k]) + " out of range in column " +
                                                std::to_string(j));
                if (k > 0 && col[k] <= col[k - 1])
                    throw std::invalid_argument(
                        "SparseBitMatrix: row indices not strictly increasing in column " +
                        std::to_string(j));
            }
        }
    }

    std::uint32_t n_rows() const { return n_rows_; }
    std::uint32_t n_cols() const { return n_cols_; }

    std::span<const std::uint32_t> col(std::uint32_t j) const { return cols_[j]; }
    std::uint32_t col_weight(std::uint32_t j) const { return static_cast<std::uint32_t>(cols_[j].size()); }
    const std::vector<std::vector<std::uint32_t>>& columns() const { return cols_; }

    // row -> sorted column indices; materialized on demand
    std::vector<std::vector<std::uint32_t>> row_adjacency() const {
        std::vector<std::vector<std::uint32_t>> rows(n_rows_);
        for (std::uint32_t j = 0; j < n_cols_; ++j)
            for (std::uint32_t r : cols_[j]) rows[r].push_back(j);
        return rows;
    }

    bool operator==(const SparseBitMatrix&) const = default;

private:
    std::uint32_t n_rows_ = 0;
    std::uint32_t n_cols_ = 0;
    std::vector<std::vector<std::uint32_t>> cols_;
};

// w: weight of the combined syndrome; n_u: unique checks touched by the
// column set; n_c = n_u - w: checks appearing an even positive number of times.
struct ComboMetrics {
    std::uint32_t w = 0;
    std::uint32_t n_u = 0;
    std::uint32_t n_c = 0;

    bool operator==(const ComboMetrics&) const = default;
};

namespace detail {
inline void validate_column_set(const SparseBitMatrix& h, std::span<const std::uint32_t> idx) {
    for (std::uint32_t j : idx)
        if (j >= h.n_cols())
            throw std::invalid_argument("column index " + std::to_string(j) + " out of range");
    std::vector<std::uint32_t> sorted(idx.begin(), idx.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("duplicate column index in fault set");
}
}  // namespace detail

// XOR (mod-2 sum) of a set of distinct fault columns.
inline Syndrome xor_columns(const SparseBitMatrix& h, std::span<const std::uint32_t> idx) {
    detail::validate_column_set(h, idx);
    Syndrome s(h.n_rows());
    for (std::uint32_t j : idx)
        for (std::uint32_t r : h.col(j)) s.flip(r);
    return s;
}

inline std::uint32_t hamming_weight(const BitVec& s) {
    return static_cast<std::uint32_t>(s.popcount());
}

// |union of the columns' row sets|
inline std::uint32_t unique_checks(const SparseBitMatrix& h, std::span<const std::uint32_t> idx) {
    detail::validate_column_set(h, idx);
    BitVec touched(h.n_rows());
    for (std::uint32_t j : idx)
        for (std::uint32_t r : h.col(j)) touched.set(r);
    return static_cast<std::uint32_t>(touched.popcount());
}

inline ComboMetrics canceled_checks(const SparseBitMatrix& h, std::span<const std::uint32_t> idx) {
    detail::validate_column_set(h, idx);
    BitVec parity(h.n_rows());
    BitVec touched(h.n_rows());
    for (std::uint32_t j : idx) {
        for (std::uint32_t r : h.col(j)) {
            parity.flip(r);
            touched.set(r);
        }
    }
    ComboMetrics m;
    m.w = static_cast<std::uint32_t>(parity.popcount());
    m.n_u = static_cast<std::uint32_t>(touched.popcount());
    m.n_c = m.n_u - m.w;
    return m;
}

// H * e mod 2 for a dense fault indicator e.
inline Syndrome mat_vec_mod2(const SparseBitMatrix& h, const BitVec& e) {
    if (e.size() != h.n_cols())
        throw std::invalid_argument("mat_vec_mod2: fault vector length " +
                                    std::to_string(e.size()) + " != n_cols " +
                                    std::to_string(h.n_cols()));
    Syndrome s(h.n_rows());
    for (std::size_t w = 0; w < e.words().size(); ++w) {
        std::uint64_t bits = e.words()[w];
        while (bits) {
            std::uint32_t j = static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            for (std::uint32_t r : h.col(j)) s.flip(r);
        }
    }
    return s;
}

}  // namespace lwlab
