#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gtkit {

// Fixed-length bit vector packed into 64-bit words, LSB-first within a word.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    bool operator==(const BitVec& o) const = default;

    // Calls fn(index) for every set bit in increasing order.
    template <class Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = std::countr_zero(w);
                fn(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// T x n binary matrix stored as bit-packed rows (row-major words). Rows give
// the O(1) word access the outcome computation needs; column extraction
// walks rows once per column.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(rows * ((cols + 63) / 64), 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t i, std::size_t j) const {
        return (words_[i * wpr_ + (j >> 6)] >> (j & 63)) & 1;
    }
    void set(std::size_t i, std::size_t j, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (j & 63);
        std::uint64_t& w = words_[i * wpr_ + (j >> 6)];
        if (v)
            w |= mask;
        else
            w &= ~mask;
    }

    std::span<const std::uint64_t> row_words(std::size_t i) const {
        return {words_.data() + i * wpr_, wpr_};
    }
    std::span<std::uint64_t> row_words(std::size_t i) {
        return {words_.data() + i * wpr_, wpr_};
    }

    std::size_t row_weight(std::size_t i) const {
        std::size_t c = 0;
        for (auto w : row_words(i)) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    BitVec column(std::size_t j) const {
        BitVec col(rows_);
        const std::size_t wi = j >> 6;
        const std::uint64_t mask = std::uint64_t{1} << (j & 63);
        for (std::size_t i = 0; i < rows_; ++i)
            if (words_[i * wpr_ + wi] & mask) col.set(i, true);
        return col;
    }

    // Calls fn(j) for every set column index in row i, in increasing order.
    template <class Fn>
    void for_each_set_in_row(std::size_t i, Fn&& fn) const {
        const std::uint64_t* base = words_.data() + i * wpr_;
        for (std::size_t wi = 0; wi < wpr_; ++wi) {
            std::uint64_t w = base[wi];
            while (w) {
                const int b = std::countr_zero(w);
                fn(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    bool operator==(const BitMatrix& o) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace gtkit
