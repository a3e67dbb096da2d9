#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcalab {

/// Fixed-length binary sequence, bit-packed into 64-bit words.
///
/// Bit i lives in word i / 64 at position i % 64. Padding bits past size()
/// are kept at zero so word-wise operations (popcount, equality) stay exact.
class BitSequence
{
public:
    BitSequence() = default;
    explicit BitSequence(std::size_t length);
    BitSequence(std::initializer_list<int> bits);

    static BitSequence from_string(std::string_view bits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool operator[](std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool at(std::size_t i) const;

    void set(std::size_t i, bool value);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t popcount() const;
    bool none() const;

    /// Dot product over GF(2); lengths must match.
    bool dot(const BitSequence& other) const;

    BitSequence& operator^=(const BitSequence& other);

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    /// '0'/'1' characters, index 0 first.
    std::string to_string() const;

    friend bool operator==(const BitSequence&, const BitSequence&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

BitSequence xor_sequences(const BitSequence& x, const BitSequence& y);

/// Number of positions where x and y differ.
std::size_t hamming_distance(const BitSequence& x, const BitSequence& y);

/// Dense matrix over GF(2), stored as packed rows.
class Gf2Matrix
{
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols);

    static Gf2Matrix identity(std::size_t n);
    static Gf2Matrix from_rows(std::span<const BitSequence> rows);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);

    const BitSequence& row(std::size_t r) const;
    void append_row(const BitSequence& row);

    BitSequence multiply(const BitSequence& x) const;

    friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitSequence> rows_;
};

/// Solves A x = b for square nonsingular A. Throws SingularMatrixError when a
/// column has no pivot.
BitSequence solve_gf2(const Gf2Matrix& a, const BitSequence& b);

/// Inverse of a square matrix, computed once and reused for many right-hand
/// sides. solve(b) is a matrix-vector product; the column accessors let a
/// caller update a solution incrementally when only a few entries of b change.
class Gf2Inverse
{
public:
    explicit Gf2Inverse(const Gf2Matrix& a);

    std::size_t dim() const { return columns_.size(); }

    BitSequence solve(const BitSequence& b) const;

    /// Column c of the inverse, i.e. the solution for the unit vector e_c.
    const BitSequence& column(std::size_t c) const { return columns_[c]; }

private:
    std::vector<BitSequence> columns_;
};

/// Incrementally maintained row-echelon basis for greedy independent-row
/// selection.
class RankBasis
{
public:
    explicit RankBasis(std::size_t cols);

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rank_; }

    /// Inserts row if it is independent of the rows seen so far.
    /// Returns true iff the rank increased.
    bool extend(const BitSequence& row);

private:
    std::size_t cols_;
    std::size_t rank_ = 0;
    std::vector<BitSequence> pivot_rows_; // indexed by pivot column
    std::vector<bool> has_pivot_;
};

/// True iff appending row to a strictly increases its rank.
bool rank_extend(const Gf2Matrix& a, const BitSequence& row);

std::size_t rank_of(const Gf2Matrix& a);

} // namespace fcalab
