#include "fcalab/gf2.hpp"

#include "fcalab/errors.hpp"

#include <bit>
#include <utility>

namespace fcalab {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

void require_same_length(const BitSequence& x, const BitSequence& y, const char* what)
{
    if (x.size() != y.size()) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()) + ")");
    }
}

} // namespace

BitSequence::BitSequence(std::size_t length) : size_(length), words_(word_count(length), 0) {}

BitSequence::BitSequence(std::initializer_list<int> bits) : BitSequence(bits.size())
{
    std::size_t i = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw RangeError("bit values must be 0 or 1");
        }
        set(i++, b == 1);
    }
}

BitSequence BitSequence::from_string(std::string_view bits)
{
    BitSequence out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            out.set(i, true);
        } else if (bits[i] != '0') {
            throw ParseError("bit string may only contain '0' and '1'");
        }
    }
    return out;
}

bool BitSequence::at(std::size_t i) const
{
    if (i >= size_) {
        throw DimensionError("bit index " + std::to_string(i) + " out of range for length " +
                             std::to_string(size_));
    }
    return (*this)[i];
}

void BitSequence::set(std::size_t i, bool value)
{
    const auto mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

std::size_t BitSequence::popcount() const
{
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

bool BitSequence::none() const
{
    for (auto w : words_) {
        if (w != 0) {
            return false;
        }
    }
    return true;
}

bool BitSequence::dot(const BitSequence& other) const
{
    require_same_length(*this, other, "dot");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        acc ^= words_[i] & other.words_[i];
    }
    return std::popcount(acc) & 1;
}

BitSequence& BitSequence::operator^=(const BitSequence& other)
{
    require_same_length(*this, other, "xor");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

std::string BitSequence::to_string() const
{
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) {
            s[i] = '1';
        }
    }
    return s;
}

BitSequence xor_sequences(const BitSequence& x, const BitSequence& y)
{
    BitSequence out = x;
    out ^= y;
    return out;
}

std::size_t hamming_distance(const BitSequence& x, const BitSequence& y)
{
    require_same_length(x, y, "hamming_distance");
    std::size_t n = 0;
    auto xw = x.words();
    auto yw = y.words();
    for (std::size_t i = 0; i < xw.size(); ++i) {
        n += static_cast<std::size_t>(std::popcount(xw[i] ^ yw[i]));
    }
    return n;
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitSequence(cols)) {}

Gf2Matrix Gf2Matrix::identity(std::size_t n)
{
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.rows_[i].set(i, true);
    }
    return m;
}

Gf2Matrix Gf2Matrix::from_rows(std::span<const BitSequence> rows)
{
    if (rows.empty()) {
        return {};
    }
    Gf2Matrix m(0, rows.front().size());
    for (const auto& r : rows) {
        m.append_row(r);
    }
    return m;
}

bool Gf2Matrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_.size() || c >= cols_) {
        throw DimensionError("matrix index out of range");
    }
    return rows_[r][c];
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool value)
{
    if (r >= rows_.size() || c >= cols_) {
        throw DimensionError("matrix index out of range");
    }
    rows_[r].set(c, value);
}

const BitSequence& Gf2Matrix::row(std::size_t r) const
{
    if (r >= rows_.size()) {
        throw DimensionError("row index out of range");
    }
    return rows_[r];
}

void Gf2Matrix::append_row(const BitSequence& row)
{
    if (row.size() != cols_) {
        throw DimensionError("appended row has " + std::to_string(row.size()) + " columns, matrix has " +
                             std::to_string(cols_));
    }
    rows_.push_back(row);
}

BitSequence Gf2Matrix::multiply(const BitSequence& x) const
{
    if (x.size() != cols_) {
        throw DimensionError("matrix-vector product: vector length does not match column count");
    }
    BitSequence out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        out.set(r, rows_[r].dot(x));
    }
    return out;
}

namespace {

// Gauss-Jordan elimination on [A | I]; returns the columns of A^{-1}.
std::vector<BitSequence> invert_columns(const Gf2Matrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw DimensionError("matrix must be square");
    }
    std::vector<BitSequence> left(n);
    std::vector<BitSequence> right(n, BitSequence(n));
    for (std::size_t r = 0; r < n; ++r) {
        left[r] = a.row(r);
        right[r].set(r, true);
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && !left[pivot][col]) {
            ++pivot;
        }
        if (pivot == n) {
            throw SingularMatrixError("matrix is singular: no pivot in column " + std::to_string(col));
        }
        std::swap(left[pivot], left[col]);
        std::swap(right[pivot], right[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != col && left[r][col]) {
                left[r] ^= left[col];
                right[r] ^= right[col];
            }
        }
    }

    // right now holds the rows of A^{-1}; transpose into columns.
    std::vector<BitSequence> columns(n, BitSequence(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (right[r][c]) {
                columns[c].set(r, true);
            }
        }
    }
    return columns;
}

} // namespace

BitSequence solve_gf2(const Gf2Matrix& a, const BitSequence& b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw DimensionError("solve_gf2: matrix must be square");
    }
    if (b.size() != n) {
        throw DimensionError("solve_gf2: right-hand side length does not match matrix");
    }

    std::vector<BitSequence> rows(n);
    BitSequence rhs = b;
    for (std::size_t r = 0; r < n; ++r) {
        rows[r] = a.row(r);
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && !rows[pivot][col]) {
            ++pivot;
        }
        if (pivot == n) {
            throw SingularMatrixError("matrix is singular: no pivot in column " + std::to_string(col));
        }
        if (pivot != col) {
            std::swap(rows[pivot], rows[col]);
            const bool tmp = rhs[pivot];
            rhs.set(pivot, rhs[col]);
            rhs.set(col, tmp);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            if (rows[r][col]) {
                rows[r] ^= rows[col];
                if (rhs[col]) {
                    rhs.flip(r);
                }
            }
        }
    }

    BitSequence x(n);
    for (std::size_t i = n; i-- > 0;) {
        bool v = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            if (rows[i][c] && x[c]) {
                v = !v;
            }
        }
        x.set(i, v);
    }
    return x;
}

Gf2Inverse::Gf2Inverse(const Gf2Matrix& a) : columns_(invert_columns(a)) {}

BitSequence Gf2Inverse::solve(const BitSequence& b) const
{
    if (b.size() != columns_.size()) {
        throw DimensionError("Gf2Inverse::solve: right-hand side length does not match matrix");
    }
    BitSequence x(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (b[c]) {
            x ^= columns_[c];
        }
    }
    return x;
}

RankBasis::RankBasis(std::size_t cols) : cols_(cols), pivot_rows_(cols), has_pivot_(cols, false) {}

bool RankBasis::extend(const BitSequence& row)
{
    if (row.size() != cols_) {
        throw DimensionError("rank_extend: row length does not match column count");
    }
    BitSequence v = row;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (!v[c]) {
            continue;
        }
        if (!has_pivot_[c]) {
            pivot_rows_[c] = std::move(v);
            has_pivot_[c] = true;
            ++rank_;
            return true;
        }
        v ^= pivot_rows_[c];
    }
    return false;
}

bool rank_extend(const Gf2Matrix& a, const BitSequence& row)
{
    if (row.size() != a.cols()) {
        throw DimensionError("rank_extend: row length does not match column count");
    }
    RankBasis basis(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        basis.extend(a.row(r));
    }
    return basis.extend(row);
}

std::size_t rank_of(const Gf2Matrix& a)
{
    RankBasis basis(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        basis.extend(a.row(r));
    }
    return basis.rank();
}

} // namespace fcalab
