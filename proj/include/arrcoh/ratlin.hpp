/**
 * Exact rational scalars and dense matrices.
 *
 * Everything here is exact: scalars are GMP-backed rationals kept in lowest
 * terms, and row reduction uses the deterministic pivot rule "leftmost
 * nonzero column, topmost candidate row", so rref() is reproducible and
 * canonical.
 */
#ifndef ARRCOH_RATLIN_HPP
#define ARRCOH_RATLIN_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace arrcoh {

// Always in lowest terms with a positive denominator (GMP canonicalizes).
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/**
 * Dense row-major matrix over the rationals. A matrix with rows() x cols()
 * represents a linear map from Q^cols to Q^rows acting on column vectors.
 * Degenerate shapes (0 x k, k x 0) are legal.
 */
class QMatrix
{
  public:
    QMatrix() = default;

    QMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols)
    {
    }

    QMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows)
        {
            if (row.size() != cols_)
                throw std::invalid_argument("QMatrix: ragged initializer");
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static QMatrix identity(std::size_t n)
    {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static QMatrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols)
    {
        QMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (rows[i].size() != cols)
                throw std::invalid_argument("QMatrix::from_rows: row length mismatch");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static QMatrix column(std::span<const Rational> v)
    {
        QMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return entries_.empty(); }

    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const Rational> row(std::size_t i) const
    {
        return {entries_.data() + i * cols_, cols_};
    }

    std::vector<Rational> col(std::size_t j) const
    {
        std::vector<Rational> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    const std::vector<Rational>& entries() const { return entries_; }

    bool is_zero() const
    {
        for (const auto& x : entries_)
            if (x != 0)
                return false;
        return true;
    }

    QMatrix transpose() const
    {
        QMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Submatrix made of the listed rows (in the given order).
    QMatrix select_rows(std::span<const std::size_t> which) const
    {
        QMatrix m(which.size(), cols_);
        for (std::size_t i = 0; i < which.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = (*this)(which[i], j);
        return m;
    }

    QMatrix select_cols(std::span<const std::size_t> which) const
    {
        QMatrix m(rows_, which.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < which.size(); ++j)
                m(i, j) = (*this)(i, which[j]);
        return m;
    }

    friend bool operator==(const QMatrix& a, const QMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

    friend QMatrix operator+(const QMatrix& a, const QMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("QMatrix +: shape mismatch");
        QMatrix c(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            c.entries_[k] = a.entries_[k] + b.entries_[k];
        return c;
    }

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("QMatrix *: shape mismatch");
        QMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
            {
                const Rational& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend QMatrix operator*(const Rational& s, const QMatrix& a)
    {
        QMatrix c = a;
        for (auto& x : c.entries_)
            x *= s;
        return c;
    }

    friend std::ostream& operator<<(std::ostream& os, const QMatrix& m)
    {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i)
        {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? ", " : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

/// [a | b], both with the same number of rows.
inline QMatrix hstack(const QMatrix& a, const QMatrix& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("hstack: row count mismatch");
    QMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j)
            m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

inline QMatrix vstack(const QMatrix& a, const QMatrix& b)
{
    if (a.cols() != b.cols())
        throw std::invalid_argument("vstack: column count mismatch");
    QMatrix m(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            m(a.rows() + i, j) = b(i, j);
    return m;
}

inline std::vector<Rational> apply(const QMatrix& m, std::span<const Rational> x)
{
    if (x.size() != m.cols())
        throw std::invalid_argument("apply: vector length mismatch");
    std::vector<Rational> y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (x[j] != 0)
                y[i] += m(i, j) * x[j];
    return y;
}

struct RrefResult
{
    QMatrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
};

/**
 * Reduced row echelon form by Gauss-Jordan elimination. Pivots are chosen in
 * the leftmost column that still has a nonzero entry below the current row,
 * taking the topmost such row.
 */
inline RrefResult rref(QMatrix m)
{
    RrefResult out;
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col)
    {
        std::size_t pivot = lead;
        while (pivot < rows && m(pivot, col) == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        if (pivot != lead)
            for (std::size_t j = col; j < cols; ++j)
                std::swap(m(pivot, j), m(lead, j));

        const Rational inv = 1 / m(lead, col);
        for (std::size_t j = col; j < cols; ++j)
            m(lead, j) *= inv;

        for (std::size_t i = 0; i < rows; ++i)
        {
            if (i == lead || m(i, col) == 0)
                continue;
            const Rational factor = m(i, col);
            for (std::size_t j = col; j < cols; ++j)
                if (m(lead, j) != 0)
                    m(i, j) -= factor * m(lead, j);
        }
        out.pivot_columns.push_back(col);
        ++lead;
    }
    out.rank = lead;
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const QMatrix& m)
{
    // Eliminate along the shorter side.
    if (m.rows() > m.cols())
        return rref(m.transpose()).rank;
    return rref(m).rank;
}

/**
 * Basis of the right kernel {x : m x = 0}, one vector per column. The basis
 * vector attached to free column f has a 1 in position f and zeros in every
 * other free position.
 */
inline QMatrix kernel_basis(const QMatrix& m)
{
    const RrefResult r = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : r.pivot_columns)
        is_pivot[c] = true;

    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);

    QMatrix basis(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k)
    {
        const std::size_t f = free_cols[k];
        basis(f, k) = 1;
        for (std::size_t i = 0; i < r.rank; ++i)
            basis(r.pivot_columns[i], k) = -r.reduced(i, f);
    }
    return basis;
}

struct Solution
{
    std::vector<Rational> particular;
    QMatrix kernel;
};

/// One solution of m x = b plus the kernel of m, or nullopt when inconsistent.
inline std::optional<Solution> solve(const QMatrix& m, std::span<const Rational> b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side has length " + std::to_string(b.size()) +
                                    " but matrix has " + std::to_string(m.rows()) + " rows");
    const RrefResult r = rref(hstack(m, QMatrix::column(b)));
    const std::size_t n = m.cols();
    if (!r.pivot_columns.empty() && r.pivot_columns.back() == n)
        return std::nullopt;

    Solution s;
    s.particular.assign(n, Rational(0));
    for (std::size_t i = 0; i < r.rank; ++i)
        s.particular[r.pivot_columns[i]] = r.reduced(i, n);
    s.kernel = kernel_basis(m);
    return s;
}

/// Inverse of a square matrix, or nullopt when singular.
inline std::optional<QMatrix> inverse(const QMatrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse: matrix is not square");
    const std::size_t n = m.rows();
    const RrefResult r = rref(hstack(m, QMatrix::identity(n)));
    if (r.rank < n || (n > 0 && r.pivot_columns[n - 1] != n - 1))
        return std::nullopt;
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = r.reduced(i, n + j);
    return inv;
}

/// Drops all-zero rows (useful after rref).
inline QMatrix nonzero_rows(const QMatrix& m)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        bool zero = true;
        for (const auto& x : m.row(i))
            if (x != 0)
            {
                zero = false;
                break;
            }
        if (!zero)
            keep.push_back(i);
    }
    return m.select_rows(keep);
}

/// Parses "p/q" or an integer, with optional sign. Returns nullopt on bad syntax or q = 0.
inline std::optional<Rational> parse_rational(const std::string& token)
{
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    auto strip_plus = [](const std::string& s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };

    const auto slash = token.find('/');
    if (slash == std::string::npos)
    {
        if (!is_int(token))
            return std::nullopt;
        return Rational(Integer(strip_plus(token)));
    }
    const std::string num = token.substr(0, slash);
    const std::string den = token.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
        return std::nullopt;
    const Integer d(den);
    if (d == 0)
        return std::nullopt;
    return Rational(Integer(strip_plus(num)), d);
}

}   // namespace arrcoh

#endif
