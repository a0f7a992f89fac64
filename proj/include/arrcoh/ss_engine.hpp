/**
 * The two usual spectral sequences of a bounded double complex of finite
 * dimensional Q-vector spaces.
 *
 * Conventions. C^{p,q} has d_horiz : C^{p,q} -> C^{p+1,q} and
 * d_vert : C^{p,q} -> C^{p,q+1}, with d_h^2 = d_v^2 = d_h d_v + d_v d_h = 0.
 * Pages are reported at the bidegree (p,q) of the double complex:
 *
 *   Horizontal: filtration by rows, F^k = sum_{q >= k} C^{*,q}; d_0 = d_horiz,
 *               so E_1^{p,q} = H^p(C^{*,q}).
 *   Vertical:   filtration by columns, F^k = sum_{p >= k} C^{p,*}; d_0 = d_vert,
 *               so E_1^{p,q} = H^q(C^{p,*}).
 *
 * Page dimensions come from the filtered total complex T:
 *
 *   E_r = (Z_r^k + F^{k+1}) / (d Z_{r-1}^{k-r+1} + F^{k+1}),
 *   Z_r^k = { x in F^k T^m : d x in F^{k+r} T^{m+1} }.
 *
 * Both numerator and denominator lie in F^k, so each dimension is the rank of
 * a spanning set projected to the coordinates of filtration degree exactly k.
 */
#ifndef ARRCOH_SS_ENGINE_HPP
#define ARRCOH_SS_ENGINE_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ratlin.hpp"

namespace arrcoh {

using Bidegree = std::pair<int, int>;

/// A double complex that fails d^2 = 0, anticommutation, or a shape check at (p,q).
class InvariantViolation : public ValidationError
{
  public:
    InvariantViolation(Bidegree at, const std::string& what)
        : ValidationError("at (" + std::to_string(at.first) + "," + std::to_string(at.second) + "): " + what),
          at_(at)
    {
    }

    Bidegree position() const { return at_; }

  private:
    Bidegree at_;
};

/// Kronecker product a (x) b.
inline QMatrix kron(const QMatrix& a, const QMatrix& b)
{
    QMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
        {
            if (a(i, j) == 0)
                continue;
            for (std::size_t u = 0; u < b.rows(); ++u)
                for (std::size_t v = 0; v < b.cols(); ++v)
                    k(i * b.rows() + u, j * b.cols() + v) = a(i, j) * b(u, v);
        }
    return k;
}

struct DoubleComplex
{
    std::map<Bidegree, std::size_t> dims;
    std::map<Bidegree, QMatrix> d_horiz;
    std::map<Bidegree, QMatrix> d_vert;

    std::size_t dim(int p, int q) const
    {
        auto it = dims.find({p, q});
        return it == dims.end() ? 0 : it->second;
    }

    /// d_horiz at (p,q); the zero map of the right shape when unspecified.
    QMatrix horizontal(int p, int q) const
    {
        auto it = d_horiz.find({p, q});
        return it == d_horiz.end() ? QMatrix(dim(p + 1, q), dim(p, q)) : it->second;
    }

    QMatrix vertical(int p, int q) const
    {
        auto it = d_vert.find({p, q});
        return it == d_vert.end() ? QMatrix(dim(p, q + 1), dim(p, q)) : it->second;
    }

    bool empty() const
    {
        return std::all_of(dims.begin(), dims.end(), [](const auto& kv) { return kv.second == 0; });
    }

    /// Positions with nonzero dimension.
    std::vector<Bidegree> support() const
    {
        std::vector<Bidegree> s;
        for (const auto& [pq, d] : dims)
            if (d != 0)
                s.push_back(pq);
        return s;
    }

    /// Throws InvariantViolation at the first offending position.
    void validate() const
    {
        for (const auto& [pq, m] : d_horiz)
            if (m.rows() != dim(pq.first + 1, pq.second) || m.cols() != dim(pq.first, pq.second))
                throw InvariantViolation(pq, "horizontal differential has the wrong shape");
        for (const auto& [pq, m] : d_vert)
            if (m.rows() != dim(pq.first, pq.second + 1) || m.cols() != dim(pq.first, pq.second))
                throw InvariantViolation(pq, "vertical differential has the wrong shape");

        for (const auto& [pq, d] : dims)
        {
            if (d == 0)
                continue;
            const auto [p, q] = pq;
            if (!(horizontal(p + 1, q) * horizontal(p, q)).is_zero())
                throw InvariantViolation(pq, "d_horiz o d_horiz != 0");
            if (!(vertical(p, q + 1) * vertical(p, q)).is_zero())
                throw InvariantViolation(pq, "d_vert o d_vert != 0");
            if (!(horizontal(p, q + 1) * vertical(p, q) + vertical(p + 1, q) * horizontal(p, q)).is_zero())
                throw InvariantViolation(pq, "d_horiz d_vert + d_vert d_horiz != 0");
        }
    }
};

/// Tot^m = sum_{p+q=m} C^{p,q}, blocks ordered by increasing p.
struct TotalComplex
{
    std::map<int, std::size_t> dims;
    /// differential[m] : Tot^m -> Tot^{m+1}
    std::map<int, QMatrix> differential;
    /// blocks[m] = (bidegree, coordinate offset) for each summand of Tot^m.
    std::map<int, std::vector<std::pair<Bidegree, std::size_t>>> blocks;

    std::size_t dim(int m) const
    {
        auto it = dims.find(m);
        return it == dims.end() ? 0 : it->second;
    }

    QMatrix d(int m) const
    {
        auto it = differential.find(m);
        return it == differential.end() ? QMatrix(dim(m + 1), dim(m)) : it->second;
    }
};

inline TotalComplex total_complex(const DoubleComplex& c)
{
    c.validate();
    TotalComplex t;
    const auto support = c.support();
    if (support.empty())
        return t;

    int lo = support.front().first + support.front().second;
    int hi = lo;
    for (const auto& [p, q] : support)
    {
        lo = std::min(lo, p + q);
        hi = std::max(hi, p + q);
    }
    for (int m = lo; m <= hi; ++m)
    {
        std::vector<std::pair<Bidegree, std::size_t>> blocks;
        std::size_t offset = 0;
        for (const auto& pq : support)   // map order: increasing p
            if (pq.first + pq.second == m)
            {
                blocks.emplace_back(pq, offset);
                offset += c.dim(pq.first, pq.second);
            }
        t.dims[m] = offset;
        t.blocks[m] = std::move(blocks);
    }

    auto offset_of = [&](int m, Bidegree pq) -> std::optional<std::size_t> {
        auto it = t.blocks.find(m);
        if (it == t.blocks.end())
            return std::nullopt;
        for (const auto& [b, off] : it->second)
            if (b == pq)
                return off;
        return std::nullopt;
    };

    for (int m = lo; m < hi; ++m)
    {
        QMatrix d(t.dim(m + 1), t.dim(m));
        for (const auto& [pq, col0] : t.blocks[m])
        {
            const auto [p, q] = pq;
            auto add_block = [&](const QMatrix& blk, Bidegree target) {
                const auto row0 = offset_of(m + 1, target);
                if (!row0)
                    return;
                for (std::size_t i = 0; i < blk.rows(); ++i)
                    for (std::size_t j = 0; j < blk.cols(); ++j)
                        d(*row0 + i, col0 + j) += blk(i, j);
            };
            add_block(c.horizontal(p, q), {p + 1, q});
            add_block(c.vertical(p, q), {p, q + 1});
        }
        t.differential[m] = std::move(d);
    }
    for (int m = lo; m + 1 < hi; ++m)
        if (!(t.d(m + 1) * t.d(m)).is_zero())
            throw ValidationError("total differential does not square to zero in degree " + std::to_string(m));
    return t;
}

/// dim H^m = dim Tot^m - rank d^m - rank d^{m-1}.
inline std::map<int, std::size_t> cohomology_dims(const TotalComplex& t)
{
    std::map<int, std::size_t> h;
    for (const auto& [m, dim] : t.dims)
        h[m] = dim - rank(t.d(m)) - rank(t.d(m - 1));
    return h;
}

enum class Filtration
{
    Horizontal,
    Vertical
};

inline const char* to_string(Filtration f)
{
    return f == Filtration::Horizontal ? "horizontal" : "vertical";
}

struct PageTable
{
    /// (r, p, q) -> dim E_r^{p,q}; only support positions of the double complex are stored.
    std::map<std::tuple<int, int, int>, std::size_t> pages;
    Filtration filtration = Filtration::Horizontal;
    int r_max = 0;
    /// Least r < r_max with E_r = ... = E_{r_max}; r_max + 1 if E_{r_max - 1} != E_{r_max}.
    int stable_at = 0;

    std::size_t at(int r, int p, int q) const
    {
        auto it = pages.find({r, p, q});
        return it == pages.end() ? 0 : it->second;
    }

    std::map<Bidegree, std::size_t> page(int r) const
    {
        std::map<Bidegree, std::size_t> out;
        for (const auto& [key, d] : pages)
            if (std::get<0>(key) == r)
                out[{std::get<1>(key), std::get<2>(key)}] = d;
        return out;
    }

    std::map<Bidegree, std::size_t> limit() const { return page(r_max); }
};

namespace detail {

inline int filtration_degree(Filtration f, Bidegree pq)
{
    return f == Filtration::Horizontal ? pq.second : pq.first;
}

/// Filtration degree of every coordinate of Tot^m.
inline std::vector<int> coordinate_degrees(const TotalComplex& t, const DoubleComplex& c, Filtration f, int m)
{
    std::vector<int> deg(t.dim(m));
    auto it = t.blocks.find(m);
    if (it == t.blocks.end())
        return deg;
    for (const auto& [pq, off] : it->second)
        for (std::size_t i = 0; i < c.dim(pq.first, pq.second); ++i)
            deg[off + i] = filtration_degree(f, pq);
    return deg;
}

/**
 * Spanning set (as columns in Tot^m coordinates) of
 * Z_r^k = { x in F^k Tot^m : d x in F^{k+r} Tot^{m+1} }.
 */
inline QMatrix cycles_to_level(const TotalComplex& t, const std::vector<int>& deg_m, const std::vector<int>& deg_next,
                               int m, int k, int r)
{
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < deg_m.size(); ++j)
        if (deg_m[j] >= k)
            cols.push_back(j);
    std::vector<std::size_t> low_rows;
    for (std::size_t i = 0; i < deg_next.size(); ++i)
        if (deg_next[i] < k + r)
            low_rows.push_back(i);

    const QMatrix constraint = t.d(m).select_rows(low_rows).select_cols(cols);
    const QMatrix kernel = kernel_basis(constraint);
    QMatrix z(deg_m.size(), kernel.cols());
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < kernel.cols(); ++b)
            z(cols[a], b) = kernel(a, b);
    return z;
}

inline std::size_t rank_at_level(const QMatrix& span, const std::vector<int>& deg, int k)
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < deg.size(); ++i)
        if (deg[i] == k)
            rows.push_back(i);
    return rank(span.select_rows(rows));
}

}   // namespace detail

inline PageTable pages(const DoubleComplex& c, Filtration filtration, int r_max)
{
    if (r_max < 2)
        throw std::invalid_argument("pages: r_max must be at least 2");
    const TotalComplex t = total_complex(c);

    PageTable pt;
    pt.filtration = filtration;
    pt.r_max = r_max;

    std::map<int, std::vector<int>> degrees;
    for (const auto& [m, d] : t.dims)
        degrees[m] = detail::coordinate_degrees(t, c, filtration, m);
    auto degrees_of = [&](int m) -> const std::vector<int>& {
        static const std::vector<int> none;
        auto it = degrees.find(m);
        return it == degrees.end() ? none : it->second;
    };

    for (const auto& pq : c.support())
    {
        const int m = pq.first + pq.second;
        const int k = detail::filtration_degree(filtration, pq);
        const auto& deg_m = degrees_of(m);
        for (int r = 0; r <= r_max; ++r)
        {
            const QMatrix z = detail::cycles_to_level(t, deg_m, degrees_of(m + 1), m, k, r);
            const std::size_t top = detail::rank_at_level(z, deg_m, k);

            std::size_t bottom = 0;
            if (t.dim(m - 1) > 0)
            {
                const QMatrix z_prev = detail::cycles_to_level(t, degrees_of(m - 1), deg_m, m - 1, k - r + 1, r - 1);
                bottom = detail::rank_at_level(t.d(m - 1) * z_prev, deg_m, k);
            }
            pt.pages[{r, pq.first, pq.second}] = top - bottom;
        }
    }

    pt.stable_at = r_max + 1;
    for (int r = r_max - 1; r >= 0; --r)
    {
        if (pt.page(r) != pt.page(r_max))
            break;
        pt.stable_at = r;
    }
    return pt;
}

/// sum_{p+q=m} dim E_inf^{p,q} == dim H^m for every m.
inline bool verify_convergence(const PageTable& pt, const std::map<int, std::size_t>& h)
{
    if (pt.stable_at > pt.r_max)
        return false;
    std::map<int, std::size_t> graded;
    for (const auto& [pq, d] : pt.limit())
        graded[pq.first + pq.second] += d;
    for (const auto& [m, d] : graded)
    {
        auto it = h.find(m);
        if ((it == h.end() ? 0 : it->second) != d)
            return false;
    }
    for (const auto& [m, d] : h)
    {
        auto it = graded.find(m);
        if ((it == graded.end() ? 0 : it->second) != d)
            return false;
    }
    return true;
}

/// A bounded cochain complex: dims[i] sits in degree lowest_degree + i.
struct CochainComplex
{
    int lowest_degree = 0;
    std::vector<std::size_t> dims;
    /// differentials[i] : degree lowest + i -> lowest + i + 1; size dims.size() - 1.
    std::vector<QMatrix> differentials;

    std::size_t dim_at(int degree) const
    {
        const int i = degree - lowest_degree;
        return (i < 0 || i >= static_cast<int>(dims.size())) ? 0 : dims[static_cast<std::size_t>(i)];
    }

    QMatrix d_at(int degree) const
    {
        const int i = degree - lowest_degree;
        if (i < 0 || i >= static_cast<int>(differentials.size()))
            return QMatrix(dim_at(degree + 1), dim_at(degree));
        return differentials[static_cast<std::size_t>(i)];
    }

    void validate() const
    {
        if (!dims.empty() && differentials.size() + 1 != dims.size())
            throw ValidationError("cochain complex needs exactly one differential between consecutive terms");
        for (std::size_t i = 0; i < differentials.size(); ++i)
        {
            if (differentials[i].rows() != dims[i + 1] || differentials[i].cols() != dims[i])
                throw ValidationError("cochain differential " + std::to_string(i) + " has the wrong shape");
            if (i + 1 < differentials.size() && !(differentials[i + 1] * differentials[i]).is_zero())
                throw ValidationError("cochain differential does not square to zero at index " + std::to_string(i));
        }
    }
};

/// C^{p,q} = a^p (x) b^q with d_horiz = d_a (x) 1 and d_vert = (-1)^p 1 (x) d_b.
inline DoubleComplex tensor_double_complex(const CochainComplex& a, const CochainComplex& b)
{
    a.validate();
    b.validate();
    DoubleComplex c;
    for (std::size_t i = 0; i < a.dims.size(); ++i)
        for (std::size_t j = 0; j < b.dims.size(); ++j)
        {
            const int p = a.lowest_degree + static_cast<int>(i);
            const int q = b.lowest_degree + static_cast<int>(j);
            const std::size_t d = a.dims[i] * b.dims[j];
            if (d == 0)
                continue;
            c.dims[{p, q}] = d;
        }
    for (const auto& [pq, d] : c.dims)
    {
        const auto [p, q] = pq;
        if (c.dim(p + 1, q) > 0)
            c.d_horiz[pq] = kron(a.d_at(p), QMatrix::identity(b.dim_at(q)));
        if (c.dim(p, q + 1) > 0)
        {
            const Rational sign = p % 2 == 0 ? 1 : -1;
            c.d_vert[pq] = sign * kron(QMatrix::identity(a.dim_at(p)), b.d_at(q));
        }
    }
    return c;
}

/**
 * Reads the double-complex text format:
 *
 *     dims
 *     p q dim          one triple per line
 *     dh p q           horizontal map C^{p,q} -> C^{p+1,q}:
 *     <dim(p+1,q) rows of dim(p,q) rationals>
 *     dv p q           vertical map C^{p,q} -> C^{p,q+1}
 *     <dim(p,q+1) rows of dim(p,q) rationals>
 *
 * '#' starts a comment; blank lines are ignored; unlisted maps are zero.
 */
inline DoubleComplex parse_double_complex(std::istream& in)
{
    struct Line
    {
        std::size_t number;
        std::vector<std::string> tokens;
    };
    std::vector<Line> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        Line l{line_no, {}};
        std::string tok;
        while (ls >> tok)
            l.tokens.push_back(tok);
        if (!l.tokens.empty())
            lines.push_back(std::move(l));
    }

    auto parse_int = [](const Line& l, std::size_t i) {
        try
        {
            std::size_t used = 0;
            const int v = std::stoi(l.tokens[i], &used);
            if (used != l.tokens[i].size())
                throw std::invalid_argument("trailing characters");
            return v;
        }
        catch (const std::exception&)
        {
            throw ParseError(l.number, 0, "expected an integer, got '" + l.tokens[i] + "'");
        }
    };

    DoubleComplex c;
    std::size_t i = 0;
    if (lines.empty() || lines[0].tokens != std::vector<std::string>{"dims"})
        throw ParseError(lines.empty() ? 1 : lines[0].number, 0, "expected 'dims' header");
    ++i;
    while (i < lines.size() && lines[i].tokens[0] != "dh" && lines[i].tokens[0] != "dv")
    {
        const Line& l = lines[i];
        if (l.tokens.size() != 3)
            throw ParseError(l.number, 0, "expected 'p q dim'");
        const int p = parse_int(l, 0);
        const int q = parse_int(l, 1);
        const int d = parse_int(l, 2);
        if (d < 0)
            throw ParseError(l.number, 0, "negative dimension");
        if (c.dims.count({p, q}))
            throw ParseError(l.number, 0, "position listed twice");
        if (d > 0)
            c.dims[{p, q}] = static_cast<std::size_t>(d);
        ++i;
    }
    while (i < lines.size())
    {
        const Line& head = lines[i++];
        if (head.tokens.size() != 3 || (head.tokens[0] != "dh" && head.tokens[0] != "dv"))
            throw ParseError(head.number, 0, "expected 'dh p q' or 'dv p q'");
        const bool horiz = head.tokens[0] == "dh";
        const int p = parse_int(head, 1);
        const int q = parse_int(head, 2);
        const std::size_t src = c.dim(p, q);
        const std::size_t dst = horiz ? c.dim(p + 1, q) : c.dim(p, q + 1);
        auto& target = horiz ? c.d_horiz : c.d_vert;
        if (target.count({p, q}))
            throw ParseError(head.number, 0, "differential given twice");
        QMatrix m(dst, src);
        if (src > 0)
            for (std::size_t row = 0; row < dst; ++row)
            {
                if (i >= lines.size())
                    throw ParseError(head.number, 0, "matrix has too few rows");
                const Line& l = lines[i++];
                if (l.tokens.size() != src)
                    throw ParseError(l.number, 0, "expected " + std::to_string(src) + " entries");
                for (std::size_t col = 0; col < src; ++col)
                {
                    auto v = parse_rational(l.tokens[col]);
                    if (!v)
                        throw ParseError(l.number, 0, "invalid rational '" + l.tokens[col] + "'");
                    m(row, col) = *v;
                }
            }
        target[{p, q}] = std::move(m);
    }
    return c;
}

inline DoubleComplex parse_double_complex(const std::string& text)
{
    std::istringstream in(text);
    return parse_double_complex(in);
}

}   // namespace arrcoh

#endif
