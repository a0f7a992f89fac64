/**
 * Betti numbers of an arrangement complement from the relative Mayer-Vietoris
 * spectral sequence with coefficients in O on affine space.
 *
 * Grading. For a variety Z, pi_+ O_Z is graded so that a shift [m] places a
 * one-dimensional space in degree -m: affine m-space contributes {-m : 1}.
 * The complement of an arrangement in A^n has cohomology in degrees -n..0 and
 * b_k = dim H^{k-n}.
 *
 * For an essential arrangement with r hyperplanes the first page is
 *
 *   E_1^{p,-n} = binomial(r, 1-p)          for -(r-1) <= p <= 0,
 *   E_1^{p,q}  = d_{p,q}                   for q != -n,
 *
 * every row is exact except at its right end, so E_2 keeps one entry per row
 * (the alternating sum of the row), and those entries can never be joined by
 * a later differential.
 */
#ifndef ARRCOH_MV_BETTI_HPP
#define ARRCOH_MV_BETTI_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arrangement.hpp"
#include "errors.hpp"
#include "flats.hpp"

namespace arrcoh {

using Bidegree = std::pair<int, int>;

/// Finitely supported graded dimensions; zero entries are never stored.
struct GradedDims
{
    std::map<int, std::uint64_t> dims;

    std::uint64_t at(int degree) const
    {
        auto it = dims.find(degree);
        return it == dims.end() ? 0 : it->second;
    }

    void add(int degree, std::uint64_t d)
    {
        if (d != 0)
            dims[degree] += d;
    }

    friend bool operator==(const GradedDims&, const GradedDims&) = default;
};

/// Graded tensor product (Kunneth): degrees add, dimensions multiply.
inline GradedDims tensor(const GradedDims& a, const GradedDims& b)
{
    GradedDims out;
    for (const auto& [i, x] : a.dims)
        for (const auto& [j, y] : b.dims)
            out.add(i + j, x * y);
    return out;
}

/// pi_+ O of affine m-space: {-m : 1}.
inline GradedDims affine_space_cohomology(std::size_t m)
{
    GradedDims g;
    g.add(-static_cast<int>(m), 1);
    return g;
}

/// A^m minus a point: k[m] + k[-m+1], i.e. {-m : 1, m-1 : 1}.
inline GradedDims punctured_space_cohomology(int m)
{
    if (m < 1)
        throw std::invalid_argument("punctured_space_cohomology: m must be at least 1, got " + std::to_string(m));
    GradedDims g;
    g.add(-m, 1);
    g.add(m - 1, 1);
    return g;
}

/**
 * pi_+ R O(*Y_I) on A^n. A non-empty flat of dimension d gives
 * A^n - Y_I = (A^{n-d} - point) x A^d; an empty flat leaves A^n untouched.
 */
inline GradedDims localized_flat_cohomology(std::size_t n, std::optional<std::size_t> flat_dim)
{
    if (!flat_dim)
        return affine_space_cohomology(n);
    if (*flat_dim >= n)
        throw std::invalid_argument("localized_flat_cohomology: flat dimension " + std::to_string(*flat_dim) +
                                    " out of range for ambient dimension " + std::to_string(n));
    return tensor(punctured_space_cohomology(static_cast<int>(n - *flat_dim)), affine_space_cohomology(*flat_dim));
}

struct EPage
{
    std::map<Bidegree, std::uint64_t> dims;
    int page_index = 1;
    std::size_t n = 0;
    std::size_t r = 0;

    std::uint64_t at(int p, int q) const
    {
        auto it = dims.find({p, q});
        return it == dims.end() ? 0 : it->second;
    }

    int bottom_row() const { return -static_cast<int>(n); }

    /// Distinct q with at least one nonzero entry, ascending.
    std::vector<int> rows() const
    {
        std::vector<int> qs;
        for (const auto& [pq, d] : dims)
            if (d != 0 && std::find(qs.begin(), qs.end(), pq.second) == qs.end())
                qs.push_back(pq.second);
        std::sort(qs.begin(), qs.end());
        return qs;
    }

    /// Least and greatest p with a nonzero entry in row q.
    std::optional<std::pair<int, int>> row_extent(int q) const
    {
        std::optional<std::pair<int, int>> ext;
        for (const auto& [pq, d] : dims)
        {
            if (pq.second != q || d == 0)
                continue;
            if (!ext)
                ext = std::pair{pq.first, pq.first};
            else
            {
                ext->first = std::min(ext->first, pq.first);
                ext->second = std::max(ext->second, pq.first);
            }
        }
        return ext;
    }

    /// Row q from p0 to p1, zeros included.
    std::vector<std::uint64_t> row(int q, int p0, int p1) const
    {
        std::vector<std::uint64_t> v;
        for (int p = p0; p <= p1; ++p)
            v.push_back(at(p, q));
        return v;
    }
};

inline EPage e1_page(const DTable& d)
{
    if (d.r == 0)
        throw std::invalid_argument("e1_page: arrangement has no hyperplanes");
    EPage e;
    e.page_index = 1;
    e.n = d.n;
    e.r = d.r;
    const int bottom = -static_cast<int>(d.n);
    for (int p = 1 - static_cast<int>(d.r); p <= 0; ++p)
        e.dims[{p, bottom}] = binomial(d.r, static_cast<std::uint64_t>(1 - p));
    for (const auto& [pq, count] : d.counts)
    {
        if (pq.second == bottom)
            throw InconsistencyError("d-table has an entry in the q = -n row");
        if (count != 0)
            e.dims[pq] = count;
    }
    return e;
}

/**
 * dim coker(V_{s-1} -> V_s) = (-1)^s sum_i (-1)^i dim V_i for a sequence
 * 0 -> V_0 -> ... -> V_s exact everywhere except at V_s.
 */
inline std::uint64_t last_cohomology_dim(std::span<const std::uint64_t> row)
{
    if (row.empty())
        return 0;
    long long sum = 0;
    const std::size_t s = row.size() - 1;
    for (std::size_t i = 0; i < row.size(); ++i)
    {
        const long long v = static_cast<long long>(row[i]);
        sum += (s - i) % 2 == 0 ? v : -v;
    }
    if (sum < 0)
        throw InconsistencyError("alternating sum of an E1 row is negative (" + std::to_string(sum) +
                                 "); the row is not exact below its last term");
    return static_cast<std::uint64_t>(sum);
}

inline EPage e2_page(const EPage& e1)
{
    if (e1.page_index != 1)
        throw std::invalid_argument("e2_page: input is not a first page");
    EPage e2;
    e2.page_index = 2;
    e2.n = e1.n;
    e2.r = e1.r;
    for (int q : e1.rows())
    {
        const auto [p0, p1] = *e1.row_extent(q);
        const auto row = e1.row(q, p0, p1);
        const std::uint64_t last = last_cohomology_dim(row);
        if (last != 0)
            e2.dims[{p1, q}] = last;
    }
    return e2;
}

/// No d_r with r >= 2 connects two nonzero entries of the page.
inline bool degeneration_check(const EPage& e2)
{
    for (const auto& [a, da] : e2.dims)
    {
        if (da == 0)
            continue;
        for (const auto& [b, db] : e2.dims)
        {
            if (db == 0)
                continue;
            const int r = b.first - a.first;
            if (r >= 2 && b.second - a.second == 1 - r)
                return false;
        }
    }
    return true;
}

/// Every nonempty row q != -n of a first page ends at p = (1 - q - n)/2.
inline bool check_row_structure(const EPage& e1)
{
    const int n = static_cast<int>(e1.n);
    for (int q : e1.rows())
    {
        if (q == -n)
            continue;
        if ((1 - q - n) % 2 != 0)
            return false;
        if (e1.row_extent(q)->second != (1 - q - n) / 2)
            return false;
    }
    return true;
}

/// Reads H^i pi_+ R O(*Y) off a degenerate second page (i = p + q).
inline GradedDims betti_from_e2(const EPage& e2)
{
    if (!degeneration_check(e2))
        throw InconsistencyError("second page does not degenerate: a higher differential joins two entries");
    const int n = static_cast<int>(e2.n);
    GradedDims g;
    std::map<int, int> row_of_degree;
    for (const auto& [pq, d] : e2.dims)
    {
        if (d == 0)
            continue;
        const auto [p, q] = pq;
        if (q == -n)
        {
            if (p != 0 || d != 1)
                throw InconsistencyError("bottom row of the second page is not a single 1 at p = 0");
            g.add(-n, 1);
            continue;
        }
        if ((1 - q - n) % 2 != 0 || p != (1 - q - n) / 2)
            throw InconsistencyError("row q = " + std::to_string(q) + " ends at p = " + std::to_string(p) +
                                     ", expected (1 - q - n)/2");
        const int i = p + q;
        if (auto [it, fresh] = row_of_degree.emplace(i, q); !fresh)
            throw InconsistencyError("degree " + std::to_string(i) + " receives rows q = " +
                                     std::to_string(it->second) + " and q = " + std::to_string(q));
        g.add(i, d);
    }
    return g;
}

/// Applies the shift [m]: degree i moves to i - m.
inline GradedDims kunneth_shift(const GradedDims& g, int shift)
{
    GradedDims out;
    for (const auto& [i, d] : g.dims)
        out.add(i - shift, d);
    return out;
}

/// b_k = dim H^{k-n}, k = 0..n.
inline std::vector<std::uint64_t> betti_numbers(const GradedDims& g, std::size_t n)
{
    std::vector<std::uint64_t> b(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        b[k] = g.at(static_cast<int>(k) - static_cast<int>(n));
    return b;
}

struct BettiOptions
{
    /// Projective input only; defaults to the last hyperplane.
    std::optional<std::size_t> infinity_index;
    std::size_t enumeration_cap = default_enumeration_cap;
    bool run_oracles = true;
};

struct BettiReport
{
    ArrangementKind kind = ArrangementKind::Affine;
    std::size_t n = 0;
    /// Hyperplanes in the input (before deconing).
    std::size_t r = 0;
    /// The affine arrangement the pipeline ran on.
    Arrangement affine;
    std::size_t essential_rank = 0;
    std::size_t shift = 0;
    DTable d_table;
    EPage e1;
    EPage e2;
    bool degenerates = true;
    /// pi_+ R O(*Y) in the original ambient space, degrees -n..0.
    GradedDims pi_plus;
    std::vector<std::uint64_t> betti;
    std::vector<std::uint64_t> poincare;
    std::optional<std::vector<std::uint64_t>> oracle_mobius;
    std::optional<std::vector<std::uint64_t>> oracle_whitney;
    std::optional<bool> agreement;
    bool general_position = false;
    /// Set when general position is detected: b_k == binomial(r, k) for every k.
    std::optional<bool> binomial_formula_holds;
};

inline BettiReport compute_betti(const Arrangement& input, const BettiOptions& options = {})
{
    BettiReport rep;
    rep.kind = input.kind();
    rep.n = input.ambient_dim();
    rep.r = input.size();

    if (input.kind() == ArrangementKind::Projective)
    {
        if (input.size() == 0)
            throw ValidationError("projective arrangement has no hyperplane to send to infinity");
        rep.affine = decone(input, options.infinity_index.value_or(input.size() - 1));
    }
    else
    {
        if (options.infinity_index)
            throw ValidationError("an infinity hyperplane can only be chosen for projective input");
        rep.affine = input;
    }

    const std::size_t n = rep.affine.ambient_dim();
    if (rep.affine.size() == 0)
    {
        // Complement is all of A^n.
        rep.pi_plus = affine_space_cohomology(n);
        rep.e1.n = rep.e2.n = n;
        rep.e2.page_index = 2;
        rep.d_table.n = n;
    }
    else
    {
        const EssentialReduction red = essentialize(rep.affine);
        rep.essential_rank = red.essential.ambient_dim();
        rep.shift = red.shift;
        rep.d_table = enumerate_d_table(red.essential, options.enumeration_cap);
        rep.e1 = e1_page(rep.d_table);
        rep.e2 = e2_page(rep.e1);
        rep.degenerates = degeneration_check(rep.e2);
        const GradedDims essential = betti_from_e2(rep.e2);
        rep.pi_plus = kunneth_shift(essential, static_cast<int>(red.shift));
    }
    rep.betti = betti_numbers(rep.pi_plus, n);
    rep.poincare = rep.betti;

    if (options.run_oracles)
    {
        rep.oracle_mobius = oracle_betti_mobius(build_intersection_poset(rep.affine));
        rep.oracle_whitney = oracle_betti_whitney(rep.affine, options.enumeration_cap);
        rep.agreement = *rep.oracle_mobius == rep.betti && *rep.oracle_whitney == rep.betti;
    }

    rep.general_position = is_general_position(rep.affine);
    if (rep.general_position)
    {
        bool ok = true;
        for (std::size_t k = 0; k <= n; ++k)
            ok = ok && rep.betti[k] == binomial(rep.affine.size(), k);
        rep.binomial_formula_holds = ok;
    }
    return rep;
}

}   // namespace arrcoh

#endif
