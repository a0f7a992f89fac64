/**
 * Intersections of hyperplanes ("flats"), the subset-count table d_{p,q},
 * the intersection poset with its Moebius function, and two combinatorial
 * Betti-number oracles.
 *
 * A flat of an affine arrangement in A^n is stored as the reduced row echelon
 * form of its augmented system [A | c], so equal flats have identical
 * canonical systems regardless of which hyperplanes produced them.
 */
#ifndef ARRCOH_FLATS_HPP
#define ARRCOH_FLATS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "arrangement.hpp"
#include "errors.hpp"
#include "ratlin.hpp"

namespace arrcoh {

inline constexpr std::size_t default_enumeration_cap = 24;

struct Flat
{
    /// rref of [A | c] with zero rows removed; width n + 1.
    QMatrix canonical_system;
    std::size_t ambient_dim = 0;
    bool is_empty = false;

    std::size_t rank() const { return canonical_system.rows(); }
    /// Only meaningful for non-empty flats.
    std::size_t dimension() const { return ambient_dim - rank(); }
    std::size_t codimension() const { return rank(); }

    /// Stable textual key for the canonical system.
    std::string key() const
    {
        std::ostringstream os;
        os << ambient_dim << (is_empty ? "E" : "F");
        for (const auto& x : canonical_system.entries())
            os << ' ' << x;
        return os.str();
    }

    friend bool operator==(const Flat& a, const Flat& b)
    {
        return a.ambient_dim == b.ambient_dim && a.is_empty == b.is_empty &&
               a.canonical_system == b.canonical_system;
    }
};

inline Flat make_flat(const QMatrix& augmented, std::size_t ambient_dim)
{
    Flat f;
    f.ambient_dim = ambient_dim;
    if (augmented.rows() == 0)
    {
        f.canonical_system = QMatrix(0, ambient_dim + 1);
        return f;
    }
    RrefResult r = rref(augmented);
    f.is_empty = !r.pivot_columns.empty() && r.pivot_columns.back() == ambient_dim;
    std::vector<std::size_t> keep(r.rank);
    for (std::size_t i = 0; i < r.rank; ++i)
        keep[i] = i;
    f.canonical_system = r.reduced.select_rows(keep);
    return f;
}

/// The ambient space itself.
inline Flat ambient_flat(std::size_t n)
{
    return make_flat(QMatrix(0, n + 1), n);
}

inline std::vector<Rational> augmented_row(const Hyperplane& h)
{
    std::vector<Rational> row = h.normal;
    row.push_back(h.constant);
    return row;
}

/// Y_I for the given (0-based) hyperplane indices; the empty subset gives the ambient space.
inline Flat flat_of_subset(const Arrangement& a, std::span<const std::size_t> subset)
{
    if (!a.is_affine())
        throw std::invalid_argument("flat_of_subset: arrangement is not affine");
    const std::size_t n = a.ambient_dim();
    QMatrix sys(subset.size(), n + 1);
    for (std::size_t i = 0; i < subset.size(); ++i)
    {
        if (subset[i] >= a.size())
            throw std::out_of_range("flat_of_subset: hyperplane index " + std::to_string(subset[i]) +
                                    " out of range");
        const auto row = augmented_row(a[subset[i]]);
        for (std::size_t j = 0; j <= n; ++j)
            sys(i, j) = row[j];
    }
    return make_flat(sys, n);
}

namespace detail {

/**
 * Row echelon form of an augmented system that grows one equation at a time.
 * Each stored row has a leading 1 at its pivot and is eliminated against the
 * earlier pivots, so a new equation can be classified in O(rank * n).
 */
class EchelonSystem
{
  public:
    enum class Outcome
    {
        Independent,
        Dependent,
        Inconsistent
    };

    explicit EchelonSystem(std::size_t n) : n_(n) {}

    std::size_t rank() const { return rows_.size(); }

    std::vector<Rational> reduce(std::vector<Rational> row) const
    {
        for (std::size_t k = 0; k < rows_.size(); ++k)
        {
            const std::size_t pc = pivots_[k];
            if (row[pc] == 0)
                continue;
            const Rational factor = row[pc];
            for (std::size_t j = pc; j <= n_; ++j)
                if (rows_[k][j] != 0)
                    row[j] -= factor * rows_[k][j];
        }
        return row;
    }

    Outcome classify(const std::vector<Rational>& row) const
    {
        const auto reduced = reduce(row);
        for (std::size_t j = 0; j < n_; ++j)
            if (reduced[j] != 0)
                return Outcome::Independent;
        return reduced[n_] == 0 ? Outcome::Dependent : Outcome::Inconsistent;
    }

    /// Adds the equation; returns how it related to the current system.
    Outcome add(const std::vector<Rational>& row)
    {
        auto reduced = reduce(row);
        std::size_t pc = 0;
        while (pc < n_ && reduced[pc] == 0)
            ++pc;
        if (pc == n_)
            return reduced[n_] == 0 ? Outcome::Dependent : Outcome::Inconsistent;
        const Rational inv = 1 / reduced[pc];
        for (std::size_t j = pc; j <= n_; ++j)
            reduced[j] *= inv;
        // Keep earlier rows free of the new pivot so reduce() stays a single pass.
        for (auto& r : rows_)
        {
            if (r[pc] == 0)
                continue;
            const Rational factor = r[pc];
            for (std::size_t j = pc; j <= n_; ++j)
                if (reduced[j] != 0)
                    r[j] -= factor * reduced[j];
        }
        rows_.push_back(std::move(reduced));
        pivots_.push_back(pc);
        return Outcome::Independent;
    }

  private:
    std::size_t n_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> pivots_;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    std::uint64_t b = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return b;
}

}   // namespace detail

using detail::binomial;

/**
 * d_{p,q} = #{ non-empty I : |I| = 1 - p, dim Y_I = (n - q - 1)/2 }, together
 * with the number of subsets of each size whose intersection is empty.
 */
struct DTable
{
    std::map<std::pair<int, int>, std::uint64_t> counts;
    std::map<std::size_t, std::uint64_t> empty_counts;
    std::size_t n = 0;
    std::size_t r = 0;

    std::uint64_t at(int p, int q) const
    {
        auto it = counts.find({p, q});
        return it == counts.end() ? 0 : it->second;
    }

    std::uint64_t empty_at(std::size_t size) const
    {
        auto it = empty_counts.find(size);
        return it == empty_counts.end() ? 0 : it->second;
    }
};

/// Row index q of the E1 term contributed by a non-empty flat of the given dimension.
inline int q_of_dimension(std::size_t n, std::size_t dim)
{
    return static_cast<int>(n) - 2 * static_cast<int>(dim) - 1;
}

/**
 * Visits every non-empty subset of hyperplanes in lexicographic order,
 * extending each prefix by larger indices only. The prefix's echelon system
 * is reused, and once a prefix is empty all of its extensions are counted in
 * closed form instead of being visited.
 */
inline DTable enumerate_d_table(const Arrangement& a, std::size_t cap = default_enumeration_cap)
{
    if (!a.is_affine())
        throw std::invalid_argument("enumerate_d_table: arrangement is not affine");
    const std::size_t r = a.size();
    const std::size_t n = a.ambient_dim();
    if (r > cap)
        throw CapExceeded(r, cap);

    std::vector<std::vector<Rational>> rows;
    for (const auto& h : a.hyperplanes())
        rows.push_back(augmented_row(h));

    // by_size[s][dim] = number of s-subsets with non-empty flat of that dimension
    std::vector<std::vector<std::uint64_t>> by_size(r + 1, std::vector<std::uint64_t>(n + 1, 0));
    std::vector<std::uint64_t> empties(r + 1, 0);

    auto visit = [&](auto&& self, const detail::EchelonSystem& sys, std::size_t start, std::size_t size) -> void {
        for (std::size_t j = start; j < r; ++j)
        {
            detail::EchelonSystem next = sys;
            if (next.add(rows[j]) == detail::EchelonSystem::Outcome::Inconsistent)
            {
                const std::size_t remaining = r - 1 - j;
                for (std::size_t t = 0; t <= remaining; ++t)
                    empties[size + 1 + t] += binomial(remaining, t);
                continue;
            }
            ++by_size[size + 1][n - next.rank()];
            self(self, next, j + 1, size + 1);
        }
    };
    visit(visit, detail::EchelonSystem(n), 0, 0);

    DTable t;
    t.n = n;
    t.r = r;
    for (std::size_t s = 1; s <= r; ++s)
    {
        for (std::size_t dim = 0; dim <= n; ++dim)
            if (by_size[s][dim] != 0)
                t.counts[{1 - static_cast<int>(s), q_of_dimension(n, dim)}] = by_size[s][dim];
        if (empties[s] != 0)
            t.empty_counts[s] = empties[s];
    }
    return t;
}

/**
 * True when every k hyperplanes (k <= n) meet in codimension k and every
 * n + 1 of them have empty intersection.
 */
inline bool is_general_position(const Arrangement& a)
{
    if (!a.is_affine())
        throw std::invalid_argument("is_general_position: arrangement is not affine");
    const std::size_t n = a.ambient_dim();
    const std::size_t r = a.size();
    std::vector<std::vector<Rational>> rows;
    for (const auto& h : a.hyperplanes())
        rows.push_back(augmented_row(h));

    auto visit = [&](auto&& self, const detail::EchelonSystem& sys, std::size_t start, std::size_t size) -> bool {
        for (std::size_t j = start; j < r; ++j)
        {
            detail::EchelonSystem next = sys;
            const auto outcome = next.add(rows[j]);
            if (size + 1 <= n)
            {
                if (outcome != detail::EchelonSystem::Outcome::Independent)
                    return false;
                if (!self(self, next, j + 1, size + 1))
                    return false;
            }
            else if (outcome != detail::EchelonSystem::Outcome::Inconsistent)
                return false;
        }
        return true;
    };
    return visit(visit, detail::EchelonSystem(n), 0, 0);
}

/**
 * Non-empty flats ordered by reverse inclusion, the ambient space first.
 * Flats are grouped by codimension; mobius[i] is mu(ambient, flats[i]).
 */
struct IntersectionPoset
{
    std::size_t ambient_dim = 0;
    std::vector<Flat> flats;
    std::vector<std::size_t> codim;
    std::vector<long long> mobius;
    /// containing[i] = hyperplanes that contain flats[i].
    std::vector<boost::dynamic_bitset<>> containing;
    /// below[i] = indices of flats strictly containing flats[i] (strictly smaller in the order).
    std::vector<std::vector<std::size_t>> below;

    std::size_t size() const { return flats.size(); }

    bool less(std::size_t x, std::size_t y) const
    {
        return containing[x].is_proper_subset_of(containing[y]);
    }
};

/**
 * Closes {ambient} + hyperplanes under non-empty intersection, one
 * codimension at a time. Every flat of codimension k+1 is a flat of
 * codimension k cut by a hyperplane not containing it, so intersecting with
 * single hyperplanes reaches the fixed point.
 */
inline IntersectionPoset build_intersection_poset(const Arrangement& a, std::size_t max_flats = std::size_t(1) << 20)
{
    if (!a.is_affine())
        throw std::invalid_argument("build_intersection_poset: arrangement is not affine");
    const std::size_t n = a.ambient_dim();
    const std::size_t r = a.size();

    std::vector<std::vector<Rational>> rows;
    for (const auto& h : a.hyperplanes())
        rows.push_back(augmented_row(h));

    IntersectionPoset poset;
    poset.ambient_dim = n;
    std::map<std::string, std::size_t> index;

    auto containment = [&](const Flat& f) {
        detail::EchelonSystem sys(n);
        for (std::size_t i = 0; i < f.canonical_system.rows(); ++i)
        {
            auto row = f.canonical_system.row(i);
            sys.add(std::vector<Rational>(row.begin(), row.end()));
        }
        boost::dynamic_bitset<> bits(r);
        for (std::size_t h = 0; h < r; ++h)
            if (sys.classify(rows[h]) == detail::EchelonSystem::Outcome::Dependent)
                bits.set(h);
        return bits;
    };

    auto insert = [&](Flat f) {
        const std::string k = f.key();
        if (index.count(k))
            return;
        if (poset.flats.size() >= max_flats)
            throw CapExceeded(poset.flats.size() + 1, max_flats, "flats");
        index.emplace(k, poset.flats.size());
        poset.codim.push_back(f.codimension());
        poset.containing.push_back(containment(f));
        poset.flats.push_back(std::move(f));
    };

    insert(ambient_flat(n));
    std::size_t level_begin = 0;
    while (level_begin < poset.flats.size())
    {
        const std::size_t level_end = poset.flats.size();
        for (std::size_t x = level_begin; x < level_end; ++x)
        {
            for (std::size_t h = 0; h < r; ++h)
            {
                if (poset.containing[x].test(h))
                    continue;
                QMatrix sys = vstack(poset.flats[x].canonical_system, QMatrix::from_rows({rows[h]}, n + 1));
                Flat f = make_flat(sys, n);
                if (!f.is_empty)
                    insert(std::move(f));
            }
        }
        level_begin = level_end;
    }

    const std::size_t count = poset.flats.size();
    poset.below.assign(count, {});
    poset.mobius.assign(count, 0);
    for (std::size_t x = 0; x < count; ++x)
    {
        long long sum = 0;
        for (std::size_t y = 0; y < x; ++y)
            if (poset.less(y, x))
            {
                poset.below[x].push_back(y);
                sum += poset.mobius[y];
            }
        poset.mobius[x] = x == 0 ? 1 : -sum;
    }
    return poset;
}

/// b_k = sum of |mu(ambient, x)| over flats x of codimension k.
inline std::vector<std::uint64_t> oracle_betti_mobius(const IntersectionPoset& p)
{
    std::vector<std::uint64_t> b(p.ambient_dim + 1, 0);
    for (std::size_t x = 0; x < p.size(); ++x)
        b[p.codim[x]] += static_cast<std::uint64_t>(p.mobius[x] < 0 ? -p.mobius[x] : p.mobius[x]);
    return b;
}

/**
 * b_k = (-1)^k sum of (-1)^|I| over all subsets I (the empty one included)
 * whose intersection is non-empty of codimension k. Each subset's system is
 * solved from scratch.
 */
inline std::vector<std::uint64_t> oracle_betti_whitney(const Arrangement& a, std::size_t cap = default_enumeration_cap)
{
    if (!a.is_affine())
        throw std::invalid_argument("oracle_betti_whitney: arrangement is not affine");
    const std::size_t r = a.size();
    const std::size_t n = a.ambient_dim();
    if (r > cap)
        throw CapExceeded(r, cap);

    std::vector<long long> signed_sum(n + 1, 0);
    const std::uint64_t total = std::uint64_t(1) << r;
    for (std::uint64_t mask = 0; mask < total; ++mask)
    {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < r; ++i)
            if (mask >> i & 1)
                members.push_back(i);
        QMatrix normals(members.size(), n);
        std::vector<Rational> rhs(members.size());
        for (std::size_t k = 0; k < members.size(); ++k)
        {
            for (std::size_t j = 0; j < n; ++j)
                normals(k, j) = a[members[k]].normal[j];
            rhs[k] = a[members[k]].constant;
        }
        auto sol = solve(normals, rhs);
        if (!sol)
            continue;
        const std::size_t codim = n - sol->kernel.cols();
        signed_sum[codim] += members.size() % 2 == 0 ? 1 : -1;
    }

    std::vector<std::uint64_t> b(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k)
    {
        const long long v = k % 2 == 0 ? signed_sum[k] : -signed_sum[k];
        if (v < 0)
            throw InconsistencyError("Whitney sum is negative in codimension " + std::to_string(k));
        b[k] = static_cast<std::uint64_t>(v);
    }
    return b;
}

}   // namespace arrcoh

#endif
