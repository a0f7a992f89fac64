/**
 * Hyperplane arrangements in affine or projective space: canonical forms,
 * the text file format, deconing and essentialization.
 */
#ifndef ARRCOH_ARRANGEMENT_HPP
#define ARRCOH_ARRANGEMENT_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ratlin.hpp"

namespace arrcoh {

enum class ArrangementKind
{
    Affine,
    Projective
};

inline const char* to_string(ArrangementKind k)
{
    return k == ArrangementKind::Affine ? "affine" : "projective";
}

/**
 * The hyperplane normal . x = constant. For projective arrangements the
 * normal holds the n+1 homogeneous coefficients and the constant is zero.
 */
struct Hyperplane
{
    std::vector<Rational> normal;
    Rational constant;

    bool has_zero_normal() const
    {
        return std::all_of(normal.begin(), normal.end(), [](const Rational& x) { return x == 0; });
    }

    /// Coprime integer coefficients (constant included), first nonzero normal entry positive.
    Hyperplane canonical() const
    {
        if (has_zero_normal())
            throw ValidationError("hyperplane has a zero normal vector");
        Integer lcm = 1;
        auto fold_lcm = [&](const Rational& x) {
            lcm = boost::multiprecision::lcm(lcm, Integer(boost::multiprecision::denominator(x)));
        };
        for (const auto& x : normal)
            fold_lcm(x);
        fold_lcm(constant);

        std::vector<Integer> ints;
        ints.reserve(normal.size() + 1);
        for (const auto& x : normal)
            ints.push_back(Integer(boost::multiprecision::numerator(x)) * (lcm / Integer(boost::multiprecision::denominator(x))));
        ints.push_back(Integer(boost::multiprecision::numerator(constant)) *
                       (lcm / Integer(boost::multiprecision::denominator(constant))));

        Integer g = 0;
        for (const auto& v : ints)
            g = boost::multiprecision::gcd(g, v);
        const auto first = std::find_if(ints.begin(), ints.end(), [](const Integer& v) { return v != 0; });
        if (*first < 0)
            g = -g;

        Hyperplane h;
        h.normal.reserve(normal.size());
        for (std::size_t i = 0; i + 1 < ints.size(); ++i)
            h.normal.emplace_back(ints[i] / g);
        h.constant = Rational(ints.back() / g);
        return h;
    }

    friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// "x1 + 2x2 - x3 = 3" style rendering; projective forms use x0..xn.
inline std::string equation_string(const Hyperplane& h, bool projective = false)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < h.normal.size(); ++i)
    {
        const Rational& a = h.normal[i];
        if (a == 0)
            continue;
        Rational mag = a < 0 ? Rational(-a) : a;
        if (first)
            os << (a < 0 ? "-" : "");
        else
            os << (a < 0 ? " - " : " + ");
        if (mag != 1)
            os << mag;
        os << 'x' << (projective ? i : i + 1);
        first = false;
    }
    os << " = " << h.constant;
    return os.str();
}

class Arrangement
{
  public:
    Arrangement() = default;

    /// Canonicalizes every hyperplane and rejects zero normals, duplicates and malformed shapes.
    Arrangement(ArrangementKind kind, std::size_t ambient_dim, std::vector<Hyperplane> hyperplanes)
        : kind_(kind), ambient_dim_(ambient_dim)
    {
        const std::size_t width = coordinate_count();
        hyperplanes_.reserve(hyperplanes.size());
        for (std::size_t i = 0; i < hyperplanes.size(); ++i)
        {
            const Hyperplane& h = hyperplanes[i];
            if (h.normal.size() != width)
                throw ValidationError("hyperplane " + std::to_string(i + 1) + " has " +
                                      std::to_string(h.normal.size()) + " coefficients, expected " +
                                      std::to_string(width));
            if (kind == ArrangementKind::Projective && h.constant != 0)
                throw ValidationError("hyperplane " + std::to_string(i + 1) +
                                      ": nonzero constant in projective arrangement");
            if (h.has_zero_normal())
                throw ValidationError("hyperplane " + std::to_string(i + 1) + " has a zero normal vector");
            Hyperplane c = h.canonical();
            for (std::size_t j = 0; j < hyperplanes_.size(); ++j)
                if (hyperplanes_[j] == c)
                    throw ValidationError("hyperplane " + std::to_string(i + 1) + " duplicates hyperplane " +
                                          std::to_string(j + 1));
            hyperplanes_.push_back(std::move(c));
        }
    }

    ArrangementKind kind() const { return kind_; }
    bool is_affine() const { return kind_ == ArrangementKind::Affine; }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t size() const { return hyperplanes_.size(); }
    const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
    const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }

    /// Length of each normal: n for affine, n+1 homogeneous for projective.
    std::size_t coordinate_count() const
    {
        return kind_ == ArrangementKind::Affine ? ambient_dim_ : ambient_dim_ + 1;
    }

    /// r x width matrix of normals.
    QMatrix normal_matrix() const
    {
        QMatrix m(hyperplanes_.size(), coordinate_count());
        for (std::size_t i = 0; i < hyperplanes_.size(); ++i)
            for (std::size_t j = 0; j < coordinate_count(); ++j)
                m(i, j) = hyperplanes_[i].normal[j];
        return m;
    }

    friend bool operator==(const Arrangement&, const Arrangement&) = default;

  private:
    ArrangementKind kind_ = ArrangementKind::Affine;
    std::size_t ambient_dim_ = 0;
    std::vector<Hyperplane> hyperplanes_;
};

/**
 * Reads the arrangement text format:
 *
 *     # comment
 *     affine 2          (or: projective 2)
 *     1 0 0             a1 .. an c    for   a1 x1 + ... + an xn = c
 *     0 1 1/2
 *
 * Projective lines carry the n+1 homogeneous coefficients (an optional
 * trailing constant must be 0).
 */
inline Arrangement parse_arrangement(std::istream& in)
{
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    ArrangementKind kind = ArrangementKind::Affine;
    std::size_t n = 0;
    std::vector<Hyperplane> hyperplanes;
    std::vector<std::size_t> source_lines;

    struct Token
    {
        std::string text;
        std::size_t column;
    };

    while (std::getline(in, raw))
    {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);

        std::vector<Token> tokens;
        for (std::size_t i = 0; i < raw.size();)
        {
            if (std::isspace(static_cast<unsigned char>(raw[i])))
            {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])))
                ++j;
            tokens.push_back({raw.substr(i, j - i), i + 1});
            i = j;
        }
        if (tokens.empty())
            continue;

        if (!have_header)
        {
            if (tokens[0].text == "affine")
                kind = ArrangementKind::Affine;
            else if (tokens[0].text == "projective")
                kind = ArrangementKind::Projective;
            else
                throw ParseError(line_no, tokens[0].column, "expected 'affine n' or 'projective n', got '" +
                                                                tokens[0].text + "'");
            if (tokens.size() != 2)
                throw ParseError(line_no, 0, "header must be '<kind> <dimension>'");
            const auto& dim = tokens[1];
            if (dim.text.empty() || !std::all_of(dim.text.begin(), dim.text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
                dim.text.size() > 6)
                throw ParseError(line_no, dim.column, "dimension must be a positive integer");
            n = std::stoul(dim.text);
            if (n == 0)
                throw ParseError(line_no, dim.column, "dimension must be a positive integer");
            have_header = true;
            continue;
        }

        // affine: a1..an c; projective: x0..xn
        const std::size_t width = n + 1;
        const bool allow_trailing_zero = kind == ArrangementKind::Projective;
        if (tokens.size() != width && !(allow_trailing_zero && tokens.size() == width + 1))
            throw ParseError(line_no, 0, "expected " + std::to_string(width) + " coefficients, found " +
                                             std::to_string(tokens.size()));

        std::vector<Rational> values;
        for (const auto& t : tokens)
        {
            auto v = parse_rational(t.text);
            if (!v)
                throw ParseError(line_no, t.column, "invalid rational '" + t.text + "'");
            values.push_back(*v);
        }

        Hyperplane h;
        if (kind == ArrangementKind::Affine)
        {
            h.constant = values.back();
            values.pop_back();
        }
        else if (values.size() == width + 1)
        {
            if (values.back() != 0)
                throw ParseError(line_no, tokens.back().column, "nonzero constant in projective input");
            values.pop_back();
        }
        h.normal = std::move(values);
        if (h.has_zero_normal())
            throw ParseError(line_no, 0, "zero normal vector");

        const Hyperplane c = h.canonical();
        for (std::size_t j = 0; j < hyperplanes.size(); ++j)
            if (hyperplanes[j].canonical() == c)
                throw ParseError(line_no, 0, "duplicate hyperplane (same as line " +
                                                 std::to_string(source_lines[j]) + ")");
        hyperplanes.push_back(std::move(h));
        source_lines.push_back(line_no);
    }
    if (!have_header)
        throw ParseError(line_no == 0 ? 1 : line_no, 0, "missing 'affine n' or 'projective n' header");
    return Arrangement(kind, n, std::move(hyperplanes));
}

inline Arrangement parse_arrangement(const std::string& text)
{
    std::istringstream in(text);
    return parse_arrangement(in);
}

/**
 * Turns a projective arrangement into an affine one with the same complement
 * by sending hyperplane `infinity_index` to infinity.
 *
 * With H = sum h_i x_i the hyperplane at infinity, let j be the largest index
 * with h_j != 0. The homogeneous coordinate x_j is traded for y0 = H, and the
 * chart y0 = 1 uses the remaining x_i (i != j, in order) as affine coordinates.
 */
inline Arrangement decone(const Arrangement& a, std::size_t infinity_index)
{
    if (a.kind() != ArrangementKind::Projective)
        throw std::invalid_argument("decone: arrangement is not projective");
    if (infinity_index >= a.size())
        throw std::out_of_range("decone: infinity index " + std::to_string(infinity_index) +
                                " out of range for " + std::to_string(a.size()) + " hyperplanes");

    const auto& inf = a[infinity_index].normal;
    const std::size_t width = inf.size();
    std::size_t j = width - 1;
    while (inf[j] == 0)
        --j;

    std::vector<Hyperplane> affine;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        if (k == infinity_index)
            continue;
        const auto& g = a[k].normal;
        const Rational ratio = g[j] / inf[j];
        Hyperplane h;
        for (std::size_t i = 0; i < width; ++i)
            if (i != j)
                h.normal.push_back(g[i] - ratio * inf[i]);
        // g . x = sum_{i != j} (g_i - ratio h_i) x_i + ratio * y0, with y0 = 1.
        h.constant = -ratio;
        affine.push_back(std::move(h));
    }
    return Arrangement(ArrangementKind::Affine, a.ambient_dim(), std::move(affine));
}

/// Dimension of the span of the normals.
inline std::size_t rank(const Arrangement& a)
{
    if (!a.is_affine())
        throw std::invalid_argument("rank: arrangement is not affine");
    return rank(a.normal_matrix());
}

struct EssentialReduction
{
    Arrangement essential;
    std::size_t shift = 0;
    /// Columns: pivot unit directions first, then a basis of the common kernel of the normals.
    QMatrix change_of_coordinates;
};

/**
 * Splits A^n - Y as (A^s - Y') x A^(n-s) with s the rank. In coordinates
 * x = P y, where P holds the unit vectors of the pivot columns of the normal
 * matrix followed by its kernel basis, every normal becomes N P = [N_pivot | 0];
 * the essential arrangement keeps the first s coordinates.
 */
inline EssentialReduction essentialize(const Arrangement& a)
{
    if (!a.is_affine())
        throw std::invalid_argument("essentialize: arrangement is not affine");
    const std::size_t n = a.ambient_dim();
    const QMatrix normals = a.normal_matrix();
    const RrefResult r = rref(normals);
    const std::size_t s = r.rank;

    EssentialReduction out;
    out.shift = n - s;
    if (s == n)
    {
        out.essential = a;
        out.change_of_coordinates = QMatrix::identity(n);
        return out;
    }

    const QMatrix kernel = kernel_basis(normals);
    QMatrix p(n, n);
    for (std::size_t k = 0; k < s; ++k)
        p(r.pivot_columns[k], k) = 1;
    for (std::size_t k = 0; k < kernel.cols(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            p(i, s + k) = kernel(i, k);

    const QMatrix transformed = normals * p;
    std::vector<Hyperplane> hs;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        Hyperplane h;
        for (std::size_t k = 0; k < s; ++k)
            h.normal.push_back(transformed(i, k));
        h.constant = a[i].constant;
        hs.push_back(std::move(h));
    }
    out.essential = Arrangement(ArrangementKind::Affine, s, std::move(hs));
    out.change_of_coordinates = std::move(p);
    return out;
}

}   // namespace arrcoh

#endif
