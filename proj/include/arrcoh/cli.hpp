/**
 * Command-line driver: reads an arrangement or double-complex file, runs the
 * requested computation and renders text or JSON. Kept separate from main()
 * so the whole surface is testable in-process.
 *
 * Exit status: 0 success, 1 parse/validation error, 2 enumeration cap
 * exceeded, 3 consistency-check failure.
 */
#ifndef ARRCOH_CLI_HPP
#define ARRCOH_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrangement.hpp"
#include "errors.hpp"
#include "flats.hpp"
#include "mv_betti.hpp"
#include "ss_engine.hpp"

namespace arrcoh::cli {

enum class Subcommand
{
    Betti,
    Poset,
    E1,
    E2,
    Oracle,
    Check,
    Ss
};

inline std::optional<Subcommand> parse_subcommand(const std::string& s)
{
    if (s == "betti") return Subcommand::Betti;
    if (s == "poset") return Subcommand::Poset;
    if (s == "e1") return Subcommand::E1;
    if (s == "e2") return Subcommand::E2;
    if (s == "oracle") return Subcommand::Oracle;
    if (s == "check") return Subcommand::Check;
    if (s == "ss") return Subcommand::Ss;
    return std::nullopt;
}

struct RunConfig
{
    Subcommand subcommand = Subcommand::Betti;
    std::string input_path = "-";
    std::optional<std::size_t> infinity_index;   // 1-based on the command line, 0-based here
    std::size_t enumeration_cap = default_enumeration_cap;
    bool json = false;
    bool verbose = false;
    bool oracles = true;
};

enum ExitStatus : int
{
    exit_ok = 0,
    exit_invalid = 1,
    exit_cap = 2,
    exit_inconsistent = 3
};

using json = nlohmann::ordered_json;

namespace detail {

inline std::string join(const std::vector<std::uint64_t>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? " " : "") << v[i];
    return os.str();
}

inline std::string poincare_string(const std::vector<std::uint64_t>& b)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < b.size(); ++k)
    {
        if (b[k] == 0)
            continue;
        os << (first ? "" : " + ");
        if (k == 0 || b[k] != 1)
            os << b[k];
        if (k >= 1)
            os << 't';
        if (k >= 2)
            os << '^' << k;
        first = false;
    }
    return first ? "0" : os.str();
}

inline json page_json(const EPage& e)
{
    json arr = json::array();
    for (const auto& [pq, d] : e.dims)
        if (d != 0)
            arr.push_back({{"p", pq.first}, {"q", pq.second}, {"dim", d}});
    return arr;
}

/// q rows top to bottom, p columns left to right; '.' marks zero.
template <typename Map>
void print_grid(std::ostream& out, const Map& entries)
{
    if (entries.empty())
    {
        out << "  (empty)\n";
        return;
    }
    int pmin = entries.begin()->first.first, pmax = pmin;
    int qmin = entries.begin()->first.second, qmax = qmin;
    for (const auto& [pq, d] : entries)
    {
        pmin = std::min(pmin, pq.first);
        pmax = std::max(pmax, pq.first);
        qmin = std::min(qmin, pq.second);
        qmax = std::max(qmax, pq.second);
    }
    const int w = 6;
    out << std::setw(w) << "q\\p";
    for (int p = pmin; p <= pmax; ++p)
        out << std::setw(w) << p;
    out << '\n';
    for (int q = qmax; q >= qmin; --q)
    {
        out << std::setw(w) << q;
        for (int p = pmin; p <= pmax; ++p)
        {
            auto it = entries.find({p, q});
            if (it == entries.end() || it->second == 0)
                out << std::setw(w) << '.';
            else
                out << std::setw(w) << it->second;
        }
        out << '\n';
    }
}

inline json report_json(const BettiReport& rep)
{
    json j;
    j["kind"] = to_string(rep.kind);
    j["n"] = rep.n;
    j["r"] = rep.r;
    j["essential_rank"] = rep.essential_rank;
    j["shift"] = rep.shift;
    j["betti"] = rep.betti;
    j["poincare"] = rep.poincare;
    j["e1"] = page_json(rep.e1);
    j["e2"] = page_json(rep.e2);
    if (rep.oracle_mobius)
        j["oracle"] = {{"mobius", *rep.oracle_mobius}, {"whitney", *rep.oracle_whitney}};
    else
        j["oracle"] = nullptr;
    if (rep.agreement)
        j["agreement"] = *rep.agreement;
    else
        j["agreement"] = nullptr;
    return j;
}

inline json poset_json(const IntersectionPoset& p)
{
    json flats = json::array();
    for (std::size_t x = 0; x < p.size(); ++x)
    {
        std::vector<std::size_t> hs;
        for (std::size_t h = 0; h < p.containing[x].size(); ++h)
            if (p.containing[x].test(h))
                hs.push_back(h + 1);
        flats.push_back({{"index", x},
                         {"dimension", p.flats[x].dimension()},
                         {"codim", p.codim[x]},
                         {"mu", p.mobius[x]},
                         {"hyperplanes", hs}});
    }
    return flats;
}

inline std::string flat_equations(const Flat& f)
{
    if (f.canonical_system.rows() == 0)
        return "(ambient space)";
    std::string s;
    for (std::size_t i = 0; i < f.canonical_system.rows(); ++i)
    {
        Hyperplane h;
        const auto row = f.canonical_system.row(i);
        h.normal.assign(row.begin(), row.end() - 1);
        h.constant = row.back();
        s += (i ? ", " : "") + equation_string(h);
    }
    return s;
}

struct CheckLine
{
    std::string name;
    bool ok;
    std::string detail;
};

/// Every module-level invariant that can be evaluated on one arrangement.
inline std::vector<CheckLine> run_checks(const Arrangement& input, const RunConfig& cfg, const BettiReport& rep)
{
    std::vector<CheckLine> out;
    const Arrangement& a = rep.affine;

    out.push_back({"oracle agreement", rep.agreement.value_or(false),
                   "mobius " + join(rep.oracle_mobius.value_or(std::vector<std::uint64_t>{})) + ", whitney " +
                       join(rep.oracle_whitney.value_or(std::vector<std::uint64_t>{}))});
    out.push_back({"degeneration at page 2", rep.degenerates, ""});
    if (a.size() > 0)
        out.push_back({"row structure p = (1-q-n)/2", check_row_structure(rep.e1), ""});

    bool conserved = true;
    for (std::size_t s = 1; s <= rep.d_table.r; ++s)
    {
        std::uint64_t total = rep.d_table.empty_at(s);
        for (const auto& [pq, c] : rep.d_table.counts)
            if (1 - pq.first == static_cast<int>(s))
                total += c;
        conserved = conserved && total == binomial(rep.d_table.r, s);
    }
    out.push_back({"subset-count conservation", conserved, ""});

    const IntersectionPoset poset = build_intersection_poset(a);
    bool signs = true;
    for (std::size_t x = 0; x < poset.size(); ++x)
        signs = signs && poset.mobius[x] != 0 && ((poset.mobius[x] > 0) == (poset.codim[x] % 2 == 0));
    out.push_back({"mobius sign alternation", signs, ""});

    out.push_back({"b0 = 1", !rep.betti.empty() && rep.betti[0] == 1, ""});
    bool above_rank = true;
    for (std::size_t k = rep.essential_rank + 1; k < rep.betti.size(); ++k)
        above_rank = above_rank && rep.betti[k] == 0;
    out.push_back({"b_k = 0 above the rank", above_rank, ""});

    if (rep.general_position)
        out.push_back({"general-position binomial formula", rep.binomial_formula_holds.value_or(false), ""});

    if (input.kind() == ArrangementKind::Projective)
    {
        bool same = true;
        std::string detail;
        for (std::size_t i = 0; i < input.size(); ++i)
        {
            BettiOptions opt;
            opt.infinity_index = i;
            opt.enumeration_cap = cfg.enumeration_cap;
            opt.run_oracles = false;
            const auto other = compute_betti(input, opt);
            if (other.betti != rep.betti)
            {
                same = false;
                detail = "infinity " + std::to_string(i + 1) + " gives " + join(other.betti);
            }
        }
        out.push_back({"deconing invariance", same, detail});
    }
    return out;
}

inline int run_ss(const RunConfig& cfg, std::istream& in, std::ostream& out)
{
    const DoubleComplex c = parse_double_complex(in);
    const TotalComplex t = total_complex(c);
    const auto h = cohomology_dims(t);

    int width = 1, height = 1;
    if (!c.support().empty())
    {
        int pmin = c.support().front().first, pmax = pmin, qmin = c.support().front().second, qmax = qmin;
        for (const auto& [p, q] : c.support())
        {
            pmin = std::min(pmin, p);
            pmax = std::max(pmax, p);
            qmin = std::min(qmin, q);
            qmax = std::max(qmax, q);
        }
        width = pmax - pmin + 1;
        height = qmax - qmin + 1;
    }
    const int r_max = std::max(width, height) + 2;

    bool all_converge = true;
    json j;
    j["kind"] = "double_complex";
    json hj = json::object();
    for (const auto& [m, d] : h)
        hj[std::to_string(m)] = d;
    j["total_cohomology"] = hj;
    json filtrations = json::array();

    if (!cfg.json)
    {
        out << "total cohomology:";
        for (const auto& [m, d] : h)
            out << " H^" << m << "=" << d;
        out << '\n';
    }

    for (Filtration f : {Filtration::Horizontal, Filtration::Vertical})
    {
        const PageTable pt = pages(c, f, r_max);
        const bool ok = verify_convergence(pt, h);
        all_converge = all_converge && ok;
        const int last = std::min(pt.stable_at, pt.r_max);
        if (cfg.json)
        {
            json pj = json::array();
            for (int r = 0; r <= last; ++r)
            {
                json entries = json::array();
                for (const auto& [pq, d] : pt.page(r))
                    if (d != 0)
                        entries.push_back({{"p", pq.first}, {"q", pq.second}, {"dim", d}});
                pj.push_back({{"r", r}, {"entries", entries}});
            }
            filtrations.push_back(
                {{"filtration", to_string(f)}, {"stable_at", pt.stable_at}, {"pages", pj}, {"converges", ok}});
        }
        else
        {
            out << "\n" << to_string(f) << " filtration (stable at r=" << pt.stable_at << ")\n";
            for (int r = 0; r <= last; ++r)
            {
                out << "E" << r << ":\n";
                print_grid(out, pt.page(r));
            }
            out << "converges: " << (ok ? "true" : "false") << '\n';
        }
    }
    if (cfg.json)
    {
        j["filtrations"] = filtrations;
        j["converges"] = all_converge;
        out << j.dump(2) << '\n';
    }
    return all_converge ? exit_ok : exit_inconsistent;
}

inline int run_arrangement(const RunConfig& cfg, std::istream& in, std::ostream& out)
{
    const Arrangement a = parse_arrangement(in);
    if (cfg.infinity_index && a.kind() != ArrangementKind::Projective)
        throw ValidationError("--infinity is only valid for projective input");
    if (cfg.infinity_index && *cfg.infinity_index >= a.size())
        throw ValidationError("--infinity " + std::to_string(*cfg.infinity_index + 1) + " out of range (" +
                              std::to_string(a.size()) + " hyperplanes)");

    BettiOptions opt;
    opt.infinity_index = cfg.infinity_index;
    opt.enumeration_cap = cfg.enumeration_cap;
    const bool need_oracles = cfg.subcommand == Subcommand::Oracle || cfg.subcommand == Subcommand::Check;
    opt.run_oracles = need_oracles || cfg.oracles;
    const BettiReport rep = compute_betti(a, opt);

    json j = report_json(rep);
    int status = exit_ok;
    if (rep.agreement && !*rep.agreement)
        status = exit_inconsistent;

    switch (cfg.subcommand)
    {
    case Subcommand::Betti:
        if (!cfg.json)
        {
            out << "betti: " << join(rep.betti) << '\n';
            out << "poincare: " << poincare_string(rep.poincare) << '\n';
            if (rep.agreement)
                out << "oracle agreement: " << (*rep.agreement ? "true" : "false") << '\n';
        }
        break;
    case Subcommand::E1:
    case Subcommand::E2:
        if (!cfg.json)
        {
            const bool first = cfg.subcommand == Subcommand::E1;
            out << (first ? "E1" : "E2") << " page (n=" << rep.essential_rank << ", r=" << rep.affine.size() << ")\n";
            print_grid(out, first ? rep.e1.dims : rep.e2.dims);
        }
        break;
    case Subcommand::Poset:
    {
        const IntersectionPoset p = build_intersection_poset(rep.affine);
        if (cfg.json)
            j["poset"] = poset_json(p);
        else
        {
            out << "flats: " << p.size() << '\n';
            out << std::setw(5) << "#" << std::setw(7) << "codim" << std::setw(6) << "mu" << "  hyperplanes / equations\n";
            for (std::size_t x = 0; x < p.size(); ++x)
            {
                std::string hs = "{";
                for (std::size_t h = 0; h < p.containing[x].size(); ++h)
                    if (p.containing[x].test(h))
                        hs += (hs.size() > 1 ? "," : "") + std::to_string(h + 1);
                hs += "}";
                out << std::setw(5) << x << std::setw(7) << p.codim[x] << std::setw(6) << p.mobius[x] << "  " << hs
                    << "  " << flat_equations(p.flats[x]) << '\n';
            }
        }
        break;
    }
    case Subcommand::Oracle:
        if (!cfg.json)
        {
            out << "mobius: " << join(*rep.oracle_mobius) << '\n';
            out << "whitney: " << join(*rep.oracle_whitney) << '\n';
            out << "spectral sequence: " << join(rep.betti) << '\n';
            out << "agreement: " << (*rep.agreement ? "true" : "false") << '\n';
        }
        break;
    case Subcommand::Check:
    {
        const auto checks = run_checks(a, cfg, rep);
        bool all = true;
        json cj = json::array();
        for (const auto& c : checks)
        {
            all = all && c.ok;
            cj.push_back({{"name", c.name}, {"ok", c.ok}});
            if (!cfg.json)
                out << (c.ok ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")")
                    << '\n';
        }
        if (!cfg.json)
        {
            out << "betti: " << join(rep.betti) << '\n';
            out << "agreement: " << (rep.agreement.value_or(false) ? "true" : "false") << '\n';
            out << "check: " << (all ? "passed" : "FAILED") << '\n';
        }
        j["checks"] = cj;
        if (!all)
            status = exit_inconsistent;
        break;
    }
    case Subcommand::Ss:
        break;
    }

    if (cfg.verbose && !cfg.json)
    {
        out << "kind: " << to_string(rep.kind) << ", n = " << rep.n << ", r = " << rep.r << '\n';
        out << "essential rank: " << rep.essential_rank << ", kunneth shift: " << rep.shift << '\n';
        out << "pi_+ R O(*Y):";
        for (const auto& [i, d] : rep.pi_plus.dims)
            out << " H^" << i << "=" << d;
        out << '\n';
        out << "general position: " << (rep.general_position ? "yes" : "no") << '\n';
    }
    if (cfg.json)
    {
        if (cfg.verbose)
        {
            json pj = json::object();
            for (const auto& [i, d] : rep.pi_plus.dims)
                pj[std::to_string(i)] = d;
            j["pi_plus"] = pj;
            j["general_position"] = rep.general_position;
        }
        out << j.dump(2) << '\n';
    }
    return status;
}

}   // namespace detail

/// Runs one subcommand; diagnostics go to err, results to out.
inline int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err)
{
    try
    {
        if (cfg.enumeration_cap < 1)
            throw ValidationError("--cap must be at least 1");
        if (cfg.subcommand == Subcommand::Ss)
            return detail::run_ss(cfg, in, out);
        return detail::run_arrangement(cfg, in, out);
    }
    catch (const ParseError& e)
    {
        err << "error: " << cfg.input_path << ": " << e.what() << '\n';
        return exit_invalid;
    }
    catch (const CapExceeded& e)
    {
        err << "error: " << e.what() << " (raise it with --cap)\n";
        return exit_cap;
    }
    catch (const InconsistencyError& e)
    {
        err << "consistency failure: " << e.what() << '\n';
        return exit_inconsistent;
    }
    catch (const ValidationError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (const std::invalid_argument& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (const std::out_of_range& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
}

}   // namespace arrcoh::cli

#endif
