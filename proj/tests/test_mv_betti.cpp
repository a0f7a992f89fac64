#include <catch2/catch_amalgamated.hpp>

#include "arrcoh/mv_betti.hpp"
#include "support/generators.hpp"

using namespace arrcoh;

namespace {

using B = std::vector<std::uint64_t>;
using Dims = std::map<int, std::uint64_t>;
using Entries = std::map<Bidegree, std::uint64_t>;

const char* boolean2 = "affine 2\n1 0 0\n0 1 0\n";
const char* parallel2 = "affine 2\n1 0 0\n1 0 1\n";
const char* braid_essential = "affine 2\n1 -1 0\n1 0 0\n0 1 0\n";
const char* braid3 = "affine 3\n1 -1 0 0\n1 0 -1 0\n0 1 -1 0\n";

EPage e1_of(const char* text)
{
    return e1_page(enumerate_d_table(parse_arrangement(text)));
}

}   // namespace

TEST_CASE("punctured affine space", "[mv]")
{
    CHECK(punctured_space_cohomology(1).dims == Dims{{-1, 1}, {0, 1}});
    CHECK(punctured_space_cohomology(2).dims == Dims{{-2, 1}, {1, 1}});
    for (int m = 1; m <= 6; ++m)
        CHECK(punctured_space_cohomology(m).at(-m) == affine_space_cohomology(static_cast<std::size_t>(m)).at(-m));
    CHECK_THROWS_AS(punctured_space_cohomology(0), std::invalid_argument);
}

TEST_CASE("localized flat cohomology", "[mv]")
{
    CHECK(localized_flat_cohomology(2, 1).dims == Dims{{-2, 1}, {-1, 1}});
    CHECK(localized_flat_cohomology(2, std::nullopt).dims == Dims{{-2, 1}});
    CHECK(localized_flat_cohomology(3, 0).dims == Dims{{-3, 1}, {2, 1}});
    CHECK_THROWS_AS(localized_flat_cohomology(2, 2), std::invalid_argument);
    // second summand sits in row q = n - 2 dim - 1
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t d = 0; d < n; ++d)
            CHECK(localized_flat_cohomology(n, d).at(q_of_dimension(n, d)) == 1);
}

TEST_CASE("first page", "[mv]")
{
    const EPage b = e1_of(boolean2);
    CHECK(b.dims == Entries{{{-1, -2}, 1}, {{0, -2}, 2}, {{0, -1}, 2}, {{-1, 1}, 1}});

    const EPage br = e1_of(braid_essential);
    CHECK(br.dims ==
          Entries{{{-2, -2}, 1}, {{-1, -2}, 3}, {{0, -2}, 3}, {{0, -1}, 3}, {{-1, 1}, 3}, {{-2, 1}, 1}});

    DTable none;
    none.n = 2;
    CHECK_THROWS_AS(e1_page(none), std::invalid_argument);
}

TEST_CASE("last cohomology of a row", "[mv]")
{
    CHECK(last_cohomology_dim(B{1, 4, 6, 4}) == 1);
    CHECK(last_cohomology_dim(B{3}) == 3);
    CHECK(last_cohomology_dim(B{1, 3}) == 2);
    CHECK(last_cohomology_dim(B{}) == 0);
    CHECK_THROWS_AS(last_cohomology_dim(B{5, 1}), InconsistencyError);
}

TEST_CASE("second page", "[mv]")
{
    CHECK(e2_page(e1_of(boolean2)).dims == Entries{{{0, -2}, 1}, {{0, -1}, 2}, {{-1, 1}, 1}});
    CHECK(e2_page(e1_of(braid_essential)).dims == Entries{{{0, -2}, 1}, {{0, -1}, 3}, {{-1, 1}, 2}});
    CHECK(e2_page(e1_of(parallel2)).dims == Entries{{{0, -2}, 1}, {{0, -1}, 2}});
}

TEST_CASE("degeneration check", "[mv]")
{
    CHECK(degeneration_check(e2_page(e1_of(boolean2))));
    CHECK(degeneration_check(e2_page(e1_of(braid_essential))));

    EPage synthetic;
    synthetic.page_index = 2;
    synthetic.dims = {{{0, 0}, 1}, {{2, -1}, 1}};
    CHECK_FALSE(degeneration_check(synthetic));
    CHECK_THROWS_AS(betti_from_e2(synthetic), InconsistencyError);
}

TEST_CASE("reading the second page", "[mv]")
{
    CHECK(betti_from_e2(e2_page(e1_of(boolean2))).dims == Dims{{-2, 1}, {-1, 2}, {0, 1}});
    CHECK(betti_from_e2(e2_page(e1_of(braid_essential))).dims == Dims{{-2, 1}, {-1, 3}, {0, 2}});
    CHECK(betti_from_e2(e2_page(e1_of("affine 1\n1 0\n"))).dims == Dims{{-1, 1}, {0, 1}});

    EPage misplaced;
    misplaced.page_index = 2;
    misplaced.n = 2;
    misplaced.dims = {{{0, -2}, 1}, {{-1, -1}, 2}};   // row -1 should end at p = 0
    CHECK_THROWS_AS(betti_from_e2(misplaced), InconsistencyError);
}

TEST_CASE("Kunneth shift", "[mv]")
{
    const GradedDims g{Dims{{-2, 1}, {-1, 3}, {0, 2}}};
    CHECK(kunneth_shift(g, 0) == g);
    const GradedDims shifted = kunneth_shift(g, 1);
    CHECK(shifted.dims == Dims{{-3, 1}, {-2, 3}, {-1, 2}});
    CHECK(betti_numbers(shifted, 3) == B{1, 3, 2, 0});
    for (int m = 1; m <= 5; ++m)
        CHECK(kunneth_shift(punctured_space_cohomology(m), m - 1).dims == Dims{{-2 * m + 1, 1}, {0, 1}});
}

TEST_CASE("compute_betti named examples", "[mv]")
{
    SECTION("five generic lines")
    {
        const auto rep = compute_betti(parse_arrangement("affine 2\n1 0 0\n0 1 0\n1 1 1\n1 -2 3\n3 1 -7/2\n"));
        CHECK(rep.general_position);
        CHECK(rep.binomial_formula_holds == std::optional<bool>(true));
        CHECK(rep.betti == B{1, 5, 10});
        CHECK(rep.agreement == std::optional<bool>(true));
    }
    SECTION("Boolean arrangements")
    {
        for (std::size_t n = 1; n <= 5; ++n)
        {
            std::string text = "affine " + std::to_string(n) + "\n";
            for (std::size_t i = 0; i < n; ++i)
            {
                for (std::size_t j = 0; j <= n; ++j)
                    text += (i == j ? "1 " : "0 ");
                text += "\n";
            }
            const auto rep = compute_betti(parse_arrangement(text));
            for (std::size_t k = 0; k <= n; ++k)
                CHECK(rep.betti[k] == binomial(n, k));
            CHECK(rep.agreement == std::optional<bool>(true));
        }
    }
    SECTION("braid arrangement in A^3")
    {
        const auto rep = compute_betti(parse_arrangement(braid3));
        CHECK(rep.betti == B{1, 3, 2, 0});
        CHECK(rep.essential_rank == 2);
        CHECK(rep.shift == 1);
        CHECK(rep.pi_plus.dims == Dims{{-3, 1}, {-2, 3}, {-1, 2}});
        CHECK(*rep.oracle_mobius == rep.betti);
    }
    SECTION("empty arrangement")
    {
        const auto rep = compute_betti(Arrangement(ArrangementKind::Affine, 2, {}));
        CHECK(rep.betti == B{1, 0, 0});
        CHECK(rep.agreement == std::optional<bool>(true));
    }
    SECTION("projective input")
    {
        const Arrangement p = parse_arrangement("projective 2\n1 0 0\n0 1 0\n0 0 1\n");
        const auto rep = compute_betti(p);
        CHECK(rep.betti == B{1, 2, 1});   // torus
        CHECK(rep.r == 3);
        CHECK(rep.affine.size() == 2);

        BettiOptions opt;
        opt.infinity_index = 0;
        CHECK(compute_betti(p, opt).betti == rep.betti);
        opt.infinity_index = 7;
        CHECK_THROWS(compute_betti(p, opt));
        CHECK_THROWS_AS(compute_betti(parse_arrangement(boolean2), BettiOptions{0, 24, true}), ValidationError);
    }
    SECTION("enumeration cap")
    {
        BettiOptions opt;
        opt.enumeration_cap = 2;
        CHECK_THROWS_AS(compute_betti(parse_arrangement(braid3), opt), CapExceeded);
    }
}

TEST_CASE("binomial row has last cohomology 1", "[mv][property]")
{
    for (std::uint64_t r = 1; r <= 20; ++r)
    {
        B row;
        for (std::uint64_t s = r; s >= 1; --s)
            row.push_back(binomial(r, s));
        CHECK(last_cohomology_dim(row) == 1);
    }
}

TEST_CASE("pipeline invariants on random arrangements", "[mv][property]")
{
    testing::Rng rng(8675309);
    for (int t = 0; t < 120; ++t)
    {
        const auto n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 4));
        const auto r = static_cast<std::size_t>(testing::uniform_int(rng, 1, 6));
        const Arrangement a = testing::random_affine_arrangement(rng, n, r);
        if (a.size() == 0)
            continue;
        INFO("trial " << t);
        const auto rep = compute_betti(a);
        CHECK(rep.agreement == std::optional<bool>(true));
        CHECK(rep.betti[0] == 1);
        for (std::size_t k = rep.essential_rank + 1; k <= n; ++k)
            CHECK(rep.betti[k] == 0);
        CHECK(rep.degenerates);
        CHECK(check_row_structure(rep.e1));
        const int ne = static_cast<int>(rep.essential_rank);
        for (const auto& [pq, d] : rep.e2.dims)
            if (pq.second != -ne)
                CHECK(((pq.second - ne) % 2 + 2) % 2 == 1);
        if (rep.general_position)
            CHECK(rep.binomial_formula_holds == std::optional<bool>(true));
    }
}
