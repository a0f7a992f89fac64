#include <catch2/catch_amalgamated.hpp>

#include "arrcoh/ratlin.hpp"
#include "support/generators.hpp"

using namespace arrcoh;

TEST_CASE("rref of the identity", "[ratlin]")
{
    const auto r = rref(QMatrix::identity(2));
    CHECK(r.reduced == QMatrix::identity(2));
    CHECK(r.rank == 2);
    CHECK(r.pivot_columns == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rref of a rank-one matrix", "[ratlin]")
{
    const auto r = rref(QMatrix{{1, 2}, {2, 4}});
    CHECK(r.reduced == QMatrix{{1, 2}, {0, 0}});
    CHECK(r.rank == 1);
    CHECK(r.pivot_columns == std::vector<std::size_t>{0});
}

TEST_CASE("rref handles degenerate shapes", "[ratlin]")
{
    CHECK(rref(QMatrix(0, 4)).rank == 0);
    CHECK(rref(QMatrix(3, 0)).rank == 0);
    CHECK(kernel_basis(QMatrix(0, 3)) == QMatrix::identity(3));
    CHECK(kernel_basis(QMatrix(2, 0)).rows() == 0);
}

TEST_CASE("rank of a product of full-rank 5x3 and 3x7 factors is 3", "[ratlin]")
{
    // Factors fixed by hand: [I3; 1 1 1; 1 2 3] and [I3 | 1 0 2 1 ; 0 1 1 1 ; 3 1 0 2].
    const QMatrix left{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 3}};
    const QMatrix right{{1, 0, 0, 1, 0, 2, 1}, {0, 1, 0, 0, 1, 1, 1}, {0, 0, 1, 3, 1, 0, 2}};
    const auto r = rref(left * right);
    CHECK(r.rank == 3);
    CHECK(r.pivot_columns == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("rref leaves fractions exact", "[ratlin]")
{
    const auto r = rref(QMatrix{{3, 1}, {1, 3}});
    CHECK(r.reduced == QMatrix::identity(2));
    const auto s = rref(QMatrix{{3, 1, 1}});
    CHECK(s.reduced == QMatrix{{1, Rational(1, 3), Rational(1, 3)}});
}

TEST_CASE("kernel bases", "[ratlin]")
{
    SECTION("identity has trivial kernel")
    {
        const QMatrix k = kernel_basis(QMatrix::identity(2));
        CHECK(k.rows() == 2);
        CHECK(k.cols() == 0);
    }
    SECTION("zero row has the whole space as kernel")
    {
        CHECK(kernel_basis(QMatrix(1, 3)) == QMatrix::identity(3));
    }
    SECTION("[[1,1,0],[0,1,1]] has kernel spanned by (1,-1,1)")
    {
        const QMatrix m{{1, 1, 0}, {0, 1, 1}};
        const QMatrix k = kernel_basis(m);
        REQUIRE(k.cols() == 1);
        // proportional to (1,-1,1), checked by substitution and ratio
        CHECK((m * k).is_zero());
        CHECK(k(0, 0) != 0);
        CHECK(k(1, 0) == -k(0, 0));
        CHECK(k(2, 0) == k(0, 0));
    }
}

TEST_CASE("solve", "[ratlin]")
{
    SECTION("identity system")
    {
        const std::vector<Rational> b{3, 5};
        const auto s = solve(QMatrix::identity(2), b);
        REQUIRE(s);
        CHECK(s->particular == b);
        CHECK(s->kernel.cols() == 0);
    }
    SECTION("contradictory rows")
    {
        const std::vector<Rational> b{0, 1};
        CHECK_FALSE(solve(QMatrix{{1, 0}, {1, 0}}, b));
    }
    SECTION("underdetermined 2x + 4y = 6")
    {
        const QMatrix m{{2, 4}};
        const std::vector<Rational> b{6};
        const auto s = solve(m, b);
        REQUIRE(s);
        CHECK(s->particular == std::vector<Rational>{3, 0});
        REQUIRE(s->kernel.cols() == 1);
        CHECK(s->kernel.col(0) == std::vector<Rational>{-2, 1});
        CHECK(arrcoh::apply(m, s->particular) == b);
    }
    SECTION("length mismatch is a usage error")
    {
        const std::vector<Rational> b{1, 2, 3};
        CHECK_THROWS_AS(solve(QMatrix::identity(2), b), std::invalid_argument);
    }
}

TEST_CASE("inverse", "[ratlin]")
{
    const QMatrix m{{2, 1}, {1, 1}};
    const auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(m * *inv == QMatrix::identity(2));
    CHECK_FALSE(inverse(QMatrix{{1, 2}, {2, 4}}));
}

TEST_CASE("parse_rational", "[ratlin]")
{
    CHECK(*parse_rational("3") == 3);
    CHECK(*parse_rational("-7/14") == Rational(-1, 2));
    CHECK(*parse_rational("+2/3") == Rational(2, 3));
    CHECK_FALSE(parse_rational("1/0"));
    CHECK_FALSE(parse_rational("1.5"));
    CHECK_FALSE(parse_rational("x"));
    CHECK_FALSE(parse_rational("2/-3"));
    CHECK_FALSE(parse_rational("-"));
}

TEST_CASE("linear algebra invariants on random matrices", "[ratlin][property]")
{
    testing::Rng rng(20260101);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto rows = static_cast<std::size_t>(testing::uniform_int(rng, 0, 6));
        const auto cols = static_cast<std::size_t>(testing::uniform_int(rng, 0, 6));
        const std::size_t target = static_cast<std::size_t>(
            testing::uniform_int(rng, 0, static_cast<int>(std::min(rows, cols))));
        const QMatrix m = testing::random_matrix_of_rank(rng, rows, cols, target);

        const auto r = rref(m);
        INFO("trial " << trial << ": " << m);
        CHECK(r.rank == target);
        CHECK(r.rank <= std::min(rows, cols));
        CHECK(rref(r.reduced).reduced == r.reduced);
        CHECK(rank(m.transpose()) == r.rank);

        const QMatrix k = kernel_basis(m);
        CHECK(k.cols() + r.rank == cols);
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());

        std::vector<Rational> b(rows);
        for (auto& x : b)
            x = testing::random_rational(rng);
        const bool consistent = rank(hstack(m, QMatrix::column(b))) == r.rank;
        const auto s = solve(m, b);
        CHECK(s.has_value() == consistent);
        if (s)
            CHECK(arrcoh::apply(m, s->particular) == b);
    }
}
