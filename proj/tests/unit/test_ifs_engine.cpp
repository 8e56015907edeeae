#include "primeifs/error.hpp"
#include "primeifs/ifs_engine.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace primeifs;

TEST_CASE("apply_map")
{
    const auto gasket = gasket_system();
    CHECK(apply_map(gasket.map(1), Point2d(0, 0)) == Point2d(0.5, 0));
    CHECK(apply_map(gasket.map(0), Point2d(1, 1)) == Point2d(0.5, 0.5));

    const AffineMap2D rot{1, 1, std::numbers::pi / 2, std::numbers::pi / 2, 0, 0};
    const Point2d p = apply_map(rot, Point2d(1, 0));
    CHECK(p.x() == doctest::Approx(0.0));
    CHECK(p.y() == doctest::Approx(1.0));

    // Templated on the scalar.
    const AffineMap<float> half{0.5f, 0.5f, 0, 0, 0.5f, 0};
    CHECK(apply_map(half, Point2<float>(1, 1)) == Point2<float>(1.0f, 0.5f));
}

TEST_CASE("parameter tables of the square and gasket systems")
{
    const auto sq = standard_square_system();
    REQUIRE(sq.size() == 4);
    CHECK(sq.map(3).e == 0.5);
    CHECK(sq.map(3).f == 0.5);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(sq.map(i).quadrant() == Symbol(i + 1));

    const auto g = gasket_system();
    REQUIRE(g.size() == 3);
    for (const auto& m : g.maps()) {
        CHECK(m.r == 0.5);
        CHECK(m.s == 0.5);
        CHECK(m.theta == 0);
        CHECK(m.phi == 0);
    }
    const auto uniform = standard_square_system(true);
    REQUIRE(uniform.probabilities());
    for (double p : *uniform.probabilities())
        CHECK(p == 0.25);
}

TEST_CASE("system validation")
{
    const AffineMap2D half{0.5, 0.5, 0, 0, 0, 0};
    CHECK_THROWS_AS(IfsSystem2D({half, half}, std::vector<double>{0.5, 0.6}), UnsupportedMapError);
    CHECK_THROWS_AS(IfsSystem2D({half, half}, std::vector<double>{1.5, -0.5}), UnsupportedMapError);
    CHECK_THROWS_AS(IfsSystem2D({half}, std::vector<double>{0.5, 0.5}), UnsupportedMapError);
    CHECK_THROWS_AS(IfsSystem2D({}), UnsupportedMapError);
    CHECK(IfsSystem2D({half, half}, std::vector<double>{0.3, 0.7}).contractive());
    const IfsSystem2D expanding({AffineMap2D{1.0, 0.5, 0, 0, 0, 0}});
    CHECK_FALSE(expanding.contractive());
    CHECK_THROWS_AS(chaos_game(expanding, 10, 1, Point2d(0, 0)), UnsupportedMapError);
}

TEST_CASE("addresses and cells")
{
    CHECK(address_of_point(Point2d(0.25, 0.25), 1).to_string() == "1");
    CHECK(address_of_point(Point2d(0.6, 0.7), 2).to_string() == "41");
    CHECK(address_of_point(Point2d(0, 0), 3).to_string() == "111");
    CHECK(address_of_point(Point2d(1, 1), 3).to_string() == "444");
    CHECK(address_of_point(Point2d(0.5, 0.5), 1).to_string() == "4");
    CHECK_THROWS_AS(address_of_point(Point2d(1.01, 0.5), 2), OutOfUnitSquareError);
    CHECK_THROWS_AS(address_of_point(Point2d(0.5, -0.01), 2), OutOfUnitSquareError);

    auto c = cell_of_address(Address::parse("13"));
    CHECK(c.lower_left == Point2d(0, 0.25));
    CHECK(c.side == 0.25);
    c = cell_of_address(Address::parse("4"));
    CHECK(c.lower_left == Point2d(0.5, 0.5));
    CHECK(c.side == 0.5);
    c = cell_of_address(Address::parse("22"));
    CHECK(c.lower_left == Point2d(0.75, 0));
    CHECK_THROWS_AS(Address::parse("15"), SymbolOutOfRangeError);
}

TEST_CASE("cell_of_address and address_of_point are inverse")
{
    std::mt19937_64 rng(3);
    for (std::size_t depth = 1; depth <= 20; ++depth) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Symbol> digits;
            for (std::size_t i = 0; i < depth; ++i)
                digits.push_back(static_cast<Symbol>(1 + rng() % 4));
            const Address a(digits);
            const auto cell = cell_of_address(a);
            const Point2d center = cell.lower_left + Point2d::Constant(cell.side / 2);
            CHECK(address_of_point(center, depth) == a);
        }
    }
}

TEST_CASE("cell_of_address is the image of the square under the address maps")
{
    const auto sq = standard_square_system();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Symbol> digits;
        for (std::size_t i = 0, n = 1 + rng() % 12; i < n; ++i)
            digits.push_back(static_cast<Symbol>(1 + rng() % 4));
        Point2d lo(0, 0), hi(1, 1);
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            lo = sq.apply(*it - 1, lo);
            hi = sq.apply(*it - 1, hi);
        }
        const auto cell = cell_of_address(Address(digits));
        CHECK(cell.lower_left == lo);
        CHECK(cell.side == hi.x() - lo.x());
    }
}

namespace {

// Geometric recursion: push the corners of every square through every map and
// locate the image by its center, without using address prepending.
std::set<Address> gasket_cells_by_geometry(std::size_t k)
{
    const auto g = gasket_system();
    std::vector<std::pair<Point2d, double>> squares{{Point2d(0, 0), 1.0}};
    for (std::size_t step = 0; step < k; ++step) {
        std::vector<std::pair<Point2d, double>> next;
        for (const auto& [corner, side] : squares)
            for (std::size_t i = 0; i < g.size(); ++i)
                next.emplace_back(g.apply(i, corner), side / 2);
        squares = std::move(next);
    }
    std::set<Address> out;
    for (const auto& [corner, side] : squares)
        out.insert(address_of_point(corner + Point2d::Constant(side / 2), k));
    return out;
}

} // namespace

TEST_CASE("deterministic iteration")
{
    const auto g = gasket_system();
    const auto one = deterministic_iterate(g, CellSet::full_square(), 1);
    CHECK(one.depth == 1);
    CHECK(one.members == std::set<Address>{Address::parse("1"), Address::parse("2"),
                                           Address::parse("3")});
    std::size_t expected = 1;
    for (std::size_t k = 1; k <= 8; ++k) {
        expected *= 3;
        const auto cells = deterministic_iterate(g, CellSet::full_square(), k);
        CHECK(cells.members.size() == expected);
        if (k <= 6)
            CHECK(cells.members == gasket_cells_by_geometry(k));
    }
    CHECK(deterministic_iterate(standard_square_system(), CellSet::full_square(), 3).members.size() ==
          64);
    // Starting from a single cell.
    const CellSet corner{1, {Address::parse("4")}};
    const auto two = deterministic_iterate(g, corner, 2);
    CHECK(two.depth == 3);
    CHECK(two.members.size() == 9);
    CHECK(two.members.count(Address::parse("124")) == 1);

    const IfsSystem2D rotated({AffineMap2D{0.5, 0.5, 0.1, 0.1, 0, 0}});
    CHECK_THROWS_AS(deterministic_iterate(rotated, CellSet::full_square(), 1), UnsupportedMapError);
}

TEST_CASE("chaos game")
{
    const auto g = gasket_system();
    CHECK(chaos_game(g, 0, 1, Point2d(0, 0)).empty());

    const auto a = chaos_game(g, 5000, 99, Point2d(0, 0));
    const auto b = chaos_game(g, 5000, 99, Point2d(0, 0));
    CHECK(a == b);
    CHECK(a != chaos_game(g, 5000, 100, Point2d(0, 0)));

    // From the fixed point of T1 every point stays on the attractor: no address digit 4.
    for (std::size_t t = 0; t < a.size(); ++t) {
        const auto addr = address_of_point(a[t], std::min<std::size_t>(t + 1, 12));
        for (Symbol d : addr.digits())
            CHECK(d != 4);
    }

    const auto sq = standard_square_system(true);
    const auto pts = chaos_game(sq, 100'000, 2024, Point2d(0.5, 0.5));
    std::set<Address> seen;
    for (const auto& p : pts)
        seen.insert(address_of_point(p, 3));
    CHECK(seen.size() == 64);

    // Weighted selection honours zero weights.
    const IfsSystem2D skewed(standard_square_system().maps(), std::vector<double>{0.5, 0.5, 0, 0});
    for (const auto& p : chaos_game(skewed, 2000, 1, Point2d(0.5, 0.25)))
        CHECK(p.y() < 0.5);
}

TEST_CASE("driven orbit")
{
    const auto sq = standard_square_system();
    const std::vector<Symbol> one{1};
    CHECK(driven_orbit(one, sq).front() == Point2d(0.25, 0.25));

    const std::vector<Symbol> fours(60, 4);
    const auto conv = driven_orbit(fours, sq);
    CHECK(conv.back().x() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(conv.back().y() == doctest::Approx(1.0).epsilon(1e-15));

    // Six exact dyadic steps from (1/2, 1/2); x and y in units of 2^-7.
    const std::vector<Symbol> drive{3, 1, 2, 3, 4, 2};
    long x = 64, y = 64;
    for (Symbol s : drive) {
        x = x / 2 + (((s - 1) & 1) ? 64 : 0);
        y = y / 2 + (((s - 1) & 2) ? 64 : 0);
    }
    const auto orbit = driven_orbit(drive, sq);
    CHECK(orbit.back() == Point2d(x / 128.0, y / 128.0));
    CHECK(address_of_point(orbit.back(), 2).to_string() == "24");

    const std::vector<Symbol> bad{1, 5};
    CHECK_THROWS_AS(driven_orbit(bad, sq), SymbolOutOfRangeError);
    const std::vector<Symbol> four{4};
    CHECK_THROWS_AS(driven_orbit(four, gasket_system()), SymbolOutOfRangeError);
}

TEST_CASE("orbit points sit in the cell of their reversed last symbols")
{
    const auto sq = standard_square_system();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Symbol> s;
        for (std::size_t i = 0, n = 1 + rng() % 120; i < n; ++i)
            s.push_back(static_cast<Symbol>(1 + rng() % 4));
        const auto orbit = driven_orbit(s, sq);
        const std::size_t k = 1 + rng() % 10;
        for (std::size_t t = k; t <= s.size(); ++t) {
            std::vector<Symbol> expected(s.rbegin() + static_cast<long>(s.size() - t),
                                         s.rbegin() + static_cast<long>(s.size() - t + k));
            REQUIRE(address_of_point(orbit[t - 1], k) == Address(expected));
        }
    }
}
