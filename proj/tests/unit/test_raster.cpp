#include "primeifs/error.hpp"
#include "primeifs/ifs_engine.hpp"
#include "primeifs/raster.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace primeifs;

TEST_CASE("points land in the expected pixel")
{
    DensityGrid g(2);
    g.add({0.0, 0.0});
    CHECK(g.at(1, 0) == 1);
    g.add({1.0, 1.0});
    CHECK(g.at(0, 1) == 1);
    g.add({0.5, 0.25});
    CHECK(g.at(1, 1) == 1);
    CHECK(g.points_total() == 3);
    CHECK_THROWS_AS(g.add({1.5, 0.0}), OutOfUnitSquareError);
    CHECK_THROWS_AS(g.add({0.0, -1e-9}), OutOfUnitSquareError);
    CHECK_THROWS_AS(DensityGrid(1), InvalidQueryError);
}

TEST_CASE("pgm encoding")
{
    const DensityGrid empty(2);
    const auto pgm = render_pgm(empty, IntensityScale::Log);
    CHECK(pgm == std::string("P5\n2 2\n255\n") + std::string(4, '\xff'));

    DensityGrid g(3);
    for (int i = 0; i < 5; ++i)
        g.add({0.1, 0.9});
    g.add({0.9, 0.1});
    for (auto scale : {IntensityScale::Linear, IntensityScale::Log}) {
        const auto img = render(g, scale);
        CHECK(img(0, 0) == 0);
        CHECK(img(1, 1) == 255);
        CHECK(img(2, 2) > 0);
        CHECK(img(2, 2) < 255);
        const auto bytes = encode_pgm(img);
        CHECK(bytes.size() == std::string("P5\n3 3\n255\n").size() + 9);
    }
    CHECK(render(g, IntensityScale::Linear)(2, 2) == 255 - 51);
}

TEST_CASE("points csv")
{
    const std::vector<Point2d> one{{0.5, 0.5}};
    CHECK(write_points_csv(one) == "0.5,0.5\n");
    CHECK(write_points_csv({}).empty());
    CHECK(parse_points_csv("").empty());

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point2d> pts;
    for (int i = 0; i < 2000; ++i)
        pts.emplace_back(u(rng), u(rng));
    pts.emplace_back(1.0 / 3.0, 0.1);
    pts.emplace_back(0.0, 1.0);
    const auto back = parse_points_csv(write_points_csv(pts));
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].x() == pts[i].x());
        CHECK(back[i].y() == pts[i].y());
    }
    CHECK_THROWS_AS(parse_points_csv("0.5;0.5\n"), InvalidQueryError);
}

TEST_CASE("sharded accumulation matches a single pass")
{
    const auto pts = chaos_game(standard_square_system(), 300'000, 11, Point2d(0.5, 0.5));
    const auto one = accumulate(pts, 128, 1);
    for (std::size_t w : {2u, 3u, 7u}) {
        const auto many = accumulate(pts, 128, w);
        CHECK(many.counts() == one.counts());
        CHECK(many.points_total() == pts.size());
    }
    CHECK(one.counts().sum() == pts.size());
}

TEST_CASE("gasket raster")
{
    const auto pts = chaos_game(gasket_system(), 400'000, 5, Point2d(0.5, 0.5));
    const std::size_t n = 256;
    // The first few points still sit on corners of empty cells.
    const auto g = accumulate(std::span(pts).subspan(16), n);
    // Quadrant 3 (upper right) is never visited after the first step.
    std::uint64_t upper_right = 0;
    for (std::size_t r = 0; r < n / 2; ++r)
        for (std::size_t c = n / 2; c < n; ++c)
            upper_right += g.at(r, c);
    CHECK(upper_right == 0);

    // At dyadic scale 2^k, exactly 3^k blocks are dark.
    for (std::size_t k = 1; k <= 5; ++k) {
        const std::size_t blocks = std::size_t{1} << k, span = n / blocks;
        std::size_t dark = 0;
        for (std::size_t br = 0; br < blocks; ++br)
            for (std::size_t bc = 0; bc < blocks; ++bc) {
                const auto sum =
                    g.counts().block(br * span, bc * span, span, span).sum();
                dark += sum > 0 ? 1 : 0;
            }
        std::size_t expect = 1;
        for (std::size_t i = 0; i < k; ++i)
            expect *= 3;
        CHECK(dark == expect);
    }
}

TEST_CASE("pixel counts equal address census at size 2^k")
{
    const auto pts = chaos_game(standard_square_system(), 50'000, 21, Point2d(0.5, 0.5));
    for (std::size_t k : {1u, 3u, 5u}) {
        const std::size_t n = std::size_t{1} << k;
        const auto g = accumulate(pts, n);
        std::map<Address, std::uint64_t> census;
        for (const auto& p : pts)
            ++census[address_of_point(p, k)];
        for (const auto& [a, count] : census) {
            const auto sq = cell_of_address(a);
            const auto col = static_cast<std::size_t>(sq.lower_left.x() * static_cast<double>(n));
            const auto row = n - 1 - static_cast<std::size_t>(sq.lower_left.y() * static_cast<double>(n));
            CHECK(g.at(row, col) == count);
        }
    }
}

TEST_CASE("gridlines")
{
    GrayMatrix img = GrayMatrix::Constant(8, 8, 255);
    burn_gridlines(img, 2);
    CHECK(img(0, 4) == 128);
    CHECK(img(3, 0) == 128);
    CHECK(img(0, 0) == 255);
    CHECK(img(7, 7) == 255);
    GrayMatrix plain = GrayMatrix::Constant(8, 8, 255);
    burn_gridlines(plain, 0);
    CHECK((plain.array() == 255).all());
}
