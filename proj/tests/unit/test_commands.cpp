#include "primeifs/commands.hpp"
#include "primeifs/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace primeifs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("primeifs_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

} // namespace

TEST_CASE("parse_count")
{
    CHECK(parse_count("1000") == 1000);
    CHECK(parse_count("1e6") == 1'000'000);
    CHECK(parse_count("10^7") == 10'000'000);
    CHECK(parse_count("1_000_000") == 1'000'000);
    CHECK(parse_count("25e2") == 2500);
    CHECK_THROWS_AS(parse_count("-5"), InvalidQueryError);
    CHECK_THROWS_AS(parse_count("1.5"), InvalidQueryError);
    CHECK_THROWS_AS(parse_count(""), InvalidQueryError);
    CHECK_THROWS_AS(parse_count("1e30"), InvalidQueryError);
    CHECK(parse_count_list("7, 1e6,1e7") == std::vector<std::uint64_t>{7, 1'000'000, 10'000'000});
}

TEST_CASE("parameter validation")
{
    try {
        normalize_parameters("drive", {{"mod", 7}});
        FAIL("modulus 7 accepted");
    } catch (const InvalidModulusError& e) {
        CHECK(std::string(e.what()).find("Please choose modulus 5, 8, 10, or 12") != std::string::npos);
    }
    CHECK_THROWS_AS(normalize_parameters("tuple", {{"offset", 0}}), InvalidQueryError);
    CHECK(normalize_parameters("tuple", {{"offset", 2}})["ordering"] == "1 3 5 7");
    CHECK(normalize_parameters("tuple", {{"offset", 3}})["ordering"] == "0 2 4 6");
    CHECK_THROWS_AS(normalize_parameters("drive", {{"count", 10}, {"limit", 100}}), InvalidQueryError);
    CHECK_THROWS_AS(normalize_parameters("nope", json::object()), InvalidQueryError);
    CHECK_THROWS_AS(normalize_parameters("gasket", {{"scale", "cubic"}}), InvalidQueryError);
    const auto p = normalize_parameters("drive", {{"count", "1e4"}});
    CHECK(p["count"] == 10000);
    CHECK(p["start"] == 7);
    CHECK(p["mod"] == 10);
}

TEST_CASE("drive writes one plot and census per canonical ordering")
{
    const auto dir = scratch("drive");
    const auto m = run_command("drive", {{"count", 5000}, {"size", 64}}, dir / "out", {});
    CHECK(m.artifacts.size() == 3 * 2 + 1);
    CHECK(m.artifacts.back() == "manifest.json");
    for (const auto& a : m.artifacts)
        CHECK(fs::exists(dir / "out" / a));
    const auto census = read_json(dir / "out" / "drive_1-3-7-9.census.json");
    CHECK(census["pairs"]["total"] == 4999);
    CHECK(census["kgram"]["total"] == 4998);
    CHECK(census["kgram"]["arity"] == 3);
    const auto manifest = read_json(dir / "out" / "manifest.json");
    CHECK(manifest["subcommand"] == "drive");
    CHECK(manifest["rng"] == "mt19937_64");
    CHECK(manifest["convention"]["mode"] == "ByCountFrom");
    CHECK(manifest["parameters"]["count"] == 5000);

    const auto skip = run_command("drive", {{"count", 500}, {"skip_third", true}, {"size", 8}},
                                  dir / "skip", {});
    CHECK(skip.artifacts.size() == 2 * 2 + 1);

    CHECK_THROWS_AS(run_command("drive", {{"ordering", "1 3 5 7"}, {"count", 10}}, dir / "bad", {}),
                    InvalidModulusError);
}

TEST_CASE("rotdist and absdiff")
{
    const auto dir = scratch("derived");
    run_command("rotdist", {{"count", 3000}, {"ordering", "1 3 7 9"}, {"size", 32}}, dir / "r", {});
    const auto r = read_json(dir / "r" / "rotdist_1-3-7-9.census.json");
    CHECK(r["distance"]["total"] == 2999);
    CHECK(r["distance"]["entries"].size() == 4);

    run_command("absdiff", {{"count", 20000}, {"mod", 8}, {"size", 32}}, dir / "a", {});
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename().string();
        if (name.find(".census.json") == std::string::npos)
            continue;
        const auto c = read_json(entry.path());
        std::set<std::string> empty;
        for (const auto& e : c["kgram"]["empty_addresses"])
            empty.insert(e.get<std::string>());
        CHECK(empty.count("424") == 1);
        CHECK(empty.count("434") == 1);
    }
}

TEST_CASE("twins reports five forbidden pairs")
{
    const auto dir = scratch("twins");
    std::ostringstream pretty;
    run_command("twins", {{"count", 20000}, {"size", 64}}, dir, {0, &pretty});
    const auto c = read_json(dir / "twins.census.json");
    CHECK(c["forbidden"].size() == 5);
    CHECK(c["dropped_pairs"] == 1);
    CHECK(pretty.str().find("forbidden pairs: (3, 3) (7, 1) (7, 3) (7, 7) (9, 3)") != std::string::npos);
}

TEST_CASE("tuple top patterns for sexy centers are the cyclic descents")
{
    const auto dir = scratch("tuple");
    run_command("tuple", {{"count", 300000}, {"depth", 4}, {"size", 64}}, dir, {});
    const auto c = read_json(dir / "tuple_d3.census.json");
    std::set<std::string> top;
    for (const auto& e : c["top"])
        top.insert(e["key"].get<std::string>());
    const std::set<std::string> descents{"(0, 6, 4, 2)", "(2, 0, 6, 4)", "(4, 2, 0, 6)", "(6, 4, 2, 0)"};
    CHECK(top == descents);
    CHECK(c["top_bottom_ratio"].get<double>() > 1.0);

    run_command("tuple", {{"offset", 2}, {"count", 1000}, {"size", 8}}, dir / "even", {});
    CHECK(fs::exists(dir / "even" / "tuple_d2.census.json"));
}

TEST_CASE("gasket output and replay are byte-identical")
{
    const auto dir = scratch("gasket");
    const auto m = run_command("gasket", {{"points", 20000}, {"seed", 7}, {"size", 64}, {"csv", true}},
                               dir / "g.pgm", {});
    CHECK(m.seed == 7u);
    CHECK(m.artifacts == std::vector<std::string>{"g.pgm", "g.csv", "g.census.json", "g.manifest.json"});
    const auto census = read_json(dir / "g.census.json");
    // All 27 gasket cells are hit; the first points may also touch a few
    // cells containing digit 4 before the orbit settles.
    const auto& empty = census["empty_addresses"];
    CHECK(empty.size() <= 64 - 27);
    CHECK(empty.size() >= 64 - 27 - 3);
    for (const auto& a : empty)
        CHECK(a.get<std::string>().find('4') != std::string::npos);

    for (std::size_t workers : {1u, 2u, 8u}) {
        const auto again = dir / ("replay" + std::to_string(workers));
        replay(dir / "g.manifest.json", again, {workers, nullptr});
        for (const auto& name : {"g.pgm", "g.csv", "g.census.json", "g.manifest.json"})
            CHECK(slurp(again / name) == slurp(dir / name));
    }
}

TEST_CASE("directory replay is byte-identical")
{
    const auto dir = scratch("replay_dir");
    const auto m = run_command("twins", {{"count", 5000}, {"size", 32}}, dir / "a", {1, nullptr});
    replay(dir / "a" / "manifest.json", dir / "b", {3, nullptr});
    for (const auto& name : m.artifacts)
        CHECK(slurp(dir / "b" / name) == slurp(dir / "a" / name));
}

TEST_CASE("sigma scan output")
{
    const auto dir = scratch("sigma");
    run_command("sigma-scan", {{"x0_list", "7,1000"}, {"size", 2000}, {"interpretation", "all"}},
                dir / "s.json", {});
    const auto j = read_json(dir / "s.json");
    CHECK(j["rows"].size() == 6);
    CHECK(fs::exists(dir / "s.manifest.json"));
}
