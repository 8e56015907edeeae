// prime_ifs: drive the unit-square IFS with prime residue streams.
#include "primeifs/commands.hpp"
#include "primeifs/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using nlohmann::json;

namespace {

struct Flags {
    std::string out;
    bool pretty = false;
    json params = json::object();
};

template <typename T>
void store(json& params, const char* key, const std::optional<T>& v)
{
    if (v)
        params[key] = *v;
}

struct Common {
    std::optional<std::string> start, count, limit, size, scale, divider, depth, mod, ordering;
    bool csv = false;
};

void add_plot_flags(CLI::App* sub, Common& c)
{
    sub->add_option("--size", c.size, "image size in pixels (imgSize)");
    sub->add_option("--scale", c.scale, "intensity scale: log or linear")
        ->check(CLI::IsMember({"log", "linear"}));
    sub->add_option("--divider", c.divider, "grid divisions burned into the image (0: none)");
    sub->add_flag("--csv", c.csv, "also write the orbit points as CSV");
}

void add_range_flags(CLI::App* sub, Common& c)
{
    sub->add_option("--start", c.start, "first value (primes, pairs or centers >= start)");
    auto* count = sub->add_option("--count", c.count, "number of items (span)");
    auto* limit = sub->add_option("--limit", c.limit, "largest value (instead of --count)");
    count->excludes(limit);
    sub->add_option("--depth", c.depth, "address length for the census");
}

void collect(const Common& c, json& p)
{
    store(p, "start", c.start);
    store(p, "count", c.count);
    store(p, "limit", c.limit);
    store(p, "size", c.size);
    store(p, "scale", c.scale);
    store(p, "divider", c.divider);
    store(p, "depth", c.depth);
    store(p, "mod", c.mod);
    store(p, "ordering", c.ordering);
    if (c.csv)
        p["csv"] = true;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Iterated function systems driven by prime residue streams"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "print human-readable tables");

    std::string out;
    Common common;

    auto* gasket = app.add_subcommand("gasket", "chaos game on the gasket or the filled square");
    std::optional<std::string> system, points, seed;
    gasket->add_option("--system", system, "gasket or square")
        ->check(CLI::IsMember({"gasket", "square"}));
    gasket->add_option("--points", points, "number of points");
    gasket->add_option("--seed", seed, "mt19937_64 seed");
    gasket->add_option("--depth", common.depth, "address length for the cell census");
    gasket->add_option("--out", out, "output PGM path")->required();
    add_plot_flags(gasket, common);

    std::optional<std::string> ordering_help;
    bool skip_third = false;
    std::vector<CLI::App*> driven;
    for (const char* name : {"drive", "rotdist", "absdiff"}) {
        const std::string what = std::string(name) == "drive"
                                     ? "residue-driven IFS plot and address census"
                                     : std::string(name) == "rotdist"
                                           ? "forward rotational distance stream"
                                           : "absolute difference stream";
        auto* sub = app.add_subcommand(name, what);
        sub->add_option("--mod", common.mod, "modulus: 5, 8, 10 or 12");
        sub->add_option("--ordering", common.ordering,
                        "vertex ordering \"a b c d\" (default: every canonical ordering)");
        sub->add_flag("--skip-third", skip_third, "skip the third canonical ordering");
        add_range_flags(sub, common);
        add_plot_flags(sub, common);
        sub->add_option("--out", out, "output directory")->required();
        driven.push_back(sub);
    }

    auto* twins = app.add_subcommand("twins", "twin prime pairs, concatenated residue stream");
    twins->add_option("--mod", common.mod, "modulus (default 10)");
    twins->add_option("--ordering", common.ordering, "vertex ordering (default \"1 3 7 9\")");
    add_range_flags(twins, common);
    add_plot_flags(twins, common);
    twins->add_option("--out", out, "output directory")->required();

    auto* tuple = app.add_subcommand("tuple", "centers n with n - d and n + d prime");
    std::optional<std::string> offset, shift, top;
    tuple->add_option("--offset", offset, "d (1: twin centers, 3: sexy centers)");
    tuple->add_option("--shift", shift, "add a constant to every center before reduction");
    tuple->add_option("--top", top, "size of the top/bottom report");
    tuple->add_option("--mod", common.mod, "modulus (default 8)");
    tuple->add_option("--ordering", common.ordering, "vertex ordering (default by parity of d)");
    add_range_flags(tuple, common);
    add_plot_flags(tuple, common);
    tuple->add_option("--out", out, "output directory")->required();

    auto* sigma = app.add_subcommand("sigma-scan", "standard deviation of pair counts by start value");
    std::optional<std::string> x0_list, interpretation;
    sigma->add_option("--x0-list", x0_list, "comma-separated start values, e.g. 7,1e6,10^7");
    sigma->add_option("--size", common.size, "window width or prime count (default 10^6)");
    sigma->add_option("--mod", common.mod, "modulus (default 10)");
    sigma->add_option("--ordering", common.ordering, "vertex ordering (default \"1 3 7 9\")");
    sigma->add_option("--interpretation", interpretation, "window, count, index, both or all")
        ->check(CLI::IsMember({"window", "count", "index", "both", "all"}));
    sigma->add_option("--out", out, "output JSON path")->required();

    auto* replay = app.add_subcommand("replay", "re-run a manifest");
    std::string manifest;
    replay->add_option("--manifest", manifest, "manifest.json of an earlier run")->required();
    replay->add_option("--out", out, "output directory or path")->required();

    CLI11_PARSE(app, argc, argv);

    primeifs::RunOptions options;
    if (pretty)
        options.pretty = &std::cout;

    try {
        primeifs::RunManifest m;
        if (replay->parsed()) {
            m = primeifs::replay(manifest, out, options);
        } else {
            CLI::App* sub = app.get_subcommands().front();
            const std::string name = sub->get_name();
            json p = json::object();
            collect(common, p);
            if (name == "gasket") {
                store(p, "system", system);
                store(p, "points", points);
                store(p, "seed", seed);
            } else if (name == "tuple") {
                store(p, "offset", offset);
                store(p, "shift", shift);
                store(p, "top", top);
            } else if (name == "sigma-scan") {
                store(p, "x0_list", x0_list);
                store(p, "interpretation", interpretation);
            } else if (name != "twins") {
                p["skip_third"] = skip_third;
            }
            m = primeifs::run_command(name, p, out, options);
        }
        for (const auto& a : m.artifacts)
            std::cerr << "wrote " << a << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
