#include "primeifs/commands.hpp"

#include "primeifs/census.hpp"
#include "primeifs/error.hpp"
#include "primeifs/ifs_engine.hpp"
#include "primeifs/prime_stream.hpp"
#include "primeifs/raster.hpp"
#include "primeifs/residue_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace primeifs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kEmptyListMaxDepth = 6;

bool file_output(const std::string& sub) { return sub == "gasket" || sub == "sigma-scan"; }

void write_file(const fs::path& path, const std::string& bytes)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f)
        throw Error("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t as_count(const json& v)
{
    if (v.is_number_unsigned() || v.is_number_integer()) {
        if (v.is_number_integer() && v.get<std::int64_t>() < 0)
            throw InvalidQueryError("negative count " + v.dump());
        return v.get<std::uint64_t>();
    }
    if (v.is_string())
        return parse_count(v.get<std::string>());
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d < 0 || d != std::floor(d))
            throw InvalidQueryError("not a count: " + v.dump());
        return static_cast<std::uint64_t>(d);
    }
    throw InvalidQueryError("not a count: " + v.dump());
}

void set_default(json& p, const char* key, json value)
{
    if (!p.contains(key) || p[key].is_null())
        p[key] = std::move(value);
}

void normalize_count(json& p, const char* key)
{
    if (p.contains(key) && !p[key].is_null())
        p[key] = as_count(p[key]);
}

IntensityScale scale_of(const json& p)
{
    const auto s = p.at("scale").get<std::string>();
    if (s == "log")
        return IntensityScale::Log;
    if (s == "linear")
        return IntensityScale::Linear;
    throw InvalidQueryError("scale must be log or linear, got \"" + s + "\"");
}

void normalize_plot(json& p, std::uint64_t size)
{
    set_default(p, "size", size);
    set_default(p, "scale", "log");
    set_default(p, "divider", 0);
    set_default(p, "csv", false);
    normalize_count(p, "size");
    normalize_count(p, "divider");
    scale_of(p);
    if (p["size"].get<std::uint64_t>() < 2)
        throw InvalidQueryError("size must be >= 2");
}

// start plus exactly one of count / limit.
void normalize_range(json& p, std::uint64_t start, std::uint64_t count)
{
    set_default(p, "start", start);
    normalize_count(p, "start");
    const bool has_limit = p.contains("limit") && !p["limit"].is_null();
    const bool has_count = p.contains("count") && !p["count"].is_null();
    if (has_limit && has_count)
        throw InvalidQueryError("give either count or limit, not both");
    if (has_limit) {
        normalize_count(p, "limit");
        p["count"] = nullptr;
    } else {
        set_default(p, "count", count);
        normalize_count(p, "count");
        p["limit"] = nullptr;
    }
}

PrimeRangeQuery query_of(const json& p)
{
    const auto start = p.at("start").get<std::uint64_t>();
    if (!p.at("limit").is_null())
        return PrimeRangeQuery::by_value(start, p.at("limit").get<std::uint64_t>());
    return PrimeRangeQuery::by_count(start, p.at("count").get<std::uint64_t>());
}

void require_driving_modulus(std::uint64_t q)
{
    if (q != 5 && q != 8 && q != 10 && q != 12)
        throw InvalidModulusError("Please choose modulus 5, 8, 10, or 12 (got " +
                                  std::to_string(q) + ")");
}

std::string tag_of(const Ordering& o)
{
    std::string out;
    for (std::size_t i = 0; i < o.size(); ++i)
        out += (i ? "-" : "") + std::to_string(o[i]);
    return out;
}

json table_json(const FrequencyTable& t)
{
    json j = to_json(t);
    if (t.key_kind == KeyKind::Address && t.arity <= kEmptyListMaxDepth) {
        json empty = json::array();
        const std::size_t cells = std::size_t{1} << (2 * t.arity);
        for (std::size_t c = 0; c < cells; ++c) {
            CountKey key(t.arity);
            std::size_t code = c;
            for (std::size_t i = t.arity; i-- > 0;) {
                key[i] = (code & 3) + 1;
                code >>= 2;
            }
            if (t.count(key) == 0)
                empty.push_back(t.key_label(key));
        }
        j["empty_addresses"] = std::move(empty);
    }
    return j;
}

void print_table(std::ostream& os, const std::string& title, const FrequencyTable& t)
{
    os << title << " (" << t.convention.describe() << ", total " << t.total << ")\n";
    for (const auto& [key, n] : sorted_entries(t)) {
        os << "  " << std::setw(16) << std::left << t.key_label(key);
        if (auto a = t.address_label(key))
            os << std::setw(8) << *a;
        const double pct = t.total ? 100.0 * static_cast<double>(n) / static_cast<double>(t.total) : 0.0;
        os << std::right << std::setw(12) << n << std::setw(10) << std::fixed
           << std::setprecision(3) << pct << "\n";
    }
    if (t.entries.size() >= 2)
        os << "  sigma " << std::setprecision(2) << stddev_of_counts(t) << "\n";
    os.unsetf(std::ios::floatfield);
}

class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& bytes)
    {
        write_file(dir_ / name, bytes);
        names_.push_back(name);
    }

    // Orbit of `symbols` on the square system, rendered per the plot flags.
    void plot(const std::string& stem, std::span<const Symbol> symbols, const json& p,
              std::size_t workers)
    {
        const auto orbit = driven_orbit(symbols, standard_square_system());
        plot_points(stem, orbit, p, workers);
    }

    void plot_points(const std::string& stem, std::span<const Point2d> points, const json& p,
                     std::size_t workers)
    {
        const auto grid = accumulate(points, p.at("size").get<std::size_t>(), workers);
        auto image = render(grid, scale_of(p));
        burn_gridlines(image, p.at("divider").get<std::size_t>());
        write(stem + ".pgm", encode_pgm(image));
        if (p.at("csv").get<bool>())
            write(stem + ".csv", write_points_csv(points));
    }

    std::vector<std::string> names() && { return std::move(names_); }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

RunManifest run_gasket(const json& p, const fs::path& out, const RunOptions& opt)
{
    const auto system_name = p.at("system").get<std::string>();
    const auto sys = system_name == "square" ? standard_square_system() : gasket_system();
    const Point2d start(p.at("start").at(0).get<double>(), p.at("start").at(1).get<double>());
    const auto seed = p.at("seed").get<std::uint64_t>();
    const auto points = chaos_game(sys, p.at("points").get<std::size_t>(), seed, start);

    const auto depth = p.at("depth").get<std::size_t>();
    FrequencyTable cells;
    cells.key_kind = KeyKind::Address;
    cells.arity = depth;
    cells.convention.source = "chaos_game " + system_name;
    for (const auto& pt : points) {
        const auto a = address_of_point(pt, depth);
        ++cells.entries[CountKey(a.digits().begin(), a.digits().end())];
    }
    cells.total = points.size();

    const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    const std::string stem = out.stem().string();
    Artifacts art(dir);
    art.plot_points(stem, points, p, opt.workers);
    art.write(stem + ".census.json", dump(table_json(cells)));
    if (opt.pretty)
        print_table(*opt.pretty, "gasket address census", cells);

    RunManifest m;
    m.subcommand = "gasket";
    m.parameters = p;
    m.convention = to_json(cells.convention);
    m.seed = seed;
    m.artifacts = std::move(art).names();
    return m;
}

RunManifest run_driven(const std::string& sub, const json& p, const fs::path& out,
                       const RunOptions& opt)
{
    const auto q = p.at("mod").get<std::uint64_t>();
    std::vector<Ordering> orderings;
    if (p.at("ordering").is_null()) {
        orderings = canonical_orderings(q);
        if (p.at("skip_third").get<bool>())
            orderings.pop_back();
    } else {
        orderings.push_back(parse_ordering(p.at("ordering").get<std::string>()));
    }
    const auto query = query_of(p);
    const auto values = primes(query, SieveOptions{opt.workers});
    const RangeConvention convention{"primes", query};
    const auto depth = p.at("depth").get<std::size_t>();

    fs::create_directories(out);
    Artifacts art(out);
    for (const auto& ordering : orderings) {
        const ResidueAlphabet alphabet(q, ordering);
        if (!alphabet.reduced())
            throw InvalidModulusError("ordering [" + format_ordering(ordering) +
                                      "] is not the reduced residue system mod " +
                                      std::to_string(q));
        const auto symbols = symbolize(values, alphabet);
        SymbolStream stream = symbols;
        if (sub == "rotdist")
            stream = rot_distance_stream(symbols);
        else if (sub == "absdiff")
            stream = abs_diff_stream(symbols);

        auto kgram = kgram_frequencies(stream, depth, opt.workers);
        kgram.convention = convention;
        json census{{"ordering", format_ordering(ordering)},
                    {"alphabet", alphabet.describe()},
                    {"stream", stream.provenance},
                    {"stream_length", stream.size()},
                    {"kgram", table_json(kgram)}};
        if (sub == "drive") {
            auto pairs = residue_tuple_counts(symbols, alphabet, 2, opt.workers);
            pairs.convention = convention;
            census["pairs"] = to_json(pairs);
            if (opt.pretty)
                print_table(*opt.pretty, "pairs " + alphabet.describe(), pairs);
        }
        if (sub == "rotdist") {
            auto dist = distance_frequencies(symbols);
            dist.convention = convention;
            census["distance"] = to_json(dist);
            if (opt.pretty)
                print_table(*opt.pretty, "rotational distance " + alphabet.describe(), dist);
        }
        if (opt.pretty)
            print_table(*opt.pretty, sub + " depth-" + std::to_string(depth) + " addresses", kgram);

        const std::string stem = sub + "_" + tag_of(ordering);
        art.plot(stem, stream.symbols, p, opt.workers);
        art.write(stem + ".census.json", dump(census));
    }

    RunManifest m;
    m.subcommand = sub;
    m.parameters = p;
    m.convention = to_json(convention);
    m.artifacts = std::move(art).names();
    return m;
}

RunManifest run_twins(const json& p, const fs::path& out, const RunOptions& opt)
{
    const ResidueAlphabet alphabet(p.at("mod").get<std::uint64_t>(),
                                   parse_ordering(p.at("ordering").get<std::string>()));
    const auto query = query_of(p);
    const auto pairs = twin_pairs(query, SieveOptions{opt.workers});
    auto census = twin_census(pairs, alphabet);
    const RangeConvention convention{"twin_pairs", query};
    census.concatenated.convention = convention;
    census.twin_classes.convention = convention;

    const auto depth = p.at("depth").get<std::size_t>();
    json j = to_json(census);
    j["alphabet"] = alphabet.describe();
    if (census.concatenated_symbols.size() >= depth) {
        auto kgram = kgram_frequencies(census.concatenated_symbols, depth, opt.workers);
        kgram.convention = convention;
        j["kgram"] = table_json(kgram);
    }
    if (opt.pretty) {
        print_table(*opt.pretty, "concatenated twin stream", census.concatenated);
        print_table(*opt.pretty, "twin classes", census.twin_classes);
        *opt.pretty << "forbidden pairs:";
        for (const auto& k : census.forbidden)
            *opt.pretty << " " << census.concatenated.key_label(k);
        *opt.pretty << "\n";
    }

    fs::create_directories(out);
    Artifacts art(out);
    art.plot("twins", census.concatenated_symbols.symbols, p, opt.workers);
    art.write("twins.census.json", dump(j));

    RunManifest m;
    m.subcommand = "twins";
    m.parameters = p;
    m.convention = to_json(convention);
    m.artifacts = std::move(art).names();
    return m;
}

RunManifest run_tuple(const json& p, const fs::path& out, const RunOptions& opt)
{
    const auto d = p.at("offset").get<std::uint64_t>();
    const ResidueAlphabet alphabet(p.at("mod").get<std::uint64_t>(),
                                   parse_ordering(p.at("ordering").get<std::string>()));
    const auto query = query_of(p);
    auto centers = tuple_centers(TupleCenterQuery{d, query}, SieveOptions{opt.workers});
    const auto shift = p.at("shift").get<std::uint64_t>();
    for (auto& n : centers)
        n += shift;

    const auto depth = p.at("depth").get<std::size_t>();
    auto table = tuple_center_census(centers, alphabet, depth, opt.workers);
    const RangeConvention convention{"tuple_centers(d=" + std::to_string(d) + ")", query};
    table.convention = convention;

    const auto sorted = sorted_entries(table);
    const auto top_n = std::min<std::size_t>(p.at("top").get<std::size_t>(), sorted.size());
    json top = json::array(), bottom = json::array();
    for (std::size_t i = 0; i < top_n; ++i) {
        const auto& hi = sorted[sorted.size() - 1 - i];
        const auto& lo = sorted[i];
        top.push_back({{"key", table.key_label(hi.first)},
                       {"address", table.address_label(hi.first).value_or("")},
                       {"count", hi.second}});
        bottom.push_back({{"key", table.key_label(lo.first)},
                          {"address", table.address_label(lo.first).value_or("")},
                          {"count", lo.second}});
    }
    json j{{"offset", d},
           {"shift", shift},
           {"alphabet", alphabet.describe()},
           {"centers", centers.size()},
           {"table", to_json(table)},
           {"top", top},
           {"bottom", bottom}};
    if (!sorted.empty() && sorted.front().second > 0)
        j["top_bottom_ratio"] = static_cast<double>(sorted.back().second) /
                                static_cast<double>(sorted.front().second);
    else
        j["top_bottom_ratio"] = nullptr;
    if (opt.pretty)
        print_table(*opt.pretty, "tuple centers d=" + std::to_string(d), table);

    fs::create_directories(out);
    Artifacts art(out);
    const std::string stem = "tuple_d" + std::to_string(d);
    art.plot(stem, symbolize(centers, alphabet).symbols, p, opt.workers);
    art.write(stem + ".census.json", dump(j));

    RunManifest m;
    m.subcommand = "tuple";
    m.parameters = p;
    m.convention = to_json(convention);
    m.artifacts = std::move(art).names();
    return m;
}

RunManifest run_sigma_scan(const json& p, const fs::path& out, const RunOptions& opt)
{
    const ResidueAlphabet alphabet(p.at("mod").get<std::uint64_t>(),
                                   parse_ordering(p.at("ordering").get<std::string>()));
    const auto which = p.at("interpretation").get<std::string>();
    std::vector<SigmaInterpretation> interps;
    if (which == "window" || which == "both" || which == "all")
        interps.push_back(SigmaInterpretation::WindowWidth);
    if (which == "count" || which == "both" || which == "all")
        interps.push_back(SigmaInterpretation::PrimeCount);
    if (which == "index" || which == "all")
        interps.push_back(SigmaInterpretation::PrimeIndex);

    const auto x0s = p.at("x0_list").get<std::vector<std::uint64_t>>();
    const auto size = p.at("size").get<std::uint64_t>();
    json rows = json::array();
    for (auto interp : interps)
        for (const auto& row : sigma_scan(x0s, size, alphabet, interp, SieveOptions{opt.workers})) {
            rows.push_back(to_json(row));
            if (opt.pretty)
                *opt.pretty << std::setw(14) << to_string(interp) << std::setw(16) << row.x0
                            << std::setw(14) << std::fixed << std::setprecision(2) << row.sigma
                            << "\n";
        }
    json j{{"alphabet", alphabet.describe()}, {"size", size}, {"rows", rows}};

    const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    Artifacts art(dir);
    art.write(out.filename().string(), dump(j));

    RunManifest m;
    m.subcommand = "sigma-scan";
    m.parameters = p;
    m.convention = {{"source", "primes"}, {"interpretation", which}, {"size", size}};
    m.artifacts = std::move(art).names();
    return m;
}

} // namespace

nlohmann::json RunManifest::to_json() const
{
    json j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["convention"] = convention;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["rng"] = kRngAlgorithm;
    j["artifacts"] = artifacts;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j)
{
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.parameters = j.at("parameters");
    m.convention = j.value("convention", json::object());
    if (j.contains("seed") && !j["seed"].is_null())
        m.seed = j["seed"].get<std::uint64_t>();
    m.artifacts = j.value("artifacts", std::vector<std::string>{});
    return m;
}

const std::vector<std::string>& subcommand_names()
{
    static const std::vector<std::string> names{"gasket", "drive",  "rotdist",   "absdiff",
                                                "twins",  "tuple", "sigma-scan"};
    return names;
}

json normalize_parameters(const std::string& sub, json p)
{
    if (p.is_null())
        p = json::object();
    if (!p.is_object())
        throw InvalidQueryError("parameters must be a JSON object");

    if (sub == "gasket") {
        set_default(p, "system", "gasket");
        const auto system = p["system"].get<std::string>();
        if (system != "gasket" && system != "square")
            throw InvalidQueryError("system must be gasket or square");
        set_default(p, "points", 100000);
        set_default(p, "seed", 1);
        set_default(p, "depth", 3);
        set_default(p, "start", json::array({0.5, 0.5}));
        normalize_count(p, "points");
        normalize_count(p, "seed");
        normalize_count(p, "depth");
        normalize_plot(p, 256);
    } else if (sub == "drive" || sub == "rotdist" || sub == "absdiff") {
        set_default(p, "mod", 10);
        normalize_count(p, "mod");
        require_driving_modulus(p["mod"].get<std::uint64_t>());
        set_default(p, "ordering", nullptr);
        set_default(p, "skip_third", false);
        set_default(p, "depth", 3);
        normalize_count(p, "depth");
        normalize_range(p, 7, 100000);
        normalize_plot(p, 512);
    } else if (sub == "twins") {
        set_default(p, "mod", 10);
        set_default(p, "ordering", "1 3 7 9");
        set_default(p, "depth", 2);
        normalize_count(p, "mod");
        normalize_count(p, "depth");
        normalize_range(p, 5, 10000);
        normalize_plot(p, 512);
    } else if (sub == "tuple") {
        set_default(p, "offset", 3);
        normalize_count(p, "offset");
        const auto d = p["offset"].get<std::uint64_t>();
        if (d == 0)
            throw InvalidQueryError("offset must be >= 1");
        set_default(p, "mod", 8);
        normalize_count(p, "mod");
        // Odd offsets give even centers, even offsets odd ones.
        set_default(p, "ordering", d % 2 == 1 ? "0 2 4 6" : "1 3 5 7");
        set_default(p, "depth", 2);
        set_default(p, "shift", 0);
        set_default(p, "top", 4);
        normalize_count(p, "depth");
        normalize_count(p, "shift");
        normalize_count(p, "top");
        normalize_range(p, 0, 100000);
        normalize_plot(p, 512);
    } else if (sub == "sigma-scan") {
        set_default(p, "x0_list", json::array({7, 1000000, 10000000, 100000000, 1000000000}));
        if (p["x0_list"].is_string())
            p["x0_list"] = parse_count_list(p["x0_list"].get<std::string>());
        for (auto& v : p["x0_list"])
            v = as_count(v);
        set_default(p, "size", 1000000);
        normalize_count(p, "size");
        set_default(p, "mod", 10);
        normalize_count(p, "mod");
        set_default(p, "ordering", "1 3 7 9");
        set_default(p, "interpretation", "count");
        const auto i = p["interpretation"].get<std::string>();
        if (i != "window" && i != "count" && i != "index" && i != "both" && i != "all")
            throw InvalidQueryError("interpretation must be window, count, index, both or all");
    } else {
        throw InvalidQueryError("unknown subcommand \"" + sub + "\"");
    }
    if (p.contains("depth") && p["depth"].get<std::uint64_t>() == 0)
        throw InvalidQueryError("depth must be >= 1");
    return p;
}

fs::path manifest_path_for(const std::string& sub, const fs::path& out)
{
    if (file_output(sub)) {
        fs::path m = out;
        m.replace_extension(".manifest.json");
        return m;
    }
    return out / "manifest.json";
}

RunManifest run_command(const std::string& sub, const json& parameters, const fs::path& out,
                        const RunOptions& options)
{
    const json p = normalize_parameters(sub, parameters);
    if (file_output(sub) && out.has_parent_path())
        fs::create_directories(out.parent_path());

    RunManifest m;
    if (sub == "gasket")
        m = run_gasket(p, out, options);
    else if (sub == "twins")
        m = run_twins(p, out, options);
    else if (sub == "tuple")
        m = run_tuple(p, out, options);
    else if (sub == "sigma-scan")
        m = run_sigma_scan(p, out, options);
    else
        m = run_driven(sub, p, out, options);

    const fs::path mp = manifest_path_for(sub, out);
    m.artifacts.push_back(mp.filename().string());
    write_file(mp, dump(m.to_json()));
    return m;
}

RunManifest replay(const fs::path& manifest_path, const fs::path& out, const RunOptions& options)
{
    std::ifstream in(manifest_path);
    if (!in)
        throw Error("cannot read manifest " + manifest_path.string());
    const auto m = RunManifest::from_json(json::parse(in));
    fs::path target = out;
    if (file_output(m.subcommand) && (fs::is_directory(out) || !out.has_extension())) {
        fs::create_directories(out);
        target = out / (m.artifacts.empty() ? fs::path("output") : fs::path(m.artifacts.front()));
    }
    return run_command(m.subcommand, m.parameters, target, options);
}

std::uint64_t parse_count(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (c != '_' && c != ',' && c != ' ')
            t += c;
    if (t.empty())
        throw InvalidQueryError("empty count");
    const auto bad = [&] { return InvalidQueryError("not a non-negative integer: \"" + text + "\""); };
    auto parse_plain = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw bad();
        return std::stoull(s);
    };
    auto pow10 = [&](std::uint64_t base, std::uint64_t exp) {
        std::uint64_t r = base;
        for (std::uint64_t i = 0; i < exp; ++i) {
            if (r > UINT64_MAX / 10)
                throw bad();
            r *= 10;
        }
        return r;
    };
    if (auto caret = t.find('^'); caret != std::string::npos) {
        if (t.substr(0, caret) != "10")
            throw bad();
        return pow10(1, parse_plain(t.substr(caret + 1)));
    }
    if (auto e = t.find_first_of("eE"); e != std::string::npos)
        return pow10(parse_plain(t.substr(0, e)), parse_plain(t.substr(e + 1)));
    return parse_plain(t);
}

std::vector<std::uint64_t> parse_count_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::string tok;
    while (in >> tok)
        out.push_back(parse_count(tok));
    if (out.empty())
        throw InvalidQueryError("empty list");
    return out;
}

} // namespace primeifs
