#include "primeifs/census.hpp"

#include "primeifs/error.hpp"
#include "primeifs/workers.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace primeifs {

namespace {

constexpr std::size_t kDenseMaxArity = 10;
constexpr std::size_t kZeroFillMaxArity = 8;

void check_symbols(std::span<const Symbol> s)
{
    for (Symbol x : s)
        if (x < 1 || x > 4)
            throw SymbolOutOfRangeError("symbol " + std::to_string(int(x)) + " outside 1..4");
}

// Counts of windows (s_t, ..., s_{t+k-1}), keyed in stream order.
// Chunks overlap by k - 1 symbols; merged totals do not depend on the worker count.
std::map<CountKey, std::uint64_t> count_windows(std::span<const Symbol> s, std::size_t k,
                                                std::size_t workers)
{
    std::map<CountKey, std::uint64_t> out;
    if (k == 0)
        throw ShortStreamError("window length must be >= 1");
    if (s.size() < k)
        throw ShortStreamError("stream of length " + std::to_string(s.size()) +
                               " is shorter than k=" + std::to_string(k));
    check_symbols(s);
    const std::size_t windows = s.size() - k + 1;

    if (k > kDenseMaxArity) {
        for (std::size_t t = 0; t < windows; ++t)
            ++out[CountKey(s.begin() + t, s.begin() + t + k)];
        return out;
    }

    if (workers == 0)
        workers = default_workers();
    workers = std::max<std::size_t>(1, std::min(workers, windows / 65536 + 1));
    const std::size_t cells = std::size_t{1} << (2 * k);
    const std::size_t mask = cells - 1;
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(cells, 0));

    auto run = [&](std::size_t w) {
        const std::size_t begin = windows * w / workers;
        const std::size_t end = windows * (w + 1) / workers;
        auto& local = partial[w];
        if (begin == end)
            return;
        std::size_t code = 0;
        for (std::size_t i = 0; i + 1 < k; ++i)
            code = (code << 2) | static_cast<std::size_t>(s[begin + i] - 1);
        for (std::size_t t = begin; t < end; ++t) {
            code = ((code << 2) | static_cast<std::size_t>(s[t + k - 1] - 1)) & mask;
            ++local[code];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }
    for (std::size_t w = 1; w < workers; ++w)
        for (std::size_t c = 0; c < cells; ++c)
            partial[0][c] += partial[w][c];

    for (std::size_t c = 0; c < cells; ++c) {
        if (partial[0][c] == 0)
            continue;
        CountKey key(k);
        std::size_t code = c;
        for (std::size_t i = k; i-- > 0;) {
            key[i] = (code & 3) + 1;
            code >>= 2;
        }
        out.emplace(std::move(key), partial[0][c]);
    }
    return out;
}

std::uint64_t sum_counts(const std::map<CountKey, std::uint64_t>& m)
{
    std::uint64_t total = 0;
    for (const auto& [k, v] : m)
        total += v;
    return total;
}

const char* kind_name(KeyKind k)
{
    switch (k) {
    case KeyKind::Address:
        return "Address";
    case KeyKind::ResidueTuple:
        return "ResidueTuple";
    case KeyKind::DistanceClass:
        return "DistanceClass";
    }
    return "?";
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

} // namespace

std::string RangeConvention::describe() const
{
    if (!query)
        return source;
    return source + " " + query->describe();
}

std::uint64_t FrequencyTable::count(const CountKey& key) const
{
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second;
}

std::string FrequencyTable::key_label(const CountKey& key) const
{
    std::string out;
    switch (key_kind) {
    case KeyKind::Address:
        for (auto d : key)
            out += static_cast<char>('0' + d);
        return out;
    case KeyKind::DistanceClass:
        return key.empty() ? out : std::to_string(key[0]);
    case KeyKind::ResidueTuple:
        out = "(";
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (i)
                out += ", ";
            out += std::to_string(key[i]);
        }
        return out + ")";
    }
    return out;
}

std::optional<std::string> FrequencyTable::address_label(const CountKey& key) const
{
    if (key_kind != KeyKind::ResidueTuple || !alphabet)
        return std::nullopt;
    std::string out;
    for (auto it = key.rbegin(); it != key.rend(); ++it) {
        const auto s = alphabet->symbol_of(*it);
        if (!s)
            return std::nullopt;
        out += static_cast<char>('0' + *s);
    }
    return out;
}

FrequencyTable kgram_frequencies(const SymbolStream& s, std::size_t k, std::size_t workers)
{
    FrequencyTable t;
    t.key_kind = KeyKind::Address;
    t.arity = k;
    for (auto& [key, n] : count_windows(s.symbols, k, workers))
        t.entries.emplace(CountKey(key.rbegin(), key.rend()), n);
    t.total = sum_counts(t.entries);
    return t;
}

FrequencyTable residue_tuple_counts(const SymbolStream& s, const ResidueAlphabet& alphabet,
                                    std::size_t k, std::size_t workers)
{
    FrequencyTable t;
    t.key_kind = KeyKind::ResidueTuple;
    t.arity = k;
    t.alphabet = alphabet;
    if (k <= kZeroFillMaxArity) {
        const std::size_t cells = std::size_t{1} << (2 * k);
        for (std::size_t c = 0; c < cells; ++c) {
            CountKey key(k);
            std::size_t code = c;
            for (std::size_t i = k; i-- > 0;) {
                key[i] = alphabet.classes()[code & 3];
                code >>= 2;
            }
            t.entries.emplace(std::move(key), 0);
        }
    }
    for (auto& [key, n] : count_windows(s.symbols, k, workers)) {
        CountKey residues(key.size());
        for (std::size_t i = 0; i < key.size(); ++i)
            residues[i] = alphabet.residue_of(static_cast<Symbol>(key[i]));
        t.entries[residues] = n;
    }
    t.total = sum_counts(t.entries);
    return t;
}

FrequencyTable residue_tuple_counts(std::span<const std::uint64_t> values,
                                    const ResidueAlphabet& alphabet, std::size_t k,
                                    std::size_t workers)
{
    return residue_tuple_counts(symbolize(values, alphabet), alphabet, k, workers);
}

FrequencyTable residue_pair_counts(std::span<const std::uint64_t> values,
                                   const ResidueAlphabet& alphabet, std::size_t workers)
{
    return residue_tuple_counts(values, alphabet, 2, workers);
}

FrequencyTable distance_frequencies(const SymbolStream& s)
{
    if (s.size() < 2)
        throw ShortStreamError("distance census needs at least 2 symbols");
    check_symbols(s.symbols);
    FrequencyTable t;
    t.key_kind = KeyKind::DistanceClass;
    t.arity = 1;
    std::array<std::uint64_t, 4> counts{};
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        ++counts[rot_distance(s.symbols[i + 1], s.symbols[i])];
    for (std::uint64_t d = 0; d < 4; ++d)
        t.entries.emplace(CountKey{d}, counts[d]);
    t.total = s.size() - 1;
    return t;
}

double stddev_of_counts(const FrequencyTable& t)
{
    const std::size_t n = t.entries.size();
    if (n < 2)
        throw DegenerateTableError("standard deviation needs at least 2 keys, table has " +
                                   std::to_string(n));
    double mean = 0;
    for (const auto& [k, v] : t.entries)
        mean += static_cast<double>(v);
    mean /= static_cast<double>(n);
    double ss = 0;
    for (const auto& [k, v] : t.entries) {
        const double d = static_cast<double>(v) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<std::pair<CountKey, std::uint64_t>> sorted_entries(const FrequencyTable& t)
{
    std::vector<std::pair<CountKey, std::uint64_t>> out(t.entries.begin(), t.entries.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

nlohmann::json to_json(const RangeConvention& c)
{
    nlohmann::json j;
    j["source"] = c.source;
    if (c.query) {
        if (c.query->mode == RangeMode::ByValueRange) {
            j["mode"] = "ByValueRange";
            j["lo"] = c.query->lo;
            j["hi"] = c.query->hi;
        } else {
            j["mode"] = "ByCountFrom";
            j["lo"] = c.query->lo;
            j["count"] = c.query->count;
        }
    }
    return j;
}

nlohmann::json to_json(const FrequencyTable& t)
{
    nlohmann::json j;
    j["key_kind"] = kind_name(t.key_kind);
    j["arity"] = t.arity;
    j["convention"] = to_json(t.convention);
    if (t.alphabet)
        j["alphabet"] = t.alphabet->describe();
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, n] : sorted_entries(t)) {
        nlohmann::json e;
        e["key"] = t.key_label(key);
        if (auto addr = t.address_label(key))
            e["address"] = *addr;
        e["count"] = n;
        e["percent"] = t.total == 0 ? 0.0
                                    : round3(100.0 * static_cast<double>(n) /
                                             static_cast<double>(t.total));
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    j["total"] = t.total;
    if (t.entries.size() >= 2)
        j["sigma"] = stddev_of_counts(t);
    else
        j["sigma"] = nullptr;
    return j;
}

std::string to_string(SigmaInterpretation i)
{
    switch (i) {
    case SigmaInterpretation::WindowWidth:
        return "WindowWidth";
    case SigmaInterpretation::PrimeCount:
        return "PrimeCount";
    case SigmaInterpretation::PrimeIndex:
        return "PrimeIndex";
    }
    return "?";
}

std::vector<SigmaScanRow> sigma_scan(std::span<const std::uint64_t> x0_list, std::uint64_t size,
                                     const ResidueAlphabet& alphabet,
                                     SigmaInterpretation interpretation, SieveOptions opts)
{
    if (size == 0)
        throw DegenerateTableError("sigma scan needs a non-empty window");
    std::vector<SigmaScanRow> rows;
    for (std::uint64_t x0 : x0_list) {
        std::vector<std::uint64_t> ps;
        switch (interpretation) {
        case SigmaInterpretation::WindowWidth:
            if (x0 > opts.max_value - size)
                throw_capacity(opts.max_value);
            ps = primes_in_range(x0, x0 + size, opts);
            break;
        case SigmaInterpretation::PrimeCount:
            ps = primes_from_count(x0, size, opts);
            break;
        case SigmaInterpretation::PrimeIndex:
            ps = primes_from_count(nth_prime(x0, opts), size, opts);
            break;
        }
        if (ps.size() < 2)
            throw DegenerateTableError("fewer than 2 primes for x0=" + std::to_string(x0));
        const auto table = residue_pair_counts(ps, alphabet, opts.workers);
        rows.push_back({x0, stddev_of_counts(table), interpretation, ps.front(), ps.size()});
    }
    return rows;
}

nlohmann::json to_json(const SigmaScanRow& row)
{
    return {{"x0", row.x0},
            {"sigma", row.sigma},
            {"interpretation", to_string(row.interpretation)},
            {"first_prime", row.first_prime},
            {"primes_used", row.primes_used}};
}

TwinCensus twin_census(std::span<const TwinPair> pairs, const ResidueAlphabet& alphabet)
{
    TwinCensus c;
    c.concatenated.key_kind = KeyKind::ResidueTuple;
    c.concatenated.arity = 2;
    c.concatenated.alphabet = alphabet;
    c.concatenated.convention.source = "twin_pairs concatenated";
    c.twin_classes = c.concatenated;
    c.twin_classes.convention.source = "twin_pairs";
    for (Residue a : alphabet.classes())
        for (Residue b : alphabet.classes())
            c.concatenated.entries.emplace(CountKey{a, b}, 0);

    const auto& cls = alphabet.classes();
    std::optional<Symbol> prev_second; // second member of the previous kept pair
    for (const auto& pair : pairs) {
        const auto a = alphabet.symbol_of(pair.first);
        const auto b = alphabet.symbol_of(pair.second);
        if (!a || !b) {
            ++c.dropped_pairs;
            prev_second.reset();
            continue;
        }
        const Residue ra = cls[*a - 1];
        const Residue rb = cls[*b - 1];
        if (prev_second)
            ++c.concatenated.entries[CountKey{cls[*prev_second - 1], ra}];
        ++c.concatenated.entries[CountKey{ra, rb}];
        ++c.twin_classes.entries[CountKey{ra, rb}];
        c.concatenated_symbols.symbols.push_back(*a);
        c.concatenated_symbols.symbols.push_back(*b);
        prev_second = b;
    }
    c.concatenated.total = sum_counts(c.concatenated.entries);
    c.twin_classes.total = sum_counts(c.twin_classes.entries);
    for (const auto& [key, n] : c.concatenated.entries)
        if (n == 0)
            c.forbidden.push_back(key);
    c.concatenated_symbols.provenance = "twin_pairs concatenated " + alphabet.describe();
    return c;
}

nlohmann::json to_json(const TwinCensus& c)
{
    nlohmann::json forbidden = nlohmann::json::array();
    for (const auto& key : c.forbidden)
        forbidden.push_back(c.concatenated.key_label(key));
    return {{"concatenated", to_json(c.concatenated)},
            {"twin_classes", to_json(c.twin_classes)},
            {"forbidden", forbidden},
            {"dropped_pairs", c.dropped_pairs}};
}

FrequencyTable tuple_center_census(std::span<const std::uint64_t> centers,
                                   const ResidueAlphabet& alphabet, std::size_t k,
                                   std::size_t workers)
{
    auto t = residue_tuple_counts(centers, alphabet, k, workers);
    t.convention.source = "tuple_centers";
    return t;
}

} // namespace primeifs
