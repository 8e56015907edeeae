#include "primeifs/prime_stream.hpp"

#include "primeifs/error.hpp"
#include "primeifs/workers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

namespace primeifs {

namespace {

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

// Odd primes <= limit.
std::vector<std::uint32_t> small_odd_primes(std::uint64_t limit)
{
    std::vector<std::uint32_t> out;
    if (limit < 3)
        return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 3; i * i <= limit; i += 2)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= limit; j += 2 * i)
                composite[j] = true;
    for (std::uint64_t i = 3; i <= limit; i += 2)
        if (!composite[i])
            out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

// Sieves [low, high) with low even; appends primes in ascending order.
void sieve_segment(std::uint64_t low, std::uint64_t high,
                   std::span<const std::uint32_t> base, std::vector<std::uint64_t>& out)
{
    out.clear();
    if (high <= low)
        return;
    if (low <= 2 && 2 < high)
        out.push_back(2);
    const std::uint64_t odd_count = (high - low) / 2;
    std::vector<std::uint8_t> composite(odd_count, 0);
    for (std::uint32_t bp : base) {
        const std::uint64_t p = bp;
        if (p * p >= high)
            break;
        std::uint64_t m = std::max(p * p, (low + p - 1) / p * p);
        if (m % 2 == 0)
            m += p;
        for (std::uint64_t i = (m - low - 1) / 2; i < odd_count; i += p)
            composite[i] = 1;
    }
    for (std::uint64_t i = 0; i < odd_count; ++i) {
        const std::uint64_t v = low + 2 * i + 1;
        if (!composite[i] && v > 1)
            out.push_back(v);
    }
}

} // namespace

void throw_capacity(std::uint64_t bound)
{
    throw CapacityError("sieve bound " + std::to_string(bound) + " exceeded");
}

PrimeRangeQuery PrimeRangeQuery::by_value(std::uint64_t lo, std::uint64_t hi)
{
    PrimeRangeQuery q{RangeMode::ByValueRange, lo, hi, 0};
    q.validate();
    return q;
}

PrimeRangeQuery PrimeRangeQuery::by_count(std::uint64_t lo, std::uint64_t count)
{
    return PrimeRangeQuery{RangeMode::ByCountFrom, lo, 0, count};
}

void PrimeRangeQuery::validate() const
{
    if (mode == RangeMode::ByValueRange && lo > hi)
        throw InvalidQueryError("range query requires lo <= hi (lo=" + std::to_string(lo) +
                                ", hi=" + std::to_string(hi) + ")");
}

std::string PrimeRangeQuery::describe() const
{
    if (mode == RangeMode::ByValueRange)
        return "ByValueRange[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    return "ByCountFrom(" + std::to_string(count) + " from " + std::to_string(lo) + ")";
}

PrimeCursor::PrimeCursor(std::uint64_t start, SieveOptions opts)
    : start_(start), next_low_(start - start % 2), opts_(opts)
{
    if (opts_.workers == 0)
        opts_.workers = default_workers();
    if (start_ > opts_.max_value)
        throw_capacity(opts_.max_value);
}

void PrimeCursor::ensure_base_primes(std::uint64_t hi)
{
    const std::uint64_t need = isqrt(hi) + 1;
    if (need <= base_limit_)
        return;
    // Grow geometrically so long scans do not re-sieve the base every batch.
    base_limit_ = std::max(need, base_limit_ * 2);
    base_primes_ = small_odd_primes(base_limit_);
}

std::span<const std::uint64_t> PrimeCursor::next_batch()
{
    batch_.clear();
    while (batch_.empty() && !exhausted()) {
        const std::uint64_t limit = opts_.max_value + 1; // exclusive
        const std::size_t workers = opts_.workers;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
        std::uint64_t low = next_low_;
        for (std::size_t w = 0; w < workers && low < limit; ++w) {
            const std::uint64_t high = std::min(limit + (limit % 2), low + kSegmentSpan);
            spans.emplace_back(low, high);
            low = high;
        }
        next_low_ = low;
        ensure_base_primes(spans.back().second);
        shards_.resize(spans.size());

        const std::span<const std::uint32_t> base(base_primes_);
        if (spans.size() == 1) {
            sieve_segment(spans[0].first, spans[0].second, base, shards_[0]);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(spans.size());
            for (std::size_t i = 0; i < spans.size(); ++i)
                pool.emplace_back([&, i] {
                    sieve_segment(spans[i].first, spans[i].second, base, shards_[i]);
                });
        }
        for (const auto& shard : shards_)
            for (std::uint64_t p : shard)
                if (p >= start_ && p <= opts_.max_value)
                    batch_.push_back(p);
    }
    return batch_;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi, SieveOptions opts)
{
    PrimeRangeQuery::by_value(lo, hi);
    if (hi > opts.max_value)
        throw_capacity(opts.max_value);
    std::vector<std::uint64_t> out;
    PrimeCursor cursor(lo, opts);
    for (;;) {
        auto batch = cursor.next_batch();
        if (batch.empty())
            break;
        for (std::uint64_t p : batch) {
            if (p > hi)
                return out;
            out.push_back(p);
        }
    }
    return out;
}

std::vector<std::uint64_t> primes_from_count(std::uint64_t start_value, std::uint64_t count,
                                             SieveOptions opts)
{
    std::vector<std::uint64_t> out;
    if (count == 0)
        return out;
    out.reserve(count);
    for_each_prime(
        start_value,
        [&](std::uint64_t p) {
            out.push_back(p);
            return out.size() < count;
        },
        opts);
    return out;
}

std::vector<std::uint64_t> primes(const PrimeRangeQuery& query, SieveOptions opts)
{
    query.validate();
    if (query.mode == RangeMode::ByValueRange)
        return primes_in_range(query.lo, query.hi, opts);
    return primes_from_count(query.lo, query.count, opts);
}

std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, SieveOptions opts)
{
    PrimeRangeQuery::by_value(lo, hi);
    if (hi > opts.max_value)
        throw_capacity(opts.max_value);
    std::uint64_t n = 0;
    PrimeCursor cursor(lo, opts);
    for (;;) {
        auto batch = cursor.next_batch();
        if (batch.empty())
            return n;
        if (batch.back() <= hi) {
            n += batch.size();
            continue;
        }
        n += static_cast<std::uint64_t>(
            std::upper_bound(batch.begin(), batch.end(), hi) - batch.begin());
        return n;
    }
}

std::uint64_t nth_prime(std::uint64_t index, SieveOptions opts)
{
    if (index == 0)
        throw InvalidQueryError("prime index is 1-based");
    std::uint64_t seen = 0;
    PrimeCursor cursor(2, opts);
    for (;;) {
        auto batch = cursor.next_batch();
        if (batch.empty())
            throw_capacity(opts.max_value);
        if (seen + batch.size() >= index)
            return batch[index - seen - 1];
        seen += batch.size();
    }
}

std::vector<TwinPair> twin_pairs(const PrimeRangeQuery& query, SieveOptions opts)
{
    query.validate();
    std::vector<TwinPair> out;
    if (query.mode == RangeMode::ByValueRange) {
        const auto ps = primes_in_range(query.lo, query.hi, opts);
        for (std::size_t i = 1; i < ps.size(); ++i)
            if (ps[i] - ps[i - 1] == 2)
                out.push_back({ps[i - 1], ps[i]});
        return out;
    }
    if (query.count == 0)
        return out;
    std::uint64_t prev = 0;
    for_each_prime(
        query.lo,
        [&](std::uint64_t p) {
            if (prev != 0 && p - prev == 2)
                out.push_back({prev, p});
            prev = p;
            return out.size() < query.count;
        },
        opts);
    return out;
}

std::vector<std::uint64_t> tuple_centers(const TupleCenterQuery& query, SieveOptions opts)
{
    if (query.offset == 0)
        throw InvalidQueryError("tuple offset must be >= 1");
    const auto& q = query.centers;
    q.validate();
    const std::uint64_t d = query.offset;
    const std::uint64_t gap = 2 * d;
    std::vector<std::uint64_t> out;
    if (q.mode == RangeMode::ByCountFrom && q.count == 0)
        return out;
    if (q.mode == RangeMode::ByValueRange && q.hi + d > opts.max_value)
        throw_capacity(opts.max_value);

    const std::uint64_t first = q.lo > d ? q.lo - d : 2;
    std::deque<std::uint64_t> window; // primes in [p - 2d, p)
    bool done = false;
    PrimeCursor cursor(first, opts);
    while (!done) {
        auto batch = cursor.next_batch();
        if (batch.empty()) {
            if (q.mode == RangeMode::ByCountFrom)
                throw_capacity(opts.max_value);
            break;
        }
        for (std::uint64_t p : batch) {
            if (q.mode == RangeMode::ByValueRange && p > q.hi + d) {
                done = true;
                break;
            }
            while (!window.empty() && window.front() + gap < p)
                window.pop_front();
            if (!window.empty() && window.front() + gap == p) {
                const std::uint64_t n = p - d;
                if (n >= q.lo) {
                    out.push_back(n);
                    if (q.mode == RangeMode::ByCountFrom && out.size() == q.count) {
                        done = true;
                        break;
                    }
                }
            }
            window.push_back(p);
        }
    }
    return out;
}

} // namespace primeifs
