#include "kfree/sieves.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <thread>

#include "kfree/errors.hpp"

namespace kfree {

namespace {

constexpr u64 kPrimeLimitMax = u64{1} << 32;
constexpr u64 kRangeMax = u64{1} << 62; // keeps stride arithmetic wrap-free

void write_u64_le(std::ostream& os, u64 v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

u64 read_u64_le(std::istream& is) {
    std::uint8_t b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
    return v;
}

// Clears the k-free bit of every multiple of p^k in [seg_lo, seg_hi].
// Bit index is n - base; bytes must cover the segment.
void strike_segment(std::uint8_t* bytes, u64 base, u64 seg_lo, u64 seg_hi,
                    std::span<const u64> strike_primes, int k) {
    for (u64 p : strike_primes) {
        u64 q = checked_pow(p, k);
        if (q > seg_hi) break; // primes ascending, q only grows
        u64 start = ((seg_lo + q - 1) / q) * q;
        if (start < q) start = q;
        for (u64 m = start; m <= seg_hi; m += q) {
            u64 idx = m - base;
            bytes[idx >> 3] &= static_cast<std::uint8_t>(~(1u << (idx & 7)));
        }
    }
}

std::vector<u64> strike_primes_for(u64 hi, int k) {
    u64 root = nth_root_floor(hi, k);
    if (root < 2) return {};
    return primes_up_to(root).primes();
}

} // namespace

u64 PrimeTable::count_up_to(u64 x) const {
    if (x > limit_) throw std::out_of_range("PrimeTable::count_up_to beyond table limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
    return static_cast<u64>(it - primes_.begin());
}

PrimeTable primes_up_to(u64 limit) {
    if (limit < 2) throw std::invalid_argument("primes_up_to: limit must be >= 2");
    if (limit > kPrimeLimitMax) throw budget_error("primes_up_to limit", limit, kPrimeLimitMax);

    std::vector<u64> composite((limit >> 6) + 1, 0);
    auto mark = [&](u64 n) { composite[n >> 6] |= u64{1} << (n & 63); };
    auto is_composite = [&](u64 n) { return (composite[n >> 6] >> (n & 63)) & 1; };

    for (u64 i = 2; i * i <= limit; ++i)
        if (!is_composite(i))
            for (u64 j = i * i; j <= limit; j += i) mark(j);

    PrimeTable t;
    t.limit_ = limit;
    for (u64 i = 2; i <= limit; ++i)
        if (!is_composite(i)) t.primes_.push_back(i);
    return t;
}

MobiusTable mobius_up_to(u64 limit) {
    if (limit < 1) throw std::invalid_argument("mobius_up_to: limit must be >= 1");
    MobiusTable t;
    t.limit_ = limit;
    t.values_.assign(limit + 1, 0);
    t.values_[1] = 1;

    std::vector<u64> primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            t.values_[i] = -1;
        }
        for (u64 p : primes) {
            if (p > limit / i) break;
            composite[p * i] = true;
            if (i % p == 0) {
                t.values_[p * i] = 0;
                break;
            }
            t.values_[p * i] = static_cast<std::int8_t>(-t.values_[i]);
        }
    }
    return t;
}

KfreeTable::KfreeTable(u64 lo, u64 hi, int k, std::vector<std::uint8_t> bits)
    : lo_(lo), hi_(hi), k_(k), bits_(std::move(bits)) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("KfreeTable: need 1 <= lo <= hi");
    if (k < 2) throw std::invalid_argument("KfreeTable: k must be >= 2");
    if (bits_.size() != (hi - lo + 1 + 7) / 8)
        throw std::invalid_argument("KfreeTable: payload size mismatch");
}

u64 KfreeTable::count_set() const {
    u64 total = 0;
    for (std::uint8_t b : bits_) total += static_cast<u64>(std::popcount(b));
    return total;
}

void KfreeTable::save(const std::filesystem::path& file) const {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("KfreeTable::save: cannot open " + file.string());
    os.write("KFSV", 4);
    std::uint8_t version = 1, kk = static_cast<std::uint8_t>(k_);
    os.write(reinterpret_cast<const char*>(&version), 1);
    os.write(reinterpret_cast<const char*>(&kk), 1);
    write_u64_le(os, lo_);
    write_u64_le(os, hi_);
    os.write(reinterpret_cast<const char*>(bits_.data()),
             static_cast<std::streamsize>(bits_.size()));
    if (!os) throw std::runtime_error("KfreeTable::save: write failed: " + file.string());
}

KfreeTable KfreeTable::load(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("KfreeTable::load: cannot open " + file.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "KFSV", 4) != 0)
        throw std::runtime_error("KfreeTable::load: bad magic in " + file.string());
    std::uint8_t version = 0, kk = 0;
    is.read(reinterpret_cast<char*>(&version), 1);
    is.read(reinterpret_cast<char*>(&kk), 1);
    if (version != 1)
        throw std::runtime_error("KfreeTable::load: unsupported version in " + file.string());
    u64 lo = read_u64_le(is), hi = read_u64_le(is);
    if (!is || lo < 1 || lo > hi || kk < 2)
        throw std::runtime_error("KfreeTable::load: bad header in " + file.string());
    std::vector<std::uint8_t> bits((hi - lo + 1 + 7) / 8);
    is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
    if (!is) throw std::runtime_error("KfreeTable::load: truncated payload in " + file.string());
    return KfreeTable(lo, hi, kk, std::move(bits));
}

KfreeTable kfree_flags(u64 lo, u64 hi, int k, const SieveOptions& opts) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("kfree_flags: need 1 <= lo <= hi");
    if (k < 2) throw std::invalid_argument("kfree_flags: k must be >= 2");
    if (hi > kRangeMax) throw budget_error("kfree_flags hi", hi, kRangeMax);
    const u64 entries = hi - lo + 1;
    if (entries > opts.max_entries)
        throw budget_error("kfree_flags entries (use kfree_flags_stream for larger ranges)",
                           entries, opts.max_entries);

    const u64 width = std::max<u64>(64, (opts.segment_width + 63) & ~u64{63});
    std::vector<std::uint8_t> bits((entries + 7) / 8, 0xFF);
    // mask tail bits beyond hi so the payload is bit-exact
    if (entries % 8 != 0) bits.back() = static_cast<std::uint8_t>((1u << (entries % 8)) - 1);

    const auto primes = strike_primes_for(hi, k);
    const u64 num_segments = (entries + width - 1) / width;

    auto work = [&](std::atomic<u64>& next) {
        for (u64 s = next.fetch_add(1); s < num_segments; s = next.fetch_add(1)) {
            u64 seg_lo = lo + s * width;
            u64 seg_hi = std::min(hi, seg_lo + width - 1);
            strike_segment(bits.data(), lo, seg_lo, seg_hi, primes, k);
        }
    };

    unsigned threads = std::max(1u, opts.threads);
    if (threads == 1 || num_segments == 1) {
        std::atomic<u64> next{0};
        work(next);
    } else {
        std::atomic<u64> next{0};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back([&] { work(next); });
        for (auto& th : pool) th.join();
    }
    return KfreeTable(lo, hi, k, std::move(bits));
}

void kfree_flags_stream(u64 lo, u64 hi, int k, u64 segment_width,
                        const std::function<void(u64, u64, std::span<const std::uint8_t>)>& fn) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("kfree_flags_stream: need 1 <= lo <= hi");
    if (k < 2) throw std::invalid_argument("kfree_flags_stream: k must be >= 2");
    if (hi > kRangeMax) throw budget_error("kfree_flags_stream hi", hi, kRangeMax);

    const u64 width = std::max<u64>(64, (segment_width + 63) & ~u64{63});
    const auto primes = strike_primes_for(hi, k);
    std::vector<std::uint8_t> buf((width + 7) / 8);

    for (u64 seg_lo = lo; seg_lo <= hi; seg_lo += width) {
        u64 seg_hi = std::min(hi, seg_lo + width - 1);
        u64 len = seg_hi - seg_lo + 1;
        u64 bytes = (len + 7) / 8;
        std::fill_n(buf.begin(), bytes, std::uint8_t{0xFF});
        if (len % 8 != 0) buf[bytes - 1] = static_cast<std::uint8_t>((1u << (len % 8)) - 1);
        strike_segment(buf.data(), seg_lo, seg_lo, seg_hi, primes, k);
        fn(seg_lo, seg_hi, std::span<const std::uint8_t>(buf.data(), bytes));
        if (seg_lo > kRangeMax - width) break; // wrap guard
    }
}

} // namespace kfree
