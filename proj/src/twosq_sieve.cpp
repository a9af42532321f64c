#include "sumsq/twosq_sieve.hpp"
#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace sumsq::twosq {

namespace {

using u128 = unsigned __int128;

void put_u64(std::ostream& out, u64 v)
{
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

u64 get_u64(std::istream& in)
{
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) {
        throw Error(ErrorKind::InvalidArgument, "truncated bitmap dump");
    }
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

u64 word_count(u64 bits) { return (bits + 63) / 64; }

std::launch launch_policy(unsigned workers) { return workers > 1 ? std::launch::async : std::launch::deferred; }

} // namespace

TwoSqSegment::TwoSqSegment(u64 lo, u64 hi, std::vector<u64> words) : lo_(lo), hi_(hi), words_(std::move(words))
{
    if (hi < lo || words_.size() != word_count(hi - lo)) {
        throw Error(ErrorKind::InvalidArgument, "segment bitmap does not match its range");
    }
}

u64 TwoSqSegment::count() const
{
    u64 c = 0;
    for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
    return c;
}

std::vector<u64> TwoSqSegment::members() const
{
    std::vector<u64> out;
    for_each_member([&](u64 n) { out.push_back(n); });
    return out;
}

TwoSqSegment TwoSqSegment::concat(const TwoSqSegment& next) const
{
    if (next.lo_ != hi_) throw Error(ErrorKind::InvalidArgument, "concat: segments are not adjacent");
    const u64 len = size() + next.size();
    std::vector<u64> words(word_count(len), 0);
    std::copy(words_.begin(), words_.end(), words.begin());
    next.for_each_member([&](u64 n) {
        const u64 j = n - lo_;
        words[j >> 6] |= u64{1} << (j & 63);
    });
    return {lo_, next.hi_, std::move(words)};
}

void TwoSqSegment::write(std::ostream& out) const
{
    put_u64(out, lo_);
    put_u64(out, hi_);
    for (u64 w : words_) put_u64(out, w);
}

TwoSqSegment TwoSqSegment::read(std::istream& in)
{
    const u64 lo = get_u64(in);
    const u64 hi = get_u64(in);
    if (hi < lo) throw Error(ErrorKind::InvalidArgument, "bitmap dump has hi < lo");
    std::vector<u64> words(word_count(hi - lo));
    for (auto& w : words) w = get_u64(in);
    return {lo, hi, std::move(words)};
}

TwoSqSegment sieve_segment(u64 lo, u64 hi, const SieveOptions& options)
{
    if (hi <= lo) throw Error(ErrorKind::InvalidArgument, "sieve_segment: need lo < hi");
    const u64 len = hi - lo;
    if (len > options.max_segment_length) {
        throw Error(ErrorKind::SegmentTooLarge, "segment of " + std::to_string(len) + " values exceeds the cap of " +
                                                    std::to_string(options.max_segment_length));
    }
    std::vector<u64> words(word_count(len), 0);

    // Rows x with x <= y; the row is empty once 2x^2 >= hi.
    for (u64 x = 0; static_cast<u128>(2) * x * x < hi; ++x) {
        const u128 x2 = static_cast<u128>(x) * x;
        u64 y = x;
        if (x2 + static_cast<u128>(y) * y < lo) {
            const u64 rest = static_cast<u64>(lo - x2);
            y = arith::isqrt(rest);
            if (static_cast<u128>(y) * y < rest) ++y;
        }
        for (u128 v = x2 + static_cast<u128>(y) * y; v < hi; ++y, v = x2 + static_cast<u128>(y) * y) {
            const u64 j = static_cast<u64>(v) - lo;
            words[j >> 6] |= u64{1} << (j & 63);
        }
    }
    return {lo, hi, std::move(words)};
}

TwoSqSegment load_or_sieve(u64 lo, u64 hi, const SieveOptions& options)
{
    if (options.cache_dir.empty()) return sieve_segment(lo, hi, options);

    namespace fs = std::filesystem;
    const fs::path path = fs::path(options.cache_dir) / ("twosq_" + std::to_string(lo) + "_" + std::to_string(hi) + ".bin");
    if (std::ifstream in{path, std::ios::binary}) {
        try {
            TwoSqSegment seg = TwoSqSegment::read(in);
            if (seg.lo() == lo && seg.hi() == hi) return seg;
        } catch (const Error&) {
            // unreadable cache entry; fall through and rebuild it
        }
    }
    TwoSqSegment seg = sieve_segment(lo, hi, options);
    std::error_code ec;
    fs::create_directories(options.cache_dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        if (out) seg.write(out);
    }
    fs::rename(tmp, path, ec);
    return seg;
}

// ---------------------------------------------------------------------------

EStream::EStream(SieveOptions options) : options_(std::move(options))
{
    if (options_.segment_length == 0) throw Error(ErrorKind::InvalidArgument, "segment length must be positive");
}

void EStream::schedule()
{
    const std::size_t depth = std::max(1u, options_.workers);
    while (pending_.size() < depth) {
        const u64 lo = next_lo_;
        const u64 room = std::numeric_limits<u64>::max() - lo;
        if (room == 0) break;
        const u64 hi = lo + std::min(room, options_.segment_length);
        pending_.push_back(std::async(launch_policy(options_.workers),
                                      [lo, hi, opts = options_] { return load_or_sieve(lo, hi, opts); }));
        next_lo_ = hi;
    }
}

void EStream::advance_segment()
{
    schedule();
    if (pending_.empty()) throw Error(ErrorKind::InvalidArgument, "stream exhausted the 64-bit range");
    current_ = pending_.front().get();
    pending_.pop_front();
    schedule();
    word_ = 0;
    bits_ = current_.words().empty() ? 0 : current_.words()[0];
}

Term EStream::next()
{
    if (!started_) {
        started_ = true;
        advance_segment();
    }
    while (bits_ == 0) {
        if (word_ + 1 < current_.words().size()) {
            bits_ = current_.words()[++word_];
        } else {
            advance_segment();
        }
    }
    const unsigned b = static_cast<unsigned>(std::countr_zero(bits_));
    bits_ &= bits_ - 1;
    return {++index_, current_.lo() + (word_ << 6) + b};
}

void stream_E(u64 x_max, const std::function<void(Term)>& sink, const SieveOptions& options)
{
    EStream stream(options);
    for (Term t = stream.next(); t.value <= x_max; t = stream.next()) sink(t);
}

u64 count_N(u64 x, const SieveOptions& options)
{
    if (x == std::numeric_limits<u64>::max()) throw Error(ErrorKind::InvalidArgument, "count_N: x too large");
    const u64 end = x + 1;
    const u64 len = std::max<u64>(1, options.segment_length);
    const unsigned workers = std::max(1u, options.workers);
    u64 total = 0;
    std::deque<std::future<u64>> inflight;
    for (u64 lo = 0; lo < end; lo += std::min(len, end - lo)) {
        const u64 hi = lo + std::min(len, end - lo);
        inflight.push_back(std::async(launch_policy(workers),
                                      [lo, hi, &options] { return load_or_sieve(lo, hi, options).count(); }));
        if (inflight.size() >= workers) {
            total += inflight.front().get();
            inflight.pop_front();
        }
    }
    for (auto& f : inflight) total += f.get();
    return total;
}

} // namespace sumsq::twosq
