#include "sumsq/census.hpp"
#include "sumsq/admissibility.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace sumsq::census {

namespace {

// Last r terms of the stream, oldest first once full.
class Window {
public:
    explicit Window(std::size_t r) : r_(r), buf_(r) {}

    void push(twosq::Term t)
    {
        buf_[head_] = t;
        head_ = (head_ + 1) % r_;
        if (size_ < r_) ++size_;
    }
    bool full() const { return size_ == r_; }
    const twosq::Term& at(std::size_t i) const { return buf_[(head_ + i) % r_]; }  // i = 0 is oldest
    const twosq::Term& oldest() const { return at(0); }

    Occurrence occurrence() const
    {
        Occurrence occ{oldest().index, {}};
        occ.values.reserve(r_);
        for (std::size_t i = 0; i < r_; ++i) occ.values.push_back(at(i).value);
        return occ;
    }

private:
    std::size_t r_;
    std::vector<twosq::Term> buf_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
};

bool window_matches(const Window& w, const PatternSpec& spec, u64 m)
{
    for (std::size_t i = 0; i < spec.r(); ++i) {
        if (w.at(i).value % m != spec.classes[i]) return false;
    }
    return true;
}

} // namespace

PatternSpec PatternSpec::make(const FactoredInteger& q, std::vector<u64> classes)
{
    if (classes.empty()) throw Error(ErrorKind::InvalidArgument, "pattern length r must be at least 1");
    PatternSpec spec{q, std::move(classes)};
    const u64 m = spec.modulus();
    for (u64 a : spec.classes) {
        if (a >= m) {
            throw Error(ErrorKind::InvalidArgument,
                        "class " + std::to_string(a) + " is not reduced mod " + std::to_string(m));
        }
    }
    return spec;
}

u64 PatternSpec::modulus() const
{
    const u64 m = arith::to_u64(q.value(), "modulus");
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    return m;
}

MatchResult match_pattern(const PatternSpec& spec, u64 x, const CensusOptions& options)
{
    const u64 m = spec.modulus();
    MatchResult result;
    twosq::EStream stream(options.sieve);
    Window w(spec.r());
    while (true) {
        w.push(stream.next());
        if (!w.full()) continue;
        if (w.oldest().value > x) break;
        if (window_matches(w, spec, m)) {
            ++result.count;
            if (result.occurrences.size() < options.max_occurrences) result.occurrences.push_back(w.occurrence());
        }
    }
    return result;
}

const PatternCount* CensusReport::find(const std::vector<u64>& pattern) const
{
    auto it = std::lower_bound(counts.begin(), counts.end(), pattern,
                               [](const PatternCount& pc, const std::vector<u64>& p) { return pc.pattern < p; });
    if (it == counts.end() || it->pattern != pattern) return nullptr;
    return &*it;
}

u64 CensusReport::count_of(const std::vector<u64>& pattern) const
{
    const PatternCount* pc = find(pattern);
    return pc ? pc->count : 0;
}

CensusReport census_report(const FactoredInteger& q, std::size_t r, u64 x, const CensusOptions& options)
{
    if (r == 0) throw Error(ErrorKind::InvalidArgument, "pattern length r must be at least 1");
    const u64 m = arith::to_u64(q.value(), "modulus");
    const std::vector<u64> classes = admissibility::admissible_residues(q);
    const u64 A = classes.size();

    u64 patterns = 1;
    for (std::size_t i = 0; i < r; ++i) {
        if (patterns > options.max_patterns / A) {
            throw Error(ErrorKind::TooManyPatterns, std::to_string(A) + "^" + std::to_string(r) +
                                                        " patterns exceed the cap of " +
                                                        std::to_string(options.max_patterns));
        }
        patterns *= A;
    }

    std::vector<std::int64_t> dense(m, -1);
    for (u64 i = 0; i < A; ++i) dense[classes[i]] = static_cast<std::int64_t>(i);

    std::vector<u64> counts(patterns, 0);
    std::unordered_map<u64, std::vector<Occurrence>> occurrences;

    CensusReport report;
    report.q = m;
    report.r = r;
    report.x = x;

    // code = digits of the last r dense indices, oldest most significant
    const u64 top = patterns / A;
    u64 code = 0;
    twosq::EStream stream(options.sieve);
    Window w(r);
    while (true) {
        const twosq::Term t = stream.next();
        const std::int64_t d = dense[t.value % m];
        if (d < 0) {
            throw Error(ErrorKind::InternalInconsistency,
                        "E_" + std::to_string(t.index) + " = " + std::to_string(t.value) +
                            " lies in a non-admissible class mod " + std::to_string(m));
        }
        code = (code % top) * A + static_cast<u64>(d);
        w.push(t);
        if (!w.full()) continue;
        if (w.oldest().value > x) break;
        ++counts[code];
        ++report.total_windows;
        if (options.max_occurrences > 0) {
            auto& list = occurrences[code];
            if (list.size() < options.max_occurrences) list.push_back(w.occurrence());
        }
    }

    report.counts.reserve(patterns);
    for (u64 c = 0; c < patterns; ++c) {
        PatternCount pc;
        pc.pattern.resize(r);
        u64 rest = c;
        for (std::size_t i = r; i-- > 0;) {
            pc.pattern[i] = classes[rest % A];
            rest /= A;
        }
        pc.count = counts[c];
        if (auto it = occurrences.find(c); it != occurrences.end()) pc.occurrences = std::move(it->second);
        report.counts.push_back(std::move(pc));
    }
    return report;
}

std::optional<Occurrence> find_first_occurrence(const PatternSpec& spec, u64 bound, const CensusOptions& options)
{
    for (u64 a : spec.classes) {
        if (!admissibility::admissible(a, spec.q)) return std::nullopt;
    }
    const u64 m = spec.modulus();
    twosq::EStream stream(options.sieve);
    Window w(spec.r());
    while (true) {
        w.push(stream.next());
        if (!w.full()) continue;
        if (w.oldest().value > bound) return std::nullopt;
        if (window_matches(w, spec, m)) return w.occurrence();
    }
}

} // namespace sumsq::census
