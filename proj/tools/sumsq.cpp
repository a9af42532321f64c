// sumsq: command-line front end for the sums-of-two-squares toolkit.
// Data goes to stdout (or --out), diagnostics to stderr.

#include "sumsq/admissibility.hpp"
#include "sumsq/arith.hpp"
#include "sumsq/census.hpp"
#include "sumsq/error.hpp"
#include "sumsq/forcing.hpp"
#include "sumsq/json_io.hpp"
#include "sumsq/twosq_sieve.hpp"
#include "sumsq/witness.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace sumsq;
using arith::BigInt;
using arith::u64;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitUsage = 64;

struct Common {
    u64 segment = u64{1} << 24;
    unsigned workers = 1;
    std::string cache_dir;
    std::string out;
    std::string format = "csv";
};

twosq::SieveOptions sieve_options(const Common& c)
{
    twosq::SieveOptions o;
    o.segment_length = c.segment;
    o.workers = c.workers;
    o.cache_dir = c.cache_dir;
    return o;
}

// Writes to --out when given, else stdout.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

arith::FactoredInteger parse_modulus(const std::string& s)
{
    const BigInt q = arith::from_decimal(s);
    if (q <= 0) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    return arith::factorize(q);
}

u64 parse_u64(const std::string& s, const char* what)
{
    return arith::to_u64(arith::from_decimal(s), what);
}

std::vector<u64> parse_list(const std::string& s)
{
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_u64(item, "list entry"));
    if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty list");
    return out;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::HypothesisViolation:
    case ErrorKind::ObstructionFound:
        return kExitHypothesis;
    case ErrorKind::InvalidArgument:
    case ErrorKind::DomainError:
    case ErrorKind::ModulusMismatch:
        return kExitUsage;
    default:
        return kExitInternal;
    }
}

// --- subcommands ------------------------------------------------------------

int run_sieve(const Common& c, const std::string& lo_s, const std::string& hi_s, bool count_only,
              const std::string& dump)
{
    const u64 lo = parse_u64(lo_s, "lo"), hi = parse_u64(hi_s, "hi");
    const auto seg = twosq::load_or_sieve(lo, hi, sieve_options(c));
    if (!dump.empty()) {
        std::ofstream f(dump, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open dump file " + dump);
        seg.write(f);
    }
    Output out(c.out);
    if (count_only) {
        out.stream() << seg.count() << '\n';
    } else {
        seg.for_each_member([&](u64 n) { out.stream() << n << '\n'; });
    }
    return kExitOk;
}

int run_admissible(const Common& c, const std::string& q_s, const std::string& check)
{
    const auto q = parse_modulus(q_s);
    Output out(c.out);
    if (!check.empty()) {
        const auto verdict = admissibility::is_admissible(arith::ResidueClass(arith::from_decimal(check), q.value()), q);
        out.stream() << verdict.describe() << '\n';
        return kExitOk;
    }
    const auto classes = admissibility::admissible_residues(q);
    for (std::size_t i = 0; i < classes.size(); ++i) out.stream() << (i ? "," : "") << classes[i];
    out.stream() << '\n';
    return kExitOk;
}

census::CensusOptions census_options(const Common& c, std::size_t occurrences)
{
    census::CensusOptions o;
    o.sieve = sieve_options(c);
    o.max_occurrences = occurrences;
    return o;
}

int run_census(const Common& c, const std::string& q_s, std::size_t r, const std::string& x_s, std::size_t occ)
{
    const auto q = parse_modulus(q_s);
    const u64 x = parse_u64(x_s, "x");
    const auto report = census::census_report(q, r, x, census_options(c, c.format == "csv" ? 0 : std::max<std::size_t>(occ, c.format == "first" ? 1 : 0)));
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << io::to_json(report, occ > 0).dump(2) << '\n';
    } else if (c.format == "first") {
        io::write_first_occurrences_csv(out.stream(), report);
    } else {
        io::write_census_csv(out.stream(), report);
    }
    std::cerr << "census: q=" << report.q << " r=" << report.r << " x=" << report.x << " windows=" << report.total_windows
              << " patterns=" << report.counts.size() << '\n';
    return kExitOk;
}

int run_pattern(const Common& c, const std::string& q_s, const std::string& classes, const std::string& x_s,
                std::size_t occ)
{
    const auto spec = census::PatternSpec::make(parse_modulus(q_s), parse_list(classes));
    const u64 x = parse_u64(x_s, "x");
    const auto result = census::match_pattern(spec, x, census_options(c, occ));
    Output out(c.out);
    if (c.format == "json") {
        io::json occs = io::json::array();
        for (const auto& o : result.occurrences) occs.push_back(io::to_json(o));
        io::json j{{"q", spec.q.value().str()},
                   {"pattern", spec.classes},
                   {"x", std::to_string(x)},
                   {"count", std::to_string(result.count)},
                   {"occurrences", occs}};
        out.stream() << j.dump(2) << '\n';
    } else {
        io::write_match_csv(out.stream(), spec, result);
    }
    return kExitOk;
}

int run_witness(const Common& c, const std::string& q_s, const std::string& a_s, const std::string& h_s,
                const std::string& k_s, u64 t_max, u64 budget, bool consecutive, bool show_family)
{
    const auto q = parse_modulus(q_s);
    const BigInt a = arith::from_decimal(a_s), h = arith::from_decimal(h_s), k = arith::from_decimal(k_s);
    const auto family = witness::make_family(q, a, h, k);
    const auto obstructions = witness::check_local_obstructions(family);
    if (show_family) {
        io::json j{{"family", io::to_json(family)}, {"obstructions", io::to_json(obstructions)}};
        std::cerr << j.dump(2) << '\n';
    }
    witness::ScanOptions opts;
    opts.budget.rho_iterations = budget;
    opts.workers = c.workers;
    opts.check_consecutive = consecutive;
    const auto scan = witness::scan_family(family, t_max, opts);
    Output out(c.out);
    for (const auto& cert : scan.certificates) out.stream() << io::to_json(cert).dump() << '\n';
    std::cerr << "witness: F(t) = " << family.A << " t^2 + " << family.B << " t + " << (family.C + family.k)
              << "; scanned " << scan.scanned << ", certificates " << scan.certificates.size() << ", skipped "
              << scan.skipped << '\n';
    return kExitOk;
}

int run_force_triple(const Common& c, const std::string& q_s, const std::string& a_s, const std::string& b_s,
                     const std::string& c_s, u64 x_budget, bool with_family)
{
    const auto q = parse_modulus(q_s);
    forcing::TripleOptions opts;
    opts.census = census_options(c, 0);
    opts.build_family = with_family;
    const auto report = forcing::end_to_end_triple(q, parse_u64(a_s, "a"), parse_u64(b_s, "b"), parse_u64(c_s, "c"),
                                                   x_budget, opts);
    io::json j{{"blocking_system", io::to_json(report.system)},
               {"verification", io::checks_to_json(forcing::verify_blocking_system(report.system))},
               {"occurrence", io::to_json(report.occurrence)},
               {"certificate", io::to_json(report.certificate)}};
    if (report.family) j["family"] = io::to_json(*report.family);
    Output out(c.out);
    out.stream() << j.dump(2) << '\n';
    return kExitOk;
}

int run_tuple(const Common& c, const std::string& q_s, const std::string& a_s, const std::string& b_s, unsigned j,
              unsigned M, double theta1, double theta2, const std::string& sizes_s, u64 residue_mod4)
{
    const auto q = parse_modulus(q_s);
    std::vector<u64> sizes;
    if (!sizes_s.empty()) {
        sizes = parse_list(sizes_s);
        if (sizes.size() != M) throw Error(ErrorKind::InvalidArgument, "--sizes must list exactly M bin sizes");
        forcing::delta_constant(theta1, theta2);  // domain check only
    } else {
        for (const BigInt& s : forcing::bin_plan(M, theta1, theta2)) sizes.push_back(arith::to_u64(s, "bin size"));
    }
    forcing::TupleOptions opts;
    opts.residue_mod4 = residue_mod4;
    auto design = forcing::construct_two_class_tuple(q, parse_u64(a_s, "a"), parse_u64(b_s, "b"), j, sizes, opts);
    if (sizes_s.empty()) {
        design.theta1 = theta1;
        design.theta2 = theta2;
    }
    io::json out_j = io::to_json(design);
    out_j["delta"] = forcing::delta_constant(theta1, theta2);
    out_j["verification"] = io::checks_to_json(forcing::verify_tuple(design));
    Output out(c.out);
    out.stream() << out_j.dump(2) << '\n';
    return kExitOk;
}

int run_gap_block(const Common& c, const std::string& g_s, const std::string& offsets_s)
{
    const u64 g = parse_u64(g_s, "g");
    const auto offsets = parse_list(offsets_s);
    const auto gb = forcing::gap_blocking(g, offsets);
    io::json j = io::to_json(gb);
    j["verification"] = io::checks_to_json(forcing::verify_gap_blocking(g, offsets, gb));
    Output out(c.out);
    out.stream() << j.dump(2) << '\n';
    return kExitOk;
}

int run_verify(const std::string& path)
{
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
        in = &file;
    }
    std::string line;
    u64 lineno = 0, ok = 0, bad = 0;
    while (std::getline(*in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string why;
        bool valid = false;
        try {
            valid = witness::verify_certificate(io::certificate_from_json(io::json::parse(line)), &why);
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (valid) {
            ++ok;
        } else {
            ++bad;
            std::cerr << "line " << lineno << ": " << why << '\n';
        }
    }
    std::cerr << "verify: " << ok << " valid, " << bad << " invalid\n";
    return bad == 0 ? kExitOk : kExitHypothesis;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sums of two squares: sieve, admissibility, pattern census, witness families, blocking systems"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Common common;
    if (const char* env = std::getenv("SUMSQ_CACHE_DIR")) common.cache_dir = env;
    app.add_option("--segment", common.segment, "Sieve segment length")->check(CLI::Range(u64{64}, u64{1} << 33));
    app.add_option("--workers", common.workers, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--cache-dir", common.cache_dir, "Bitmap cache directory (default: $SUMSQ_CACHE_DIR)");
    app.add_option("--out", common.out, "Write data here instead of stdout");

    std::string s1, s2, s3, s4, list;
    std::size_t r = 1, occ = 10;
    bool flag = false, flag2 = false;
    u64 t_max = 100, budget = 100'000, x_budget = 10'000'000, residue_mod4 = 1;
    unsigned j = 1, M = 1;
    double theta1 = 0, theta2 = 0;
    std::string dump;

    auto* sieve = app.add_subcommand("sieve", "Members of E in [lo, hi)");
    sieve->add_option("lo", s1)->required();
    sieve->add_option("hi", s2)->required();
    sieve->add_flag("--count", flag, "Print only the number of members");
    sieve->add_option("--dump", dump, "Write the raw bitmap to FILE");

    auto* adm = app.add_subcommand("admissible", "Admissible classes mod q");
    adm->add_option("q", s1)->required();
    adm->add_option("--check", s2, "Explain the verdict for one class");

    auto* cen = app.add_subcommand("census", "Counts N(x; q, a) for every r-tuple of classes");
    cen->add_option("q", s1)->required();
    cen->add_option("r", r)->required()->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    cen->add_option("x", s2)->required();
    cen->add_option("--format", common.format, "csv counts, json, or first (first occurrence per pattern)")
        ->check(CLI::IsMember({"csv", "json", "first"}));
    cen->add_option("--occurrences", occ, "Occurrences kept per pattern (json only)");

    auto* pat = app.add_subcommand("pattern", "Count one pattern a1,..,ar");
    pat->add_option("q", s1)->required();
    pat->add_option("classes", list)->required();
    pat->add_option("x", s2)->required();
    pat->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));
    pat->add_option("--occurrences", occ, "Occurrences kept (json only)");

    auto* wit = app.add_subcommand("witness", "Build the witness family for (q, a, h, k) and scan it");
    wit->add_option("q", s1)->required();
    wit->add_option("a", s2)->required();
    wit->add_option("h-offset", s3, "Offset h")->required();
    wit->add_option("k-offset", s4, "Offset k")->required();
    wit->add_option("--tmax", t_max, "Scan t = 0..tmax");
    wit->add_option("--budget", budget, "Pollard rho iterations per value");
    wit->add_flag("--no-consecutive", flag, "Skip the consecutiveness check");
    wit->add_flag("--family", flag2, "Print the family and obstruction report to stderr");

    auto* force = app.add_subcommand("force-triple", "Blocking system and first consecutive triple for [a, b, c]");
    force->add_option("q", s1)->required();
    force->add_option("a", s2)->required();
    force->add_option("b", s3)->required();
    force->add_option("c", s4)->required();
    force->add_option("--xbudget", x_budget, "Census bound");
    force->add_flag("--family", flag, "Also construct the witness family modulo T");

    auto* tup = app.add_subcommand("tuple", "Two-class offset tuple");
    tup->add_option("q", s1)->required();
    tup->add_option("a", s2)->required();
    tup->add_option("b", s3)->required();
    tup->add_option("j", j)->required();
    tup->add_option("M", M)->required()->check(CLI::Range(1u, 64u));
    tup->add_option("theta1", theta1)->required();
    tup->add_option("theta2", theta2)->required();
    tup->add_option("--sizes", list, "Explicit bin sizes s1,..,sM instead of the minimal plan");
    tup->add_option("--residue-mod4", residue_mod4, "Residue of every offset mod 4")->check(CLI::Range(u64{0}, u64{3}));

    auto* gap = app.add_subcommand("gap-block", "Block every gap integer between offsets h1 < .. < hk");
    gap->add_option("g", s1)->required();
    gap->add_option("offsets", list)->required();

    auto* ver = app.add_subcommand("verify", "Re-verify JSONL certificates (stdin when FILE is omitted)");
    ver->add_option("file", s1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*sieve) return run_sieve(common, s1, s2, flag, dump);
        if (*adm) return run_admissible(common, s1, s2);
        if (*cen) return run_census(common, s1, r, s2, occ);
        if (*pat) return run_pattern(common, s1, list, s2, occ);
        if (*wit) return run_witness(common, s1, s2, s3, s4, t_max, budget, !flag, flag2);
        if (*force) return run_force_triple(common, s1, s2, s3, s4, x_budget, flag);
        if (*tup) return run_tuple(common, s1, s2, s3, j, M, theta1, theta2, list, residue_mod4);
        if (*gap) return run_gap_block(common, s1, list);
        if (*ver) return run_verify(s1);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const int code = exit_code_for(e.kind());
        if (code == kExitUsage) std::cerr << "see --help for usage\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
