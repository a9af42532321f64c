#include "sumsq/json_io.hpp"
#include "sumsq/error.hpp"

#include <ostream>

namespace sumsq::io {

namespace {

using arith::BigInt;

std::string dec(const BigInt& n) { return n.str(); }
std::string dec(arith::u64 n) { return std::to_string(n); }

BigInt big(const json& j, const char* field)
{
    if (!j.contains(field)) throw Error(ErrorKind::InvalidArgument, std::string("missing field '") + field + "'");
    const json& v = j.at(field);
    if (v.is_string()) return arith::from_decimal(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    throw Error(ErrorKind::InvalidArgument, std::string("field '") + field + "' is not an integer");
}

BigInt big_value(const json& v)
{
    if (v.is_string()) return arith::from_decimal(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    throw Error(ErrorKind::InvalidArgument, "expected an integer");
}

json pair_json(const arith::TwoSquares& r) { return json::array({dec(r.x), dec(r.y)}); }

} // namespace

std::string pattern_string(const std::vector<arith::u64>& pattern)
{
    std::string s = "[";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(pattern[i]);
    }
    return s + "]";
}

void write_census_csv(std::ostream& out, const census::CensusReport& report)
{
    out << "pattern,count\n";
    for (const auto& pc : report.counts) out << '"' << pattern_string(pc.pattern) << "\"," << pc.count << '\n';
}

void write_first_occurrences_csv(std::ostream& out, const census::CensusReport& report)
{
    out << "pattern,n";
    for (std::size_t i = 0; i < report.r; ++i) out << ",E_n" << (i == 0 ? "" : "+" + std::to_string(i));
    out << '\n';
    for (const auto& pc : report.counts) {
        out << '"' << pattern_string(pc.pattern) << '"';
        if (pc.occurrences.empty()) {
            out << ",none\n";
            continue;
        }
        const auto& occ = pc.occurrences.front();
        out << ',' << occ.index;
        for (arith::u64 v : occ.values) out << ',' << v;
        out << '\n';
    }
}

void write_match_csv(std::ostream& out, const census::PatternSpec& spec, const census::MatchResult& result)
{
    out << "pattern,count\n";
    out << '"' << pattern_string(spec.classes) << "\"," << result.count << '\n';
}

json to_json(const census::Occurrence& occ)
{
    json values = json::array();
    for (auto v : occ.values) values.push_back(dec(v));
    return json{{"n", dec(occ.index)}, {"values", values}};
}

json to_json(const census::CensusReport& report, bool with_occurrences)
{
    json counts = json::array();
    for (const auto& pc : report.counts) {
        json row{{"pattern", pc.pattern}, {"count", dec(pc.count)}};
        if (with_occurrences) {
            json occ = json::array();
            for (const auto& o : pc.occurrences) occ.push_back(to_json(o));
            row["occurrences"] = occ;
        }
        counts.push_back(row);
    }
    return json{{"q", dec(report.q)},
                {"r", report.r},
                {"x", dec(report.x)},
                {"total_windows", dec(report.total_windows)},
                {"counts", counts}};
}

json to_json(const witness::TripleCertificate& c)
{
    json j{{"n", dec(c.n)}, {"q", dec(c.q)}, {"a", dec(c.a)}, {"h", dec(c.h)}, {"k", dec(c.k)}};
    if (c.t) j["t"] = dec(*c.t);
    j["reps"] = json::array({pair_json(c.reps[0]), pair_json(c.reps[1]), pair_json(c.reps[2])});
    j["consecutive"] = c.consecutive;
    if (c.consecutive) {
        json ev = json::array();
        for (const auto& e : c.evidence) ev.push_back(json{{"m", dec(e.m)}, {"p", dec(e.p)}, {"e", e.e}});
        j["evidence"] = ev;
    }
    return j;
}

witness::TripleCertificate certificate_from_json(const json& j)
{
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "certificate must be a JSON object");
    witness::TripleCertificate c;
    c.n = big(j, "n");
    c.q = big(j, "q");
    c.a = big(j, "a");
    c.h = big(j, "h");
    c.k = big(j, "k");
    if (j.contains("t") && !j.at("t").is_null()) c.t = big(j, "t");
    if (!j.contains("reps") || !j.at("reps").is_array() || j.at("reps").size() != 3) {
        throw Error(ErrorKind::InvalidArgument, "certificate needs three representations");
    }
    for (int i = 0; i < 3; ++i) {
        const json& r = j.at("reps").at(i);
        if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::InvalidArgument, "representation must be [x, y]");
        c.reps[i] = {big_value(r.at(0)), big_value(r.at(1))};
    }
    c.consecutive = j.value("consecutive", false);
    if (c.consecutive) {
        if (!j.contains("evidence") || !j.at("evidence").is_array()) {
            throw Error(ErrorKind::InvalidArgument, "consecutive certificate without evidence");
        }
        for (const json& e : j.at("evidence")) {
            const BigInt exp = big(e, "e");
            if (exp < 0 || exp > 1'000'000) throw Error(ErrorKind::InvalidArgument, "evidence exponent out of range");
            c.evidence.push_back({big(e, "m"), big(e, "p"), static_cast<unsigned>(exp)});
        }
    }
    return c;
}

json to_json(const arith::FactoredInteger& n)
{
    json factors = json::array();
    for (const auto& [p, e] : n.factors()) factors.push_back(json::array({dec(p), e}));
    return json{{"value", dec(n.value())}, {"factors", factors}};
}

json to_json(const witness::WitnessFamily& f)
{
    return json{{"q", dec(f.q.value())}, {"a", dec(f.a)},   {"h", dec(f.h)},   {"k", dec(f.k)},   {"x0", dec(f.x0)},
                {"y0", dec(f.y0)},       {"u", dec(f.u)},   {"v", dec(f.v)},   {"g", dec(f.g)},   {"T", dec(f.T)},
                {"r0", dec(f.r0)},       {"s0", dec(f.s0)}, {"A", dec(f.A)},   {"B", dec(f.B)},   {"C", dec(f.C)},
                {"eta", dec(f.eta)},     {"disc", dec(f.disc())}};
}

json to_json(const witness::ObstructionReport& r)
{
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(json{{"check", c.description}, {"ok", c.ok}});
    return json{{"checks", checks}, {"disc", dec(r.disc)}, {"disc_is_negative_square", r.disc_is_negative_square}};
}

json checks_to_json(const std::vector<std::pair<std::string, bool>>& checks)
{
    json out = json::array();
    for (const auto& [name, ok] : checks) out.push_back(json{{"check", name}, {"ok", ok}});
    return out;
}

json to_json(const forcing::BlockingSystem& s)
{
    json primes = json::array();
    for (const auto& [i, p] : s.blocking_primes) primes.push_back(json{{"i", dec(i)}, {"p", dec(p)}});
    return json{{"q", dec(s.q.value())},
                {"a", dec(s.a)},
                {"b", dec(s.b)},
                {"c", dec(s.c)},
                {"lifts_q2", json::array({dec(s.a2), dec(s.b2), dec(s.c2)})},
                {"lifts_4q2", json::array({dec(s.a3), dec(s.b3), dec(s.c3)})},
                {"window_widened", s.window_widened},
                {"h", dec(s.h)},
                {"k", dec(s.k)},
                {"blocking_primes", primes},
                {"T", to_json(s.T)},
                {"a_T", dec(s.a_T.value())}};
}

json to_json(const forcing::TupleDesign& d)
{
    json bins = json::array(), offsets = json::array();
    for (auto b : d.bins) bins.push_back(dec(b));
    for (auto h : d.offsets) offsets.push_back(dec(h));
    json j{{"q", dec(d.q)}, {"a", dec(d.a)}, {"b", dec(d.b)}, {"j", d.j}, {"residue_mod4", d.residue_mod4}};
    if (d.theta1) j["theta1"] = *d.theta1;
    if (d.theta2) j["theta2"] = *d.theta2;
    j["bins"] = bins;
    j["offsets"] = offsets;
    return j;
}

json to_json(const forcing::GapBlocking& gb)
{
    json blocks = json::array();
    for (const auto& [t, p] : gb.blocks) blocks.push_back(json{{"t", dec(t)}, {"q_t", dec(p)}});
    return json{{"Q", to_json(gb.Q)}, {"a", dec(gb.a)}, {"blocks", blocks}};
}

} // namespace sumsq::io
