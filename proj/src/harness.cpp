#include "tcurve/harness.hpp"

#include "tcurve/lyapunov.hpp"
#include "tcurve/nonvarying.hpp"
#include "tcurve/orbit.hpp"
#include "tcurve/pic.hpp"
#include "tcurve/quotient.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tcurve {

#ifndef TCURVE_DATA_DIR
#define TCURVE_DATA_DIR "data"
#endif

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("TCURVE_DATA_DIR"); env && *env)
        return env;
    return TCURVE_DATA_DIR;
}

std::string read_text_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string trim(std::string s)
{
    auto sp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && sp(s.back()))
        s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && sp(s[i]))
        ++i;
    return s.substr(i);
}

struct Block {
    std::string id;
    int line = 0;
    std::vector<std::pair<std::string, std::string>> kv;
    std::string get(const std::string& key, bool required = true) const
    {
        for (const auto& [k, v] : kv)
            if (k == key)
                return v;
        if (required)
            throw std::invalid_argument("block '" + id + "' (line " + std::to_string(line) + ") lacks '" + key + "'");
        return {};
    }
};

std::vector<Block> parse_blocks(std::string_view text, const std::string& tag)
{
    std::vector<Block> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    const std::string open = "[" + tag + " ";
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.rfind(open, 0) != 0 || line.back() != ']')
                throw std::invalid_argument("line " + std::to_string(lineno) + ": expected '" + open + "<id>]'");
            out.push_back({trim(line.substr(open.size(), line.size() - open.size() - 1)), lineno, {}});
            continue;
        }
        auto eq = line.find('=');
        if (out.empty() || eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'key = value' inside a block");
        out.back().kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::string canonical_rational(const std::string& s) { return to_string(parse_rational(s)); }

}  // namespace

std::vector<DatasetRow> parse_dataset(std::string_view text)
{
    std::vector<DatasetRow> rows;
    for (const auto& b : parse_blocks(text, "row")) {
        DatasetRow r;
        r.id = b.id;
        r.stratum = b.get("stratum");
        r.r = b.get("r");
        r.u = b.get("u");
        r.L = b.get("L");
        r.L_plus = b.get("L_plus");
        r.tier = b.get("tier", false);
        try {
            r.index = std::stoull(b.get("index"));
            parse_rational(r.L);
            parse_rational(r.L_plus);
            parse_stratum_label(r.stratum);
            parse_cycles(r.r);
            parse_cycles(r.u);
        } catch (const std::exception& e) {
            throw std::invalid_argument("row " + r.id + ": " + e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AnomalyEntry> parse_anomalies(std::string_view text)
{
    std::vector<AnomalyEntry> out;
    for (const auto& b : parse_blocks(text, "anomaly")) {
        AnomalyEntry a;
        a.row = b.id;
        a.kind = b.get("kind");
        a.field = b.get("field");
        a.printed = b.get("printed");
        a.recomputed = a.kind == "flagged-value" ? b.get("recomputed") : b.get("repaired");
        a.note = b.get("note", false);
        if (a.kind != "flagged-value" && a.kind != "transcription-repair")
            throw std::invalid_argument("anomaly " + a.row + ": unknown kind '" + a.kind + "'");
        out.push_back(std::move(a));
    }
    return out;
}

std::string to_string(RowStatus s)
{
    switch (s) {
    case RowStatus::Match: return "match";
    case RowStatus::Mismatch: return "mismatch";
    case RowStatus::FlaggedAnomaly: return "flagged-anomaly";
    case RowStatus::SkippedOverLimit: return "skipped-over-limit";
    }
    return "?";
}

namespace {

ReportCounts count_statuses(const auto& rows)
{
    ReportCounts c;
    for (const auto& r : rows) {
        switch (r.status) {
        case RowStatus::Match: ++c.match; break;
        case RowStatus::Mismatch: ++c.mismatch; break;
        case RowStatus::FlaggedAnomaly: ++c.flagged; break;
        case RowStatus::SkippedOverLimit: ++c.skipped; break;
        }
    }
    return c;
}

}  // namespace

ReportCounts VerificationReport::counts() const { return count_statuses(rows); }
ReportCounts TheoremReport::counts() const { return count_statuses(rows); }

RowResult verify_row(const DatasetRow& row, const std::vector<AnomalyEntry>& anomalies, const VerifyOptions& options)
{
    RowResult res;
    res.id = row.id;
    res.stratum = row.stratum;
    res.tier = row.tier;
    res.expected_index = row.index;
    res.expected_L = canonical_rational(row.L);
    res.expected_L_plus = canonical_rational(row.L_plus);
    if (row.index > options.max_index) {
        res.status = RowStatus::SkippedOverLimit;
        return res;
    }
    const AnomalyEntry* flag = nullptr;
    for (const auto& a : anomalies) {
        if (a.row != row.id)
            continue;
        if (a.kind == "flagged-value")
            flag = &a;
        else
            res.notes.push_back("transcription repair of " + a.field + ": " + a.note);
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        Origami o = parse_surface("r = " + row.r + "\nu = " + row.u);
        if (!is_connected(o))
            throw std::invalid_argument("disconnected surface");
        StratumLabel printed = parse_stratum_label(row.stratum);
        if (flag && flag->field == "stratum") {
            printed = parse_stratum_label(flag->recomputed);
            res.notes.push_back("printed stratum flagged; using quotient " + printed.signature.label());
        }
        std::vector<QuotientStructure> qs = quotient_structures(o);
        const QuotientStructure* q = nullptr;
        for (const auto& s : qs)
            if (s.signature == printed.signature) {
                q = &s;
                break;
            }
        res.cover_stratum = stratum_of(o).label();
        if (!q) {
            std::string found;
            for (const auto& s : qs)
                found += (found.empty() ? "" : ", ") + s.signature.label();
            res.computed_stratum = found.empty() ? std::string("none") : found;
            res.notes.push_back("no involution has quotient " + printed.signature.label());
            res.status = RowStatus::Mismatch;
            return res;
        }
        res.computed_stratum = q->signature.label();
        if (!printed.component.empty())
            res.notes.push_back("component tag '" + printed.component + "' is not recomputed");

        OrbitOptions oo;
        oo.jobs = options.jobs;
        oo.cache_dir = options.cache_dir;
        oo.limits.max_size = options.max_index;
        OrbitSummary orbit = enumerate_orbit(o, oo);
        res.cache_hit = orbit.cache_hit;
        res.index = orbit.index;
        if (!orbit.complete) {
            res.notes.push_back("orbit exceeds the index limit");
            res.status = RowStatus::Mismatch;
            res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return res;
        }
        TeichCurveReport t = teich_report(orbit, q->signature);
        res.L = to_string(t.L);
        res.L_plus = to_string(t.L_plus);

        bool ok = orbit.index == row.index && *res.L == res.expected_L;
        if (flag && flag->field == "L_plus") {
            if (ok && canonical_rational(flag->recomputed) == *res.L_plus) {
                res.status = RowStatus::FlaggedAnomaly;
                res.notes.push_back("printed L_plus " + res.expected_L_plus + " flagged; recomputed " + *res.L_plus);
            } else {
                res.status = RowStatus::Mismatch;
            }
        } else {
            ok = ok && *res.L_plus == res.expected_L_plus;
            res.status = !ok ? RowStatus::Mismatch : flag ? RowStatus::FlaggedAnomaly : RowStatus::Match;
        }
    } catch (const std::exception& e) {
        res.notes.push_back(e.what());
        res.status = RowStatus::Mismatch;
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

VerificationReport verify_dataset(const std::vector<DatasetRow>& rows, const std::vector<AnomalyEntry>& anomalies,
                                  const VerifyOptions& options)
{
    VerificationReport rep;
    rep.rows.resize(rows.size());

    // Small orbits run side by side on one thread each; large ones get the
    // whole worker budget one at a time.
    constexpr std::uint64_t kSmall = 20000;
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < rows.size(); ++i)
        (rows[i].index <= kSmall || rows[i].index > options.max_index ? small : large).push_back(i);

    const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(small.size())));
    VerifyOptions single = options;
    single.jobs = 1;
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < small.size();)
                    rep.rows[small[k]] = verify_row(rows[small[k]], anomalies, single);
            });
    }
    for (std::size_t i : large)
        rep.rows[i] = verify_row(rows[i], anomalies, options);

    std::sort(rep.rows.begin(), rep.rows.end(), [](const RowResult& a, const RowResult& b) { return a.id < b.id; });
    return rep;
}

std::vector<TheoremEntry> parse_theorem_table(std::string_view text)
{
    std::vector<TheoremEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        TheoremEntry e;
        std::istringstream tok(line);
        std::string t;
        while (tok >> t) {
            auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::invalid_argument("table line " + std::to_string(lineno) + ": bad token '" + t + "'");
            std::string k = t.substr(0, eq), v = t.substr(eq + 1);
            if (k == "group")
                e.group = v;
            else if (k == "stratum")
                e.stratum = v;
            else if (k == "route")
                e.route = v;
            else if (k == "expected")
                e.expected = v;
            else
                e.fields[k] = v;
        }
        if (e.group.empty() || e.stratum.empty() || e.route.empty() || e.expected.empty())
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": group, stratum, route and expected are required");
        char buf[16];
        std::snprintf(buf, sizeof buf, "t%02zu", out.size() + 1);
        e.id = buf;
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

std::vector<std::string> split_plus(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, '+'))
        out.push_back(t);
    return out;
}

const std::string& field(const TheoremEntry& e, const std::string& key)
{
    auto it = e.fields.find(key);
    if (it == e.fields.end())
        throw std::invalid_argument("entry " + e.id + " lacks '" + key + "'");
    return it->second;
}

}  // namespace

TheoremResult run_theorem(const TheoremEntry& e, const std::vector<ReductionSchedule>& schedules)
{
    TheoremResult r;
    r.id = e.id;
    r.group = e.group;
    r.stratum = e.stratum;
    r.route = e.route;
    try {
        r.expected = canonical_rational(e.expected);
        StratumLabel label = parse_stratum_label(e.stratum);
        std::optional<Rational> value;
        if (e.route == "solver") {
            const std::string& name = field(e, "divisor");
            SolverMode mode = parse_solver_mode(field(e, "mode"));
            int g = label.signature.genus();
            int n = name == "psi1_minus_lambda" ? static_cast<int>(label.signature.orders.size()) : 0;
            DivisorClass d = class_library(name, g, n);
            NonvaryingProblem p{label.signature.orders, d, mode, resolve_zero_set(split_plus(field(e, "zero")), d)};
            NonvaryingResult s = nonvarying_solve(p);
            r.method = name + " on Mbar_{" + std::to_string(d.g()) + "," + std::to_string(d.n()) + "}, mode " +
                       to_string(mode) + ", zero " + field(e, "zero");
            for (const auto& res : s.residuals)
                r.notes.push_back("residual at '" + res.equation + "': " + to_string(res.value));
            if (!s.determined)
                r.notes.push_back(s.message);
            // mode B answers are only trusted from a consistent system
            if (s.determined && (mode == SolverMode::A || s.consistent()))
                value = s.L_plus;
        } else if (e.route == "hyperelliptic") {
            HyperellipticComponentSpec h{std::stoi(field(e, "type")), std::stoi(field(e, "g")), std::stoi(field(e, "k"))};
            r.method = "hyperelliptic closed form (" + field(e, "type") + "," + field(e, "g") + "," + field(e, "k") + ")";
            if (h.cover_signature() != label.signature)
                r.notes.push_back("closed form describes " + h.cover_signature().label());
            else
                value = hyperelliptic_Lplus(h);
        } else if (e.route == "filtration") {
            const std::string& id = field(e, "case");
            auto it = std::find_if(schedules.begin(), schedules.end(), [&](const auto& s) { return s.id == id; });
            if (it == schedules.end())
                throw std::invalid_argument("no schedule '" + id + "'");
            r.method = "filtration case " + id;
            if (QuadraticSignature(it->orders) != label.signature)
                r.notes.push_back("schedule orders do not match the stratum");
            else {
                Rational c1 = filtration_c1(*it);
                r.notes.push_back("c1/chi = " + to_string(c1));
                value = L_from_c1(c1, *it);
            }
        } else {
            throw std::invalid_argument("unknown route '" + e.route + "'");
        }
        if (value)
            r.computed = to_string(*value);
        r.status = r.computed && *r.computed == r.expected ? RowStatus::Match : RowStatus::Mismatch;
    } catch (const std::exception& ex) {
        r.notes.push_back(ex.what());
        r.status = RowStatus::Mismatch;
    }
    return r;
}

TheoremReport run_theorems(const std::vector<TheoremEntry>& entries, const std::vector<ReductionSchedule>& schedules)
{
    TheoremReport rep;
    for (const auto& e : entries)
        rep.rows.push_back(run_theorem(e, schedules));
    return rep;
}

namespace {

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json counts_json(const ReportCounts& c)
{
    return {{"rows", c.total()}, {"match", c.match}, {"mismatch", c.mismatch}, {"flagged-anomaly", c.flagged},
            {"skipped-over-limit", c.skipped}};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string join(const std::vector<std::string>& v, const char* sep)
{
    std::string out;
    for (const auto& s : v)
        out += (out.empty() ? "" : sep) + s;
    return out;
}

}  // namespace

nlohmann::ordered_json to_json(const VerificationReport& r, bool run_metadata)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& x : r.rows) {
        nlohmann::ordered_json j;
        j["id"] = x.id;
        j["stratum"] = x.stratum;
        j["tier"] = x.tier;
        j["status"] = to_string(x.status);
        j["expected"] = {{"index", x.expected_index}, {"L", x.expected_L}, {"L_plus", x.expected_L_plus}};
        j["computed"] = {{"index", opt(x.index)}, {"L", opt(x.L)}, {"L_plus", opt(x.L_plus)},
                         {"quotient", opt(x.computed_stratum)}, {"cover", opt(x.cover_stratum)}};
        j["notes"] = x.notes;
        if (run_metadata) {
            j["seconds"] = x.seconds;
            j["cache_hit"] = x.cache_hit;
        }
        rows.push_back(std::move(j));
    }
    return {{"kind", "verification"}, {"counts", counts_json(r.counts())}, {"rows", rows}};
}

nlohmann::ordered_json to_json(const TheoremReport& r)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"id", x.id},
                        {"group", x.group},
                        {"stratum", x.stratum},
                        {"route", x.route},
                        {"method", x.method},
                        {"status", to_string(x.status)},
                        {"expected", x.expected},
                        {"computed", opt(x.computed)},
                        {"notes", x.notes}});
    return {{"kind", "theorems"}, {"counts", counts_json(r.counts())}, {"rows", rows}};
}

std::string to_csv(const VerificationReport& r, bool run_metadata)
{
    std::string out = "id,stratum,status,expected_index,index,expected_L,L,expected_L_plus,L_plus,notes";
    out += run_metadata ? ",seconds,cache_hit\n" : "\n";
    for (const auto& x : r.rows) {
        out += csv_field(x.id) + "," + csv_field(x.stratum) + "," + to_string(x.status) + "," +
               std::to_string(x.expected_index) + "," + (x.index ? std::to_string(*x.index) : "") + "," +
               x.expected_L + "," + x.L.value_or("") + "," + x.expected_L_plus + "," + x.L_plus.value_or("") + "," +
               csv_field(join(x.notes, "; "));
        if (run_metadata)
            out += "," + std::to_string(x.seconds) + "," + (x.cache_hit ? "1" : "0");
        out += "\n";
    }
    return out;
}

std::string to_csv(const TheoremReport& r)
{
    std::string out = "id,group,stratum,route,status,expected,computed,notes\n";
    for (const auto& x : r.rows)
        out += x.id + "," + x.group + "," + csv_field(x.stratum) + "," + x.route + "," + to_string(x.status) + "," +
               x.expected + "," + x.computed.value_or("") + "," + csv_field(join(x.notes, "; ")) + "\n";
    return out;
}

std::string to_text(const VerificationReport& r, bool run_metadata)
{
    std::ostringstream out;
    for (const auto& x : r.rows) {
        out << x.id << "  " << x.stratum << "  " << to_string(x.status) << "\n";
        if (x.status != RowStatus::SkippedOverLimit) {
            out << "    index " << x.expected_index << " -> " << (x.index ? std::to_string(*x.index) : "-") << "\n";
            out << "    L " << x.expected_L << " -> " << x.L.value_or("-") << "\n";
            out << "    L_plus " << x.expected_L_plus << " -> " << x.L_plus.value_or("-") << "\n";
        }
        for (const auto& n : x.notes)
            out << "    note: " << n << "\n";
        if (run_metadata && x.status != RowStatus::SkippedOverLimit)
            out << "    " << x.seconds << " s" << (x.cache_hit ? ", cached" : "") << "\n";
    }
    auto c = r.counts();
    out << "rows " << c.total() << ": match " << c.match << ", mismatch " << c.mismatch << ", flagged-anomaly "
        << c.flagged << ", skipped-over-limit " << c.skipped << "\n";
    return out.str();
}

std::string to_text(const TheoremReport& r)
{
    std::ostringstream out;
    for (const auto& x : r.rows) {
        out << x.id << "  " << x.group << "  " << x.stratum << "  " << x.method << "  expected " << x.expected
            << "  computed " << x.computed.value_or("-") << "  " << to_string(x.status) << "\n";
        for (const auto& n : x.notes)
            out << "    note: " << n << "\n";
    }
    auto c = r.counts();
    out << "entries " << c.total() << ": match " << c.match << ", mismatch " << c.mismatch << "\n";
    return out.str();
}

}  // namespace tcurve
