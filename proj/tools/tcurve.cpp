#include "tcurve/filtration.hpp"
#include "tcurve/harness.hpp"
#include "tcurve/lyapunov.hpp"
#include "tcurve/nonvarying.hpp"
#include "tcurve/orbit.hpp"
#include "tcurve/pic.hpp"
#include "tcurve/quotient.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace tcurve;
using Json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::string format = "text";
    std::string cache_dir;
    int jobs = 1;
};

std::filesystem::path cache_dir(const Globals& g)
{
    if (!g.cache_dir.empty())
        return g.cache_dir;
    if (const char* env = std::getenv("TCURVE_CACHE_DIR"); env && *env)
        return env;
    return {};
}

Json cylinders_json(const std::vector<Cylinder>& cyl)
{
    Json a = Json::array();
    for (const auto& c : cyl)
        a.push_back({c.width, c.height});
    return a;
}

Json quotient_json(const QuotientStructure& q)
{
    return {{"sigma", print_cycles(q.sigma)},
            {"quotient", q.signature.label()},
            {"base_genus", q.base_genus},
            {"fixed", {{"vertices", q.census.vertices},
                       {"regular_vertices", q.census.regular_vertices},
                       {"edge_midpoints", q.census.edge_midpoints},
                       {"square_centers", q.census.square_centers}}}};
}

Json rationals(const std::vector<Rational>& v)
{
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

void emit(const Json& j, const Globals& g, const std::string& text)
{
    if (g.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// csv for flat key/value objects
std::string flat_csv(const Json& j)
{
    std::string head, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
        head += (head.empty() ? "" : ",") + it.key();
        std::string v = it->is_string() ? it->get<std::string>() : it->dump();
        if (v.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char c : v)
                q += c == '"' ? std::string("\"\"") : std::string(1, c);
            v = q + "\"";
        }
        row += (row.empty() ? "" : ",") + v;
    }
    return head + "\n" + row + "\n";
}

Origami load_surface(const std::string& path)
{
    Origami o = parse_surface(read_text_file(path));
    if (!is_connected(o))
        throw std::invalid_argument("disconnected surface");
    return o;
}

int cmd_analyze(const Globals& g, const std::string& path)
{
    Origami o = load_surface(path);
    AbelianSignature s = stratum_of(o);
    Json j;
    j["squares"] = o.size();
    j["r"] = print_cycles(o.r);
    j["u"] = print_cycles(o.u);
    j["genus"] = s.genus();
    j["stratum"] = s.label();
    j["regular_vertices"] = s.regular_points;
    j["cylinders"] = cylinders_json(horizontal_cylinders(o));
    j["lattice_index"] = period_lattice_index(o);
    bool all_even = std::all_of(s.orders.begin(), s.orders.end(), [](int m) { return m % 2 == 0; });
    j["spin_parity"] = all_even ? Json(to_string(spin_parity(o))) : Json(nullptr);
    Json qs = Json::array();
    for (const auto& q : quotient_structures(o))
        qs.push_back(quotient_json(q));
    j["involutions"] = qs;

    std::ostringstream t;
    t << "squares " << o.size() << "\nr = " << print_cycles(o.r) << "\nu = " << print_cycles(o.u) << "\n";
    t << "genus " << s.genus() << ", stratum " << s.label() << "\n";
    t << "horizontal cylinders (width,height):";
    for (const auto& c : horizontal_cylinders(o))
        t << " (" << c.width << "," << c.height << ")";
    t << "\nperiod lattice index " << period_lattice_index(o) << "\n";
    if (all_even)
        t << "spin parity " << to_string(spin_parity(o)) << "\n";
    for (const auto& q : qs)
        t << "involution " << q["sigma"].get<std::string>() << " -> " << q["quotient"].get<std::string>()
          << " (base genus " << q["base_genus"].get<int>() << ")\n";
    if (qs.empty())
        t << "no involution with quotient a half-translation surface\n";
    if (g.format == "csv") {
        Json flat = j;
        flat["cylinders"] = j["cylinders"].dump();
        flat["involutions"] = j["involutions"].size();
        std::cout << flat_csv(flat);
        return 0;
    }
    emit(j, g, t.str());
    return 0;
}

int cmd_orbit(const Globals& g, const std::string& path, std::uint64_t max_size, std::uint64_t max_memory)
{
    Origami o = load_surface(path);
    OrbitOptions opts;
    opts.jobs = g.jobs;
    opts.cache_dir = cache_dir(g);
    opts.limits.max_size = max_size;
    opts.limits.max_memory = max_memory;
    OrbitSummary orb = enumerate_orbit(o, opts);

    Json j;
    j["complete"] = orb.complete;
    j["index"] = orb.index;
    j["stratum"] = orb.stratum.label();
    j["cache_hit"] = orb.cache_hit;
    j["resumed"] = orb.resumed;
    std::ostringstream t;
    t << "stratum " << orb.stratum.label() << "\n";
    if (!orb.complete) {
        j["processed"] = orb.processed;
        t << "incomplete: " << orb.index << " surfaces reached, " << orb.processed << " expanded\n";
        if (g.format == "csv")
            std::cout << flat_csv(j);
        else
            emit(j, g, t.str());
        return 3;
    }
    j["cusps"] = orb.cusp_count;
    Json widths = Json::object();
    for (auto [w, c] : orb.cusp_widths)
        widths[std::to_string(w)] = c;
    j["cusp_widths"] = widths;
    Rational L = lyapunov_sum(orb, orb.stratum);
    j["kappa"] = to_string(kappa_abelian(orb.stratum));
    j["L"] = to_string(L);
    t << "index " << orb.index << ", cusps " << orb.cusp_count << "\n";
    t << "L = " << to_string(L) << "\n";
    Json qs = Json::array();
    for (const auto& q : quotient_structures(o)) {
        TeichCurveReport r = teich_report(orb, q.signature);
        Json x = quotient_json(q);
        x["chi"] = to_string(r.chi);
        x["kappa"] = to_string(r.kappa_quotient);
        x["L_plus"] = to_string(r.L_plus);
        x["L_minus"] = to_string(r.L_minus);
        x["c"] = to_string(r.c);
        x["slope"] = r.slope ? Json(to_string(*r.slope)) : Json(nullptr);
        x["C_lambda"] = to_string(r.intersections.C_lambda);
        x["C_delta"] = to_string(r.intersections.C_delta);
        x["S_squared"] = rationals(r.intersections.self);
        x["noether_defect"] = to_string(noether_defect(r.intersections, q.signature));
        qs.push_back(x);
        t << q.signature.label() << ": L+ = " << to_string(r.L_plus) << ", L- = " << to_string(r.L_minus)
          << ", c = " << to_string(r.c) << (r.slope ? ", slope = " + to_string(*r.slope) : std::string()) << "\n";
    }
    j["quotients"] = qs;
    if (g.format == "csv") {
        Json flat = j;
        flat["cusp_widths"] = widths.dump();
        flat["quotients"] = qs.size();
        std::cout << flat_csv(flat);
        return 0;
    }
    emit(j, g, t.str());
    return 0;
}

void print_report(const Globals& g, const VerificationReport& r, bool timing)
{
    if (g.format == "json")
        std::cout << to_json(r, timing).dump(2) << "\n";
    else if (g.format == "csv")
        std::cout << to_csv(r, timing);
    else
        std::cout << to_text(r, timing);
}

int cmd_verify(const Globals& g, const std::string& dataset, const std::string& anomalies, std::uint64_t max_index,
               bool timing)
{
    auto rows = parse_dataset(read_text_file(dataset));
    std::filesystem::path reg = anomalies;
    if (reg.empty())
        reg = std::filesystem::path(dataset).parent_path() / "anomalies.txt";
    std::vector<AnomalyEntry> flags;
    if (std::filesystem::exists(reg))
        flags = parse_anomalies(read_text_file(reg));
    VerifyOptions opts;
    opts.max_index = max_index;
    opts.jobs = g.jobs;
    opts.cache_dir = cache_dir(g);
    auto rep = verify_dataset(rows, flags, opts);
    print_report(g, rep, timing);
    return rep.exit_code();
}

int cmd_theorems(const Globals& g, const std::string& table, const std::string& schedules)
{
    auto entries = parse_theorem_table(read_text_file(table));
    auto sched = parse_schedules(read_text_file(schedules));
    auto rep = run_theorems(entries, sched);
    if (g.format == "json")
        std::cout << to_json(rep).dump(2) << "\n";
    else if (g.format == "csv")
        std::cout << to_csv(rep);
    else
        std::cout << to_text(rep);
    return rep.exit_code();
}

Json class_json(const DivisorClass& d)
{
    Json coords = Json::object();
    for (const auto& [l, c] : d.coords())
        coords[to_string(l)] = to_string(c);
    return {{"g", d.g()}, {"n", d.n()}, {"class", d.str()}, {"coordinates", coords}};
}

int cmd_divisor(const Globals& g, const std::string& name, const std::string& file, int genus, int n,
                const std::string& push, bool psi)
{
    DivisorClass d = file.empty() ? class_library(name, genus, n) : parse_class_text(read_text_file(file));
    if (!push.empty()) {
        int a = 0, b = 0;
        char comma = 0;
        std::istringstream in(push);
        if (!(in >> a >> comma >> b) || comma != ',')
            throw std::invalid_argument("--push expects 'a,n'");
        d = pushforward_boundary(d, a, b);
    }
    if (psi)
        d = d.to_psi_basis();
    if (g.format == "json")
        std::cout << class_json(d).dump(2) << "\n";
    else if (g.format == "csv") {
        std::cout << "label,coefficient\n";
        for (const auto& [l, c] : d.coords())
            std::cout << "\"" << to_string(l) << "\"," << to_string(c) << "\n";
    } else
        std::cout << print_class_text(d);
    return 0;
}

int cmd_nonvarying(const Globals& g, const std::string& stratum, const std::string& name, const std::string& mode,
                   const std::string& zero, int n)
{
    StratumLabel label = parse_stratum_label(stratum);
    SolverMode m = parse_solver_mode(mode);
    int genus = label.signature.genus();
    if (n < 0)
        n = name == "psi1_minus_lambda" ? static_cast<int>(label.signature.orders.size()) : 0;
    DivisorClass d = class_library(name, genus, n);
    std::string z = zero.empty() ? (m == SolverMode::A ? "D" : "none") : zero;
    std::vector<std::string> tokens;
    std::stringstream ss(z);
    for (std::string t; std::getline(ss, t, '+');)
        tokens.push_back(t);
    NonvaryingResult r = nonvarying_solve({label.signature.orders, d, m, resolve_zero_set(tokens, d)});

    Json j;
    j["stratum"] = label.signature.label();
    j["divisor"] = d.str();
    j["mode"] = to_string(m);
    j["zero"] = z;
    j["determined"] = r.determined;
    j["L_plus"] = r.L_plus ? Json(to_string(*r.L_plus)) : Json(nullptr);
    j["c"] = r.c ? Json(to_string(*r.c)) : Json(nullptr);
    j["slope"] = r.slope ? Json(to_string(*r.slope)) : Json(nullptr);
    Json res = Json::array();
    for (const auto& x : r.residuals)
        res.push_back({{"equation", x.equation}, {"value", to_string(x.value)}});
    j["residuals"] = res;
    if (!r.message.empty())
        j["message"] = r.message;

    std::ostringstream t;
    t << label.signature.label() << " with " << name << ", mode " << to_string(m) << "\n";
    t << "L+ = " << (r.L_plus ? to_string(*r.L_plus) : "undetermined") << "\n";
    if (r.c)
        t << "c = " << to_string(*r.c) << "\n";
    if (r.slope)
        t << "slope = " << to_string(*r.slope) << "\n";
    for (const auto& x : r.residuals)
        t << "residual at '" << x.equation << "': " << to_string(x.value) << "\n";
    if (g.format == "csv") {
        Json flat = j;
        flat["residuals"] = res.size();
        std::cout << flat_csv(flat);
    } else
        emit(j, g, t.str());
    // mode B answers stand or fall with the whole system
    if (!r.determined || (m == SolverMode::B && !r.consistent()))
        return 1;
    return 0;
}

int cmd_filtration(const Globals& g, const std::string& id, const std::string& schedules)
{
    auto all = parse_schedules(read_text_file(schedules));
    std::vector<ReductionSchedule> pick;
    for (const auto& s : all)
        if (id == "all" || s.id == id)
            pick.push_back(s);
    if (pick.empty())
        throw std::invalid_argument("no schedule '" + id + "'");
    Json arr = Json::array();
    std::ostringstream t;
    int rc = 0;
    for (const auto& s : pick) {
        Rational c1 = filtration_c1(s);
        Rational L = L_from_c1(c1, s);
        bool ok = (!s.expected_c1 || *s.expected_c1 == c1) && (!s.expected_L || *s.expected_L == L);
        rc |= ok ? 0 : 1;
        arr.push_back({{"case", s.id},
                       {"label", s.label},
                       {"kind", s.kind == FiltrationKind::Quadratic ? "quadratic" : "abelian"},
                       {"c1", to_string(c1)},
                       {s.kind == FiltrationKind::Quadratic ? "L_plus" : "L", to_string(L)},
                       {"matches", ok}});
        t << s.id << " " << s.label << ": c1/chi = " << to_string(c1) << ", "
          << (s.kind == FiltrationKind::Quadratic ? "L+ = " : "L = ") << to_string(L) << (ok ? "" : "  MISMATCH") << "\n";
    }
    if (g.format == "csv") {
        std::cout << "case,label,kind,c1,L,matches\n";
        for (const auto& x : arr)
            std::cout << x["case"].get<std::string>() << "," << x["label"].get<std::string>() << ","
                      << x["kind"].get<std::string>() << "," << x["c1"].get<std::string>() << ","
                      << (x.contains("L") ? x["L"] : x["L_plus"]).get<std::string>() << ","
                      << (x["matches"].get<bool>() ? 1 : 0) << "\n";
    } else
        emit(pick.size() == 1 ? arr[0] : arr, g, t.str());
    return rc;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Teichmueller curves of square-tiled surfaces: orbits, Lyapunov sums, divisor classes"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--cache-dir", g.cache_dir, "Orbit cache directory (default: $TCURVE_CACHE_DIR)");
    app.add_option("--jobs,-j", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    const std::string data = default_data_dir().string();

    std::string file;
    auto* analyze = app.add_subcommand("analyze", "Invariants of one square-tiled surface");
    analyze->add_option("file", file, "Surface file")->required();

    std::uint64_t max_size = 0, max_memory = 0;
    auto* orbit = app.add_subcommand("orbit", "SL(2,Z) orbit, Lyapunov sums and intersection numbers");
    orbit->add_option("file", file, "Surface file")->required();
    orbit->add_option("--max-size", max_size, "Stop after this many surfaces (0: no limit)");
    orbit->add_option("--max-memory", max_memory, "Bytes of visited set kept in memory before spilling");

    std::string dataset = data + "/varying_examples.txt", anomalies;
    std::uint64_t max_index = 10000;
    bool timing = false;
    auto* verify = app.add_subcommand("verify", "Recompute the bundled square-tiled dataset");
    verify->add_option("dataset", dataset, "Dataset file");
    verify->add_option("--max-index", max_index, "Skip rows with a larger printed index");
    verify->add_option("--anomalies", anomalies, "Anomaly register (default: next to the dataset)");
    verify->add_flag("--timing", timing, "Include timing and cache fields");

    std::string table = data + "/nonvarying.txt", schedules = data + "/schedules.txt";
    auto* theorems = app.add_subcommand("theorems", "Check L+ for every bundled non-varying stratum");
    theorems->add_option("--table", table, "Stratum table");
    theorems->add_option("--schedules", schedules, "Filtration schedules");

    std::string name, class_file, push;
    int genus = -1, npts = -1;
    bool psi = false;
    auto* divisor = app.add_subcommand("divisor", "Print or push forward a divisor class");
    divisor->add_option("name", name, "Class library name");
    divisor->add_option("--file", class_file, "Read the class from a file instead");
    divisor->add_option("--g", genus, "Genus");
    divisor->add_option("--n", npts, "Marked points");
    divisor->add_option("--push", push, "Push forward along delta_{0;{a,n}}, given as a,n");
    divisor->add_flag("--psi", psi, "Print in the psi basis");

    std::string stratum, mode = "A", zero;
    auto* nonvarying = app.add_subcommand("nonvarying", "Solve for L+ from a divisor disjoint from the curve");
    nonvarying->add_option("--stratum", stratum, "Quadratic stratum, e.g. Q(5,3)")->required();
    nonvarying->add_option("--divisor", name, "Class library name")->required();
    nonvarying->add_option("--mode", mode, "A or B")->check(CLI::IsMember({"A", "B"}));
    nonvarying->add_option("--zero", zero, "Boundary labels assumed disjoint, joined by '+' (D, none, delta_i, ...)");
    nonvarying->add_option("--n", npts, "Marked points for classes with a free n");

    std::string case_id;
    auto* filtration = app.add_subcommand("filtration", "c1 and L from a reduction schedule");
    filtration->add_option("--case", case_id, "Schedule id, or 'all'")->required();
    filtration->add_option("--schedules", schedules, "Schedule file");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*analyze)
            return cmd_analyze(g, file);
        if (*orbit)
            return cmd_orbit(g, file, max_size, max_memory);
        if (*verify)
            return cmd_verify(g, dataset, anomalies, max_index, timing);
        if (*theorems)
            return cmd_theorems(g, table, schedules);
        if (*divisor) {
            if (name.empty() == class_file.empty())
                throw std::invalid_argument("give a class name or --file");
            return cmd_divisor(g, name, class_file, genus, npts, push, psi);
        }
        if (*nonvarying)
            return cmd_nonvarying(g, stratum, name, mode, zero, npts);
        if (*filtration)
            return cmd_filtration(g, case_id, schedules);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
