// revlink command-line front end.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revlink/revlink.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace revlink;

enum Exit { kOk = 0, kInvalid = 1, kValidation = 2, kNotLeftHanded = 3, kInconclusive = 4, kOracle = 5 };

// ---- logging ----

enum class Level { Debug = 0, Info, Warn, Error, Off };

Level log_level() {
    static const Level lvl = [] {
        const char* e = std::getenv("REVLINK_LOG");
        const std::string s = e ? e : "warn";
        if (s == "debug") return Level::Debug;
        if (s == "info") return Level::Info;
        if (s == "error") return Level::Error;
        if (s == "off") return Level::Off;
        return Level::Warn;
    }();
    return lvl;
}

void log(Level l, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (l >= log_level() && l != Level::Off) std::cerr << "[revlink " << names[static_cast<int>(l)] << "] " << msg << '\n';
}

// ---- options and output ----

struct Globals {
    double tol = 1e-10;
    double verdict_tol = 1e-6;
    int grid = 512;
    unsigned workers = 1;
    std::string out;
    std::string format = "auto";
};

double round15(double v) { return std::isfinite(v) ? std::stod(io::fmt(v)) : v; }

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InvalidInput("cannot open output file '" + path + "'");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string resolve_format(const Globals& g, const std::string& dflt) {
    const std::string f = g.format == "auto" ? dflt : g.format;
    return f;
}

json header(const std::string& command, const Globals& g, json config) {
    json h;
    h["tool"] = "revlink";
    h["version"] = version;
    h["command"] = command;
    h["config"] = std::move(config);
    h["tolerances"] = {{"quadrature_rel_tol", g.tol}, {"verdict_tol", g.verdict_tol}, {"grid", g.grid}};
    return h;
}

void csv_header(std::ostream& os, const json& h) {
    os << "# " << h["tool"].get<std::string>() << ' ' << h["version"].get<std::string>() << ' ' << h["command"].get<std::string>() << '\n';
    os << "# config " << h["config"].dump() << '\n';
    os << "# tolerances " << h["tolerances"].dump() << '\n';
}

// flat key,value rows for a nested object
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_number_float()) {
        rows.emplace_back(prefix, io::fmt(j.get<double>()));
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

void emit_report(const Globals& g, const json& h, const json& body) {
    Output out(g.out);
    if (resolve_format(g, "json") == "json") {
        json doc;
        doc["header"] = h;
        for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
        out.os() << doc.dump(2) << '\n';
    } else {
        csv_header(out.os(), h);
        out.os() << "key,value\n";
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(body, "", rows);
        for (const auto& [k, v] : rows) out.os() << k << ',' << v << '\n';
    }
}

QuadOptions quad(const Globals& g) { return QuadOptions{g.tol}; }

VerdictOptions verdict_options(const Globals& g) {
    VerdictOptions o;
    o.verdict_tol = g.verdict_tol;
    o.grid_n = g.grid;
    o.workers = g.workers;
    o.quad = quad(g);
    return o;
}

json surface_json(const ProfileSurface& S) {
    json j;
    j["name"] = S.name();
    j["params"] = json::array();
    for (double p : S.params()) j["params"].push_back(round15(p));
    j["s_min"] = round15(S.s_min());
    j["s_max"] = round15(S.s_max());
    const auto eq = S.equator();
    j["equator"] = {{"s_e", round15(eq.s_e)}, {"r_e", round15(eq.r_e)}};
    return j;
}

json curvature_json(const CurvatureReport& c) {
    return {{"k_min", round15(c.k_min)}, {"k_max", round15(c.k_max)}, {"s_at_min", round15(c.s_at_min)},
            {"s_at_max", round15(c.s_at_max)}, {"pinching", round15(c.delta)}};
}

json verdict_json(const Verdict& v) {
    json j;
    j["status"] = to_string(v.status);
    j["sup_mean_delta_u"] = round15(v.sup_mean_delta_u);
    j["sup_over_pi"] = round15(v.sup_mean_delta_u / num::pi);
    j["margin"] = round15(v.margin);
    j["sup_at_boundary"] = v.sup.at_boundary;
    j["argmax_level"] = round15(v.sup.argmax);
    j["equator_limit"] = round15(v.sup.limit.value);
    j["equator_limit_error"] = round15(v.sup.limit.error);
    j["asymptotic"] = v.asymptotic;
    if (v.witness) {
        const auto& w = *v.witness;
        j["witness"] = {{"level", round15(w.c)},
                        {"type", w.closed ? json(w.type.str()) : json(nullptr)},
                        {"closed", w.closed},
                        {"closure_residual", round15(w.residual)},
                        {"equator_crossings", w.crossings},
                        {"period_length", round15(w.period_length)},
                        {"turning_s_north", round15(w.turning_s_north)},
                        {"turning_s_south", round15(w.turning_s_south)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

// ---- commands ----

int run_analyze(const Globals& g, const std::string& command, const ProfileSurface& S, json config) {
    const json h = header(command, g, std::move(config));
    json body;
    const ValidationReport vr = validate(S, g.grid);
    if (!vr.passed) {
        body["surface"] = {{"name", S.name()}, {"s_min", round15(S.s_min())}, {"s_max", round15(S.s_max())}};
        body["status"] = "ValidationFailed";
        body["issues"] = json::array();
        for (const auto& is : vr.issues) body["issues"].push_back({{"check", is.check}, {"s", round15(is.s)}, {"detail", is.detail}});
        emit_report(g, h, body);
        return kValidation;
    }
    body["surface"] = surface_json(S);
    body["curvature"] = curvature_json(curvature_report(S, g.grid));
    try {
        const Verdict v = left_handed_verdict(S, verdict_options(g));
        body["status"] = to_string(v.status);
        body["verdict"] = verdict_json(v);
        emit_report(g, h, body);
        log(Level::Info, "verdict " + to_string(v.status));
        return v.status == VerdictStatus::LeftHanded ? kOk : kNotLeftHanded;
    } catch (const Inconclusive& e) {
        body["status"] = "Inconclusive";
        body["detail"] = e.what();
        emit_report(g, h, body);
        return kInconclusive;
    }
}

struct Range {
    double lo, hi, step;
};

// "b=lo..hi:step", "b=lo..hi:step=s" or "b=v"
Range parse_range(const std::string& text) {
    std::string t = io::trim(text);
    if (t.rfind("b=", 0) != 0) throw InvalidInput("range must start with 'b=': '" + text + "'");
    t = t.substr(2);
    const auto dots = t.find("..");
    if (dots == std::string::npos) {
        const double v = io::parse_double(t, "b");
        return {v, v, 1.0};
    }
    const auto colon = t.find(':', dots);
    if (colon == std::string::npos) throw InvalidInput("range needs a step: b=lo..hi:step");
    std::string step = t.substr(colon + 1);
    if (step.rfind("step=", 0) == 0) step = step.substr(5);
    Range r{io::parse_double(t.substr(0, dots), "range start"), io::parse_double(t.substr(dots + 2, colon - dots - 2), "range end"),
            io::parse_double(step, "range step")};
    if (!(r.step > 0) || !(r.hi >= r.lo)) throw InvalidInput("range needs lo <= hi and a positive step");
    return r;
}

int run_sweep_b(const Globals& g, const std::string& range) {
    const Range r = parse_range(range);
    const long n = static_cast<long>(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
    json rows = json::array();
    for (long i = 0; i < n; ++i) {
        const double b = round15(r.lo + i * r.step);
        const ProfileSurface S = make_ellipsoid(b);
        const auto cr = curvature_report(S, g.grid);
        const auto lim = equator_limit(S, quad(g));
        std::string verdict;
        try {
            verdict = to_string(left_handed_verdict(S, verdict_options(g)).status);
        } catch (const Inconclusive&) {
            verdict = "Inconclusive";
        }
        log(Level::Info, "b=" + io::fmt(b) + " " + verdict);
        rows.push_back({{"b", b}, {"pinching", round15(cr.delta)}, {"equator_limit", round15(lim.value)}, {"verdict", verdict}});
    }
    const json h = header("sweep", g, {{"range", range}});
    Output out(g.out);
    if (resolve_format(g, "csv") == "json") {
        out.os() << json{{"header", h}, {"rows", rows}}.dump(2) << '\n';
    } else {
        csv_header(out.os(), h);
        out.os() << "b,delta,equator_limit,verdict\n";
        for (const auto& row : rows)
            out.os() << io::fmt(row["b"]) << ',' << io::fmt(row["pinching"]) << ',' << io::fmt(row["equator_limit"]) << ','
                     << row["verdict"].get<std::string>() << '\n';
    }
    return kOk;
}

int run_sweep_levels(const Globals& g, const std::string& spec, int levels) {
    if (levels < 2) throw InvalidInput("--levels needs at least 2");
    const ProfileSurface S = io::parse_surface(spec);
    const LevelScan sc = scan_levels(S, levels, g.workers, quad(g));
    const json h = header("sweep", g, {{"surface", spec}, {"levels", levels}});
    Output out(g.out);
    if (resolve_format(g, "csv") == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < sc.c.size(); ++i)
            rows.push_back({{"c", round15(sc.c[i])}, {"delta_u_north", round15(sc.swing[i].delta_u_north)},
                            {"delta_u_south", round15(sc.swing[i].delta_u_south)}, {"mean_delta_u", round15(sc.swing[i].mean_delta_u)},
                            {"rotation_number", round15(sc.swing[i].mean_delta_u / num::pi)}});
        out.os() << json{{"header", h}, {"rows", rows}}.dump(2) << '\n';
    } else {
        csv_header(out.os(), h);
        out.os() << "c,delta_u_north,delta_u_south,mean_delta_u,rotation_number\n";
        for (std::size_t i = 0; i < sc.c.size(); ++i)
            out.os() << io::fmt(sc.c[i]) << ',' << io::fmt(sc.swing[i].delta_u_north) << ',' << io::fmt(sc.swing[i].delta_u_south) << ','
                     << io::fmt(sc.swing[i].mean_delta_u) << ',' << io::fmt(sc.swing[i].mean_delta_u / num::pi) << '\n';
    }
    return kOk;
}

int run_critical_b(const Globals& g, double btol) {
    const double b = critical_ellipsoid_b(btol, quad(g));
    const int digits = std::max(0, static_cast<int>(std::ceil(-std::log10(btol) - 1e-9)));
    char rounded[64];
    std::snprintf(rounded, sizeof rounded, "%.*f", digits, b);
    const json h = header("critical-b", g, {{"b_tol", btol}});
    Output out(g.out);
    if (resolve_format(g, "csv") == "json") {
        out.os() << json{{"header", h}, {"b_star", round15(b)}, {"b_star_rounded", rounded}, {"b_tol", btol}}.dump(2) << '\n';
    } else {
        out.os() << "b_star,b_tol\n" << rounded << ',' << io::fmt(btol) << '\n';
    }
    return kOk;
}

GeodesicType parse_type(const std::string& text) {
    std::string t = text;
    // accept the typographic minus sign
    for (std::size_t p; (p = t.find("\xE2\x88\x92")) != std::string::npos;) t.replace(p, 3, "-");
    const auto parts = io::split(t, ',');
    if (parts.size() != 2) throw InvalidInput("type must be p,q: '" + text + "'");
    const GeodesicType ty(static_cast<int>(io::parse_int(parts[0], "p")), static_cast<int>(io::parse_int(parts[1], "q")));
    if (!ty.reduced()) throw InvalidInput("type " + ty.str() + " is not primitive (gcd(p,q) must be 1)");
    return ty;
}

EquatorOrientation parse_equator(const std::string& s) {
    if (s == "plus" || s == "+" || s == "e+") return EquatorOrientation::Plus;
    if (s == "minus" || s == "-" || s == "e-") return EquatorOrientation::Minus;
    throw InvalidInput("equator must be plus or minus, got '" + s + "'");
}

int run_link(const Globals& g, const std::vector<std::string>& eqs, const std::vector<std::string>& types, const std::string& outer) {
    if (eqs.size() + types.size() != 2) throw InvalidInput("link needs exactly two curves (--equator and/or --type)");
    std::vector<GeodesicType> ts;
    for (const auto& t : types) ts.push_back(parse_type(t));
    HalfInt lk;
    json config{{"equator", eqs}, {"type", types}};
    if (eqs.size() == 2) {
        const auto a = parse_equator(eqs[0]), b = parse_equator(eqs[1]);
        lk = lk_disjoint_simple(a == b); // pushed-off copies: same direction coincide
    } else if (eqs.size() == 1) {
        lk = lk_equator_geodesic(ts[0], parse_equator(eqs[0]));
    } else {
        std::string o = outer;
        if (o.empty()) {
            if (ts[1].p == 0) o = "first";
            else if (ts[0].p == 0) o = "second";
            else throw InvalidInput("two geodesic types need --outer first|second");
        }
        if (o != "first" && o != "second") throw InvalidInput("--outer must be first or second");
        config["outer"] = o;
        lk = o == "first" ? lk_two_geodesics(ts[0], ts[1], true) : lk_two_geodesics(ts[1], ts[0], true);
    }
    Output out(g.out);
    const std::string f = resolve_format(g, "text");
    if (f == "json") {
        out.os() << json{{"header", header("link", g, config)}, {"lk", lk.str()}, {"lk_halves", lk.halves()}}.dump(2) << '\n';
    } else if (f == "csv") {
        out.os() << "lk,lk_halves\n" << lk.str() << ',' << lk.halves() << '\n';
    } else {
        out.os() << lk.str() << '\n';
    }
    return kOk;
}

std::string dump_diagram(const std::string& dir, const std::string& name, const MultiCurve& mc) {
    namespace fs = std::filesystem;
    const fs::path base = dir.empty() ? fs::temp_directory_path() : fs::path(dir);
    fs::create_directories(base);
    const fs::path p = base / name;
    std::ofstream f(p);
    io::write_diagram(f, mc);
    return p.string();
}

int run_oracle_sweep(const Globals& g, const std::string& spec, int max_p, int max_q, int pts, const std::string& dump_dir) {
    const ProfileSurface S = io::parse_surface(spec);
    OracleOptions o;
    o.max_p = max_p;
    o.max_q = max_q;
    o.grid_n = g.grid;
    o.workers = g.workers;
    o.quad = quad(g);
    o.pts_per_swing = pts;
    const auto rows = oracle_sweep(S, o);
    const json h = header("oracle", g, {{"surface", spec}, {"max_p", max_p}, {"max_q", max_q}, {"pts_per_swing", pts}});
    bool all = true;
    {
        Output out(g.out);
        if (resolve_format(g, "csv") == "json") {
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"type1", r.type1}, {"type2", r.type2}, {"lk_formula", r.formula.str()}, {"lk_oracle", r.oracle.str()}, {"match", r.match}});
            out.os() << json{{"header", h}, {"rows", arr}}.dump(2) << '\n';
        } else {
            csv_header(out.os(), h);
            out.os() << "type1,type2,lk_halves_formula,lk_halves_oracle,match\n";
            for (const auto& r : rows)
                out.os() << r.type1 << ',' << r.type2 << ',' << r.formula.halves() << ',' << r.oracle.halves() << ',' << (r.match ? 1 : 0) << '\n';
        }
    }
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (!rows[k].match) {
            all = false;
            const std::string path = dump_diagram(dump_dir, "oracle_mismatch_" + std::to_string(k) + ".txt", rows[k].diagram);
            std::cerr << "mismatch " << rows[k].type1 << " vs " << rows[k].type2 << ": formula " << rows[k].formula << ", oracle "
                      << rows[k].oracle << "; diagram written to " << path << '\n';
        }
    return all ? kOk : kOracle;
}

int run_oracle_diagram(const Globals& g, const std::string& path, const std::vector<std::string>& types, const std::vector<std::string>& eqs) {
    std::vector<GeodesicType> ts;
    for (const auto& t : types) ts.push_back(parse_type(t));
    if (!std::filesystem::exists(path)) throw InvalidInput("diagram file '" + path + "' does not exist");
    HalfInt formula, oracle;
    std::string label1, label2;
    bool ok = true;
    std::string reason;
    try {
        const MultiCurve mc = io::load_diagram(path);
        if (ts.size() == 1 && eqs.size() == 1 && mc.components.size() == 1) {
            const auto e = parse_equator(eqs[0]);
            formula = lk_equator_geodesic(ts[0], e);
            const SphericalCurve& c = mc.components[0];
            const double lat = choose_equator_latitude({c});
            const std::size_t cross = intersections(c, pushed_equator(e, lat)).size();
            if (cross != 2u * static_cast<std::size_t>(ts[0].q)) {
                ok = false;
                reason = "diagram meets the equator in " + std::to_string(cross) + " points, type needs " + std::to_string(2 * ts[0].q);
            }
            oracle = lk_lifted(c, pushed_equator(e, lat));
            label1 = to_string(e);
            label2 = type_label(ts[0]);
        } else if (ts.size() == 2 && eqs.empty() && mc.components.size() == 2) {
            formula = lk_two_geodesics(ts[0], ts[1], true);
            oracle = lk_lifted(mc.components[0], mc.components[1]);
            label1 = type_label(ts[0]);
            label2 = type_label(ts[1]);
        } else {
            throw InvalidInput("diagram mode needs one component with --type and --equator, or two components with two --type");
        }
    } catch (const FormatError& e) {
        ok = false;
        reason = std::string("malformed diagram: ") + e.what();
    } catch (const DegeneracyError& e) {
        ok = false;
        reason = std::string("degenerate diagram: ") + e.what();
    } catch (const OracleError& e) {
        ok = false;
        reason = std::string("oracle failure: ") + e.what();
    }
    ok = ok && formula == oracle;
    const json h = header("oracle", g, {{"diagram", path}, {"type", types}, {"equator", eqs}});
    Output out(g.out);
    if (resolve_format(g, "csv") == "json") {
        out.os() << json{{"header", h}, {"type1", label1}, {"type2", label2}, {"lk_formula", formula.str()}, {"lk_oracle", oracle.str()}, {"match", ok}, {"detail", reason}}.dump(2)
                 << '\n';
    } else {
        csv_header(out.os(), h);
        out.os() << "type1,type2,lk_halves_formula,lk_halves_oracle,match\n";
        out.os() << label1 << ',' << label2 << ',' << formula.halves() << ',' << oracle.halves() << ',' << (ok ? 1 : 0) << '\n';
    }
    if (!ok) {
        std::cerr << "oracle mismatch for diagram " << path;
        if (!reason.empty()) std::cerr << ": " << reason;
        std::cerr << '\n';
        return kOracle;
    }
    return kOk;
}

int run_trace(const Globals& g, const std::string& spec, double c, double length, double stride, bool south) {
    const ProfileSurface S = io::parse_surface(spec);
    const GeodesicState x0 = equator_launch(S, c, !south);
    const json h = header("trace", g, {{"surface", spec}, {"c", c}, {"length", length}, {"stride", stride}, {"south", south}});
    Output out(g.out);
    csv_header(out.os(), h);
    write_trajectory_csv(out.os(), S, x0, length, stride, g.tol);
    return kOk;
}

// Lets `--type -2,1` through: a value that starts with '-' is glued to its option.
std::vector<std::string> normalize_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        const bool takes_signed = a == "--type" || a == "--c" || a == "--level";
        if (takes_signed && i + 1 < args.size() && !args[i + 1].empty() && (args[i + 1][0] == '-' || args[i + 1].rfind("\xE2\x88\x92", 0) == 0)) {
            out.push_back(a + "=" + args[i + 1]);
            ++i;
        } else {
            out.push_back(a);
        }
    }
    std::reverse(out.begin(), out.end()); // CLI11 consumes a reversed vector
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Left-handedness of geodesic flows on spheres of revolution", "revlink"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(revlink::version));
    Globals g;
    auto add_globals = [&](CLI::App* a) {
        a->add_option("--tol", g.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
        a->add_option("--verdict-tol", g.verdict_tol, "distance below 2 pi required for LeftHanded")->check(CLI::PositiveNumber)->capture_default_str();
        a->add_option("--grid", g.grid, "number of Clairaut levels scanned")->check(CLI::Range(128, 1 << 20))->capture_default_str();
        a->add_option("--workers", g.workers, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
        a->add_option("--out", g.out, "output file (default stdout)");
        a->add_option("--format", g.format, "csv, json, text or auto")->check(CLI::IsMember({"csv", "json", "text", "auto"}));
    };
    add_globals(&app);

    std::string surface;
    auto* analyze = app.add_subcommand("analyze", "verdict and curvature report for a surface");
    analyze->add_option("--surface", surface, "sphere | ellipsoid:b=B | sdelta:delta=D,eps=E | file:PATH")->required();

    double delta = 0.25, eps = 0.1;
    auto* sdelta = app.add_subcommand("sdelta", "analyze the pinched sphere S_delta");
    sdelta->add_option("--delta", delta, "pinching in (0, 1]")->required();
    sdelta->add_option("--eps", eps, "equatorial band half-width in (0, 0.15]")->capture_default_str();

    std::string range;
    int levels = 0;
    auto* sweep = app.add_subcommand("sweep", "ellipsoid parameter sweep or level sweep");
    auto* range_opt = sweep->add_option("--range", range, "b=lo..hi:step");
    sweep->add_option("--surface", surface, "surface for a level sweep");
    sweep->add_option("--levels", levels, "number of levels for a level sweep")->excludes(range_opt);

    double btol = 1e-4;
    auto* critical = app.add_subcommand("critical-b", "critical ellipsoid axis ratio");
    critical->add_option("--b-tol", btol, "bracket width")->check(CLI::Range(1e-6, 1.0))->capture_default_str();

    std::vector<std::string> eqs, types;
    std::string outer;
    auto* link = app.add_subcommand("link", "closed-form linking numbers");
    link->add_option("--equator", eqs, "plus | minus (repeatable)");
    link->add_option("--type", types, "p,q (repeatable)");
    link->add_option("--outer", outer, "first | second: which type lies on the outer torus");

    int max_p = 6, max_q = 3, pts = 120;
    std::string diagram, dump_dir;
    auto* oracle = app.add_subcommand("oracle", "compare closed forms with the diagram computation");
    oracle->add_option("--surface", surface, "surface spec");
    oracle->add_option("--max-p", max_p, "largest |p|")->check(CLI::Range(1, 50))->capture_default_str();
    oracle->add_option("--max-q", max_q, "largest q")->check(CLI::Range(1, 20))->capture_default_str();
    oracle->add_option("--pts-per-swing", pts, "polyline vertices per half swing")->check(CLI::Range(8, 100000))->capture_default_str();
    oracle->add_option("--diagram", diagram, "check a diagram file instead of sweeping");
    oracle->add_option("--type", types, "p,q claimed for the diagram (repeatable)");
    oracle->add_option("--equator", eqs, "plus | minus for a one-component diagram");
    oracle->add_option("--dump-dir", dump_dir, "where mismatching diagrams are written");

    double level = 0.0, length = 100.0, stride = 0.1;
    bool south = false;
    auto* trace = app.add_subcommand("trace", "dump a geodesic trajectory launched from the equator");
    trace->add_option("--surface", surface, "surface spec")->required();
    trace->add_option("--c,--level", level, "Clairaut level (0 for a meridian)")->required();
    trace->add_option("--length", length, "arclength")->check(CLI::PositiveNumber)->capture_default_str();
    trace->add_option("--stride", stride, "output spacing")->check(CLI::PositiveNumber)->capture_default_str();
    trace->add_flag("--south", south, "launch southward");

    for (auto* sc : {analyze, sdelta, sweep, critical, link, oracle, trace}) sc->fallthrough();

    try {
        app.parse(normalize_args(argc, argv));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*analyze) return run_analyze(g, "analyze", io::parse_surface(surface), {{"surface", surface}});
        if (*sdelta)
            return run_analyze(g, "sdelta", make_pinched_sphere(delta, eps), {{"surface", "sdelta:delta=" + io::fmt(delta) + ",eps=" + io::fmt(eps)}});
        if (*sweep) {
            if (!range.empty()) return run_sweep_b(g, range);
            if (levels > 0 && !surface.empty()) return run_sweep_levels(g, surface, levels);
            throw InvalidInput("sweep needs --range b=lo..hi:step, or --surface with --levels");
        }
        if (*critical) return run_critical_b(g, btol);
        if (*link) return run_link(g, eqs, types, outer);
        if (*oracle) {
            if (!diagram.empty()) return run_oracle_diagram(g, diagram, types, eqs);
            if (surface.empty()) throw InvalidInput("oracle needs --surface or --diagram");
            return run_oracle_sweep(g, surface, max_p, max_q, pts, dump_dir);
        }
        if (*trace) return run_trace(g, surface, level, length, stride, south);
    } catch (const ValidationError& e) {
        log(Level::Error, e.what());
        return kValidation;
    } catch (const NonPositiveCurvature& e) {
        log(Level::Error, e.what());
        return kValidation;
    } catch (const MultipleCriticalPoints& e) {
        log(Level::Error, e.what());
        return kValidation;
    } catch (const PoleProximityError& e) {
        log(Level::Error, e.what());
        return kValidation;
    } catch (const InvalidInput& e) {
        log(Level::Error, e.what());
        return kInvalid;
    } catch (const Inconclusive& e) {
        log(Level::Error, e.what());
        return kInconclusive;
    } catch (const NonConvergence& e) {
        log(Level::Error, e.what());
        return kInconclusive;
    } catch (const IntegrationError& e) {
        log(Level::Error, e.what());
        return kInconclusive;
    } catch (const OracleError& e) {
        log(Level::Error, e.what());
        return kOracle;
    } catch (const DegeneracyError& e) {
        log(Level::Error, e.what());
        return kOracle;
    } catch (const std::exception& e) {
        log(Level::Error, e.what());
        return kInvalid;
    }
    return kInvalid;
}
