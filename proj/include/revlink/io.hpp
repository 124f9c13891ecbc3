#pragma once

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "profile.hpp"
#include "spherical.hpp"

namespace revlink::io {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

inline double parse_double(std::string_view text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw FormatError("cannot parse " + what + " from '" + t + "'");
    return v;
}

inline long long parse_int(std::string_view text, const std::string& what) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw FormatError("cannot parse " + what + " from '" + t + "'");
    return v;
}

// "%.15g"
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// "key=value,key=value"
inline std::map<std::string, double> parse_params(std::string_view text) {
    std::map<std::string, double> kv;
    if (trim(text).empty()) return kv;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw FormatError("expected key=value, got '" + item + "'");
        const std::string key = trim(std::string_view(item).substr(0, eq));
        kv[key] = parse_double(std::string_view(item).substr(eq + 1), key);
    }
    return kv;
}

// Sample table: optional header line, then `s,f,g` rows. '#' starts a comment.
inline std::vector<ProfileSample> read_samples(std::istream& in) {
    std::vector<ProfileSample> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw FormatError("line " + std::to_string(lineno) + ": expected 3 columns s,f,g");
        if (rows.empty() && cols[0] == "s") continue;
        const std::string where = "line " + std::to_string(lineno);
        rows.push_back({parse_double(cols[0], where + " s"), parse_double(cols[1], where + " f"), parse_double(cols[2], where + " g")});
    }
    return rows;
}

inline std::vector<ProfileSample> load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open sample file '" + path + "'");
    return read_samples(in);
}

// Surface spec: `sphere`, `ellipsoid:b=<b>`, `sdelta:delta=<d>,eps=<e>`, `file:<path>`.
inline ProfileSurface parse_surface(const std::string& spec) {
    const std::string s = trim(spec);
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "file") {
        if (rest.empty()) throw InvalidInput("file: surface spec needs a path");
        return from_samples(load_samples(rest), "file:" + rest);
    }
    const auto kv = parse_params(rest);
    auto need = [&](const std::string& k) {
        const auto it = kv.find(k);
        if (it == kv.end()) throw InvalidInput("surface '" + kind + "' needs parameter " + k);
        return it->second;
    };
    auto only = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* a : keys) ok = ok || k == a;
            if (!ok) throw InvalidInput("unknown parameter '" + k + "' for surface '" + kind + "'");
        }
    };
    if (kind == "sphere") {
        only({});
        return make_sphere();
    }
    if (kind == "ellipsoid") {
        only({"b"});
        return make_ellipsoid(need("b"));
    }
    if (kind == "sdelta") {
        only({"delta", "eps"});
        return make_pinched_sphere(need("delta"), kv.count("eps") ? kv.at("eps") : 0.1);
    }
    throw InvalidInput("unknown surface kind '" + kind + "'");
}

// Diagram file: one vertex `x,y,z` per line, components separated by blank lines.
inline MultiCurve read_diagram(std::istream& in) {
    MultiCurve mc;
    std::vector<Vec3> cur;
    std::string line;
    int lineno = 0;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            mc.components.emplace_back(cur);
        } catch (const FormatError&) {
            throw;
        } catch (const InvalidInput& e) {
            throw FormatError("diagram component " + std::to_string(mc.components.size()) + ": " + e.what());
        }
        cur.clear();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (trim(line).empty()) {
            flush();
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw FormatError("diagram line " + std::to_string(lineno) + ": expected x,y,z");
        const std::string where = "diagram line " + std::to_string(lineno);
        cur.push_back({parse_double(cols[0], where), parse_double(cols[1], where), parse_double(cols[2], where)});
    }
    flush();
    if (mc.components.empty()) throw FormatError("diagram has no components");
    return mc;
}

inline MultiCurve load_diagram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open diagram file '" + path + "'");
    return read_diagram(in);
}

inline void write_diagram(std::ostream& os, const MultiCurve& mc) {
    for (std::size_t k = 0; k < mc.components.size(); ++k) {
        if (k) os << '\n';
        for (const auto& v : mc.components[k].vertices()) os << fmt(v.x) << ',' << fmt(v.y) << ',' << fmt(v.z) << '\n';
    }
}

} // namespace revlink::io
