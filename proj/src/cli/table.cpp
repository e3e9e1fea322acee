#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "pngd/cli.hpp"

namespace pngd::cli {

std::size_t DistTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InputError("table has no column '" + name + "'");
}

std::vector<double> DistTable::col(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
}

std::string DistTable::get(const std::string& key, const std::string& fallback) const {
    const auto it = meta.find(key);
    return it == meta.end() ? fallback : it->second;
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw InputError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void check_shape(const DistTable& t) {
    for (const auto& r : t.rows)
        if (r.size() != t.columns.size()) throw InputError("row width does not match the header");
}

}  // namespace

std::string to_csv(const DistTable& t) {
    check_shape(t);
    std::ostringstream out;
    for (const auto& [k, v] : t.meta) {
        if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos || v.find('\n') != std::string::npos)
            throw InputError("metadata key/value not representable in CSV: " + k);
        out << "# " << k << '=' << v << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fmt(r[i]);
        out << '\n';
    }
    return out.str();
}

DistTable from_csv(const std::string& text) {
    DistTable t;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) == 0) {
            if (header) throw InputError("metadata after the header row");
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw InputError("metadata line without '=': " + line);
            t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (line.empty()) continue;
        if (!header) {
            t.columns = split(line, ',');
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& f : split(line, ',')) row.push_back(parse_number(f));
        t.rows.push_back(std::move(row));
    }
    if (!header) throw InputError("CSV without a header row");
    check_shape(t);
    return t;
}

std::string to_json(const DistTable& t) {
    check_shape(t);
    nlohmann::json j;
    j["meta"] = t.meta;
    j["columns"] = t.columns;
    // JSON has no NaN/inf; such cells go out as strings
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (double v : r) {
            if (std::isfinite(v)) jr.push_back(v);
            else jr.push_back(fmt(v));
        }
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

DistTable from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    DistTable t;
    try {
        t.meta = j.at("meta").get<std::map<std::string, std::string>>();
        t.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& jr : j.at("rows")) {
            std::vector<double> r;
            for (const auto& v : jr) r.push_back(v.is_string() ? parse_number(v.get<std::string>()) : v.get<double>());
            t.rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("JSON table schema: ") + e.what());
    }
    check_shape(t);
    return t;
}

Format format_from_name(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw InputError("unknown format '" + name + "'");
}

Format format_from_path(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? Format::Json : Format::Csv;
}

std::string serialize(const DistTable& t, Format f) { return f == Format::Json ? to_json(t) : to_csv(t); }

DistTable parse(const std::string& text) {
    const auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && text[p] == '{' ? from_json(text) : from_csv(text);
}

DistTable read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_table(const DistTable& t, const std::string& path, Format f) {
    const std::string s = serialize(t, f);
    if (path.empty() || path == "-") {
        std::cout << s;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << s;
    if (!out) throw InputError("write failed: " + path);
}

Tolerances Tolerances::from_env() {
    Tolerances t;
    auto read = [](const char* name, double& v) {
        if (const char* s = std::getenv(name)) {
            double x = 0;
            try {
                x = parse_number(s);
            } catch (const InputError&) {
                throw InputError(std::string(name) + " is not a number");
            }
            if (!(x > 0)) throw InputError(std::string(name) + " must be positive");
            v = x;
        }
    };
    read("PNGD_KS_TOL", t.ks);
    read("PNGD_TV_TOL", t.tv);
    read("PNGD_FREDHOLM_TOL", t.fredholm);
    return t;
}

}  // namespace pngd::cli
