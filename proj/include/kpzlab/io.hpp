/*
   Copyright 2026 The kpzlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "json.hpp"

#include "kpzlab/environment.hpp"
#include "kpzlab/errors.hpp"

namespace kpzlab {

using json = nlohmann::ordered_json;

// Shortest decimal string that reads back to the same double.
inline std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c)
{
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double d) const { return format_number(d); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(V{}, c);
}

inline json cell_json(const Cell& c)
{
    struct V {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(double d) const { return std::isfinite(d) ? json(d) : json(nullptr); }
        json operator()(std::int64_t i) const { return i; }
        json operator()(const std::string& s) const { return s; }
        json operator()(bool b) const { return b; }
    };
    return std::visit(V{}, c);
}

inline json optional_number(const std::optional<double>& v)
{
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

// CSV body: header row then data rows, comma separated, no quoting needed
// (cells are numbers or plain identifiers).
inline std::string csv_body(const Table& t)
{
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
        os << '\n';
    }
    return os.str();
}

// Manifest and summary travel as '#'-prefixed JSON lines ahead of the body.
inline std::string render_csv(const json& manifest, const json& summary, const Table& t)
{
    std::string out = "# manifest " + manifest.dump() + "\n";
    out += "# summary " + summary.dump() + "\n";
    out += csv_body(t);
    return out;
}

inline json table_rows_json(const Table& t)
{
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) r[t.columns[c]] = cell_json(row[c]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string render_json(const json& manifest, const json& summary, const Table& t)
{
    json doc = json::object();
    doc["manifest"] = manifest;
    doc["rows"] = table_rows_json(t);
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

// Write via a sibling temporary and rename, so a failed run never leaves a
// partial file behind.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open '" + tmp.string() + "' for writing");
        os << content;
        os.flush();
        if (!os) throw ConfigError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ConfigError("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

inline json to_json(const EnvironmentSpec& s)
{
    json j = json::object();
    j["kind"] = std::string(to_string(s.kind));
    j["epsilon"] = s.epsilon;
    j["seed"] = s.seed;
    if (s.kind == EnvKind::uniform_bounded) j["bound"] = s.bound;
    return j;
}

inline EnvironmentSpec environment_spec_from_json(const json& j)
{
    EnvironmentSpec s;
    try {
        s.kind = env_kind_from_string(j.at("kind").get<std::string>());
        s.epsilon = j.at("epsilon").get<double>();
        s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("bound")) s.bound = j.at("bound").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("environment spec: ") + e.what());
    }
    validate(s);
    return s;
}

} // namespace kpzlab
