#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/format.hpp"

namespace ttp::bench {

// RFC 4180 subset: fields containing a comma, quote or newline are quoted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }

    std::size_t require(std::string_view name) const
    {
        auto c = column(name);
        if (!c) throw std::runtime_error("CSV has no column " + std::string(name));
        return *c;
    }
};

inline std::string csv_escape(std::string_view s)
{
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

inline void write_csv(std::ostream& os, const CsvTable& t)
{
    write_csv_row(os, t.header);
    for (const auto& r : t.rows) write_csv_row(os, r);
}

inline CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    std::size_t line = 1;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        if (t.header.empty()) {
            t.header = std::move(row);
        } else {
            if (row.size() != t.header.size()) {
                throw ParseError(line, "CSV row has " + std::to_string(row.size()) + " fields, expected " +
                                           std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(row));
        }
        row.clear();
        any = false;
    };
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_row();
            ++line;
        } else if (c != '\r') {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ParseError(line, "unterminated quoted CSV field");
    if (any || !field.empty() || !row.empty()) end_row();
    return t;
}

inline CsvTable read_csv_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw StageError("cannot open " + p.string());
    return read_csv(in);
}

inline void write_csv_file(const std::filesystem::path& p, const CsvTable& t)
{
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw StageError("cannot write " + p.string());
    write_csv(out, t);
    if (!out) throw StageError("write failed for " + p.string());
}

inline double csv_double(const std::string& s, std::string_view what)
{
    auto v = parse_double(s);
    if (!v) throw std::runtime_error("malformed number '" + s + "' in column " + std::string(what));
    return *v;
}

inline long long csv_int(const std::string& s, std::string_view what)
{
    auto v = parse_int(s);
    if (!v) throw std::runtime_error("malformed integer '" + s + "' in column " + std::string(what));
    return *v;
}

} // namespace ttp::bench
