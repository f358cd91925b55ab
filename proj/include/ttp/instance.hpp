#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/format.hpp"

namespace ttp {

enum class EdgeWeightKind { Ceil2D, Euc2D };

enum class KpType { BoundedStronglyCorr, UncorrSimilarWeights, Uncorr };

inline constexpr KpType kAllKpTypes[] = {KpType::BoundedStronglyCorr, KpType::UncorrSimilarWeights,
                                         KpType::Uncorr};

// Short tag used in file names, CSV columns and model artifacts.
inline std::string_view kp_tag(KpType t)
{
    switch (t) {
    case KpType::BoundedStronglyCorr: return "bounded-strongly-corr";
    case KpType::UncorrSimilarWeights: return "uncorr-similar-weights";
    case KpType::Uncorr: return "uncorr";
    }
    return "uncorr";
}

// Header text as written by the public benchmark files.
inline std::string_view kp_header_text(KpType t)
{
    switch (t) {
    case KpType::BoundedStronglyCorr: return "bounded strongly corr";
    case KpType::UncorrSimilarWeights: return "uncorrelated, similar weights";
    case KpType::Uncorr: return "uncorrelated";
    }
    return "uncorrelated";
}

// Accepts either the tag or the header spelling, case-insensitively.
inline std::optional<KpType> parse_kp_type(std::string_view s)
{
    std::string low;
    for (char c : trim(s)) {
        low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (low.find("bounded") != std::string::npos) {
        return KpType::BoundedStronglyCorr;
    }
    if (low.find("similar") != std::string::npos) {
        return KpType::UncorrSimilarWeights;
    }
    if (low.find("uncorr") != std::string::npos) {
        return KpType::Uncorr;
    }
    return std::nullopt;
}

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Item {
    int city = 2;        // 1-based, never 1
    std::int64_t weight = 1;
    std::int64_t profit = 1;
    int id = 0;          // 0-based ordinal in file order
};

inline std::int64_t coord_distance(const Point& a, const Point& b, EdgeWeightKind kind)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    return kind == EdgeWeightKind::Ceil2D ? static_cast<std::int64_t>(std::ceil(d))
                                          : static_cast<std::int64_t>(std::lround(d));
}

struct TtpInstance {
    std::string name;
    std::string kp_text; // KNAPSACK DATA TYPE header value, verbatim
    std::vector<Point> coords;
    std::vector<Item> items;
    std::int64_t capacity = 0;
    double renting_ratio = 0.0;
    double v_max = 1.0;
    double v_min = 0.1;
    EdgeWeightKind edge_weight_kind = EdgeWeightKind::Ceil2D;

    int n() const noexcept { return static_cast<int>(coords.size()); }
    int m() const noexcept { return static_cast<int>(items.size()); }

    // Speed drop per unit weight; zero for an empty knapsack so speeds stay at v_max.
    double nu() const noexcept
    {
        return capacity > 0 ? (v_max - v_min) / static_cast<double>(capacity) : 0.0;
    }

    std::optional<KpType> kp_type() const { return parse_kp_type(kp_text); }

    std::int64_t total_item_weight() const noexcept
    {
        std::int64_t s = 0;
        for (const auto& it : items) {
            s += it.weight;
        }
        return s;
    }

    // C such that W = floor(C/11 * sum w); exact for generated instances.
    int capacity_factor() const
    {
        const auto sw = total_item_weight();
        if (sw == 0) {
            return 0;
        }
        return static_cast<int>(std::lround(11.0 * static_cast<double>(capacity) / static_cast<double>(sw)));
    }

    int item_factor() const { return n() > 1 ? m() / (n() - 1) : 0; }

    std::int64_t distance(int i, int j) const
    {
        if (i < 1 || j < 1 || i > n() || j > n()) {
            throw std::invalid_argument("city index out of range: " + std::to_string(i) + ", " +
                                        std::to_string(j));
        }
        if (i == j) {
            return 0;
        }
        return coord_distance(coords[i - 1], coords[j - 1], edge_weight_kind);
    }
};

inline void validate(const TtpInstance& inst)
{
    if (inst.n() < 2) {
        throw std::invalid_argument("instance needs at least 2 cities");
    }
    if (!(inst.v_max > inst.v_min && inst.v_min > 0.0)) {
        throw std::invalid_argument("speeds must satisfy v_max > v_min > 0");
    }
    if (inst.capacity < 0 || inst.renting_ratio < 0.0) {
        throw std::invalid_argument("capacity and renting ratio must be non-negative");
    }
    for (std::size_t k = 0; k < inst.items.size(); ++k) {
        const auto& it = inst.items[k];
        if (it.city < 2 || it.city > inst.n()) {
            throw std::invalid_argument("item " + std::to_string(k + 1) + " assigned to invalid city " +
                                        std::to_string(it.city));
        }
        if (it.weight < 1 || it.profit < 1) {
            throw std::invalid_argument("item " + std::to_string(k + 1) + " has non-positive weight or profit");
        }
        if (it.id != static_cast<int>(k)) {
            throw std::invalid_argument("item ids must be consecutive ordinals");
        }
    }
}

namespace detail {

inline std::string upper(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

inline bool starts_with_ci(std::string_view line, std::string_view prefix)
{
    if (line.size() < prefix.size()) {
        return false;
    }
    return upper(line.substr(0, prefix.size())) == upper(prefix);
}

} // namespace detail

// Reads the line-oriented benchmark layout. Items keep file order; ids are 0-based ordinals.
inline TtpInstance parse_ttp(std::istream& in)
{
    TtpInstance inst;
    std::optional<long long> dimension;
    std::optional<long long> item_count;
    std::optional<long long> capacity;
    std::optional<double> min_speed;
    std::optional<double> max_speed;
    std::optional<double> renting;
    bool have_name = false;
    bool have_kp = false;
    bool have_edge = false;

    std::string line;
    std::size_t lineno = 0;
    enum class Section { Header, Nodes, Items } section = Section::Header;
    std::size_t nodes_read = 0;

    auto require_header = [&](std::size_t at) {
        if (!have_name) throw ParseError(at, "missing header key PROBLEM NAME");
        if (!have_kp) throw ParseError(at, "missing header key KNAPSACK DATA TYPE");
        if (!dimension) throw ParseError(at, "missing header key DIMENSION");
        if (!item_count) throw ParseError(at, "missing header key NUMBER OF ITEMS");
        if (!capacity) throw ParseError(at, "missing header key CAPACITY OF KNAPSACK");
        if (!min_speed) throw ParseError(at, "missing header key MIN SPEED");
        if (!max_speed) throw ParseError(at, "missing header key MAX SPEED");
        if (!renting) throw ParseError(at, "missing header key RENTING RATIO");
        if (!have_edge) throw ParseError(at, "missing header key EDGE_WEIGHT_TYPE");
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (detail::starts_with_ci(t, "NODE_COORD_SECTION")) {
            require_header(lineno);
            if (*dimension < 2) {
                throw ParseError(lineno, "DIMENSION must be at least 2");
            }
            section = Section::Nodes;
            inst.coords.reserve(static_cast<std::size_t>(*dimension));
            continue;
        }
        if (detail::starts_with_ci(t, "ITEMS SECTION")) {
            if (section != Section::Nodes) {
                throw ParseError(lineno, "ITEMS SECTION before NODE_COORD_SECTION");
            }
            if (nodes_read != static_cast<std::size_t>(*dimension)) {
                throw ParseError(lineno, "dimension mismatch: declared " + std::to_string(*dimension) +
                                             " cities, read " + std::to_string(nodes_read));
            }
            section = Section::Items;
            inst.items.reserve(static_cast<std::size_t>(std::max(0LL, *item_count)));
            continue;
        }
        if (detail::starts_with_ci(t, "EOF")) {
            break;
        }
        if (section == Section::Header) {
            const auto colon = t.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError(lineno, "expected 'KEY: value' header line");
            }
            const auto key = detail::upper(trim(t.substr(0, colon)));
            const auto value = trim(t.substr(colon + 1));
            auto need_int = [&](std::optional<long long>& slot) {
                slot = parse_int(value);
                if (!slot) throw ParseError(lineno, "malformed integer for " + key);
            };
            auto need_real = [&](std::optional<double>& slot) {
                slot = parse_double(value);
                if (!slot) throw ParseError(lineno, "malformed number for " + key);
            };
            if (key == "PROBLEM NAME") {
                inst.name = std::string(value);
                have_name = true;
            } else if (key == "KNAPSACK DATA TYPE") {
                inst.kp_text = std::string(value);
                have_kp = true;
            } else if (key == "DIMENSION") {
                need_int(dimension);
            } else if (key == "NUMBER OF ITEMS") {
                need_int(item_count);
            } else if (key == "CAPACITY OF KNAPSACK") {
                need_int(capacity);
            } else if (key == "MIN SPEED") {
                need_real(min_speed);
            } else if (key == "MAX SPEED") {
                need_real(max_speed);
            } else if (key == "RENTING RATIO") {
                need_real(renting);
            } else if (key == "EDGE_WEIGHT_TYPE") {
                const auto v = detail::upper(value);
                if (v == "CEIL_2D") {
                    inst.edge_weight_kind = EdgeWeightKind::Ceil2D;
                } else if (v == "EUC_2D") {
                    inst.edge_weight_kind = EdgeWeightKind::Euc2D;
                } else {
                    throw ParseError(lineno, "unsupported EDGE_WEIGHT_TYPE " + v);
                }
                have_edge = true;
            } else {
                throw ParseError(lineno, "unknown header key " + key);
            }
            continue;
        }
        const auto fields = split_ws(t);
        if (section == Section::Nodes) {
            if (fields.size() != 3) {
                throw ParseError(lineno, "node row needs 'index x y'");
            }
            const auto idx = parse_int(fields[0]);
            const auto x = parse_double(fields[1]);
            const auto y = parse_double(fields[2]);
            if (!idx || !x || !y) {
                throw ParseError(lineno, "malformed number in node row");
            }
            if (*idx != static_cast<long long>(nodes_read + 1)) {
                throw ParseError(lineno, "node index out of order");
            }
            if (nodes_read >= static_cast<std::size_t>(*dimension)) {
                throw ParseError(lineno, "dimension mismatch: more node rows than DIMENSION");
            }
            inst.coords.push_back({*x, *y});
            ++nodes_read;
        } else {
            if (fields.size() != 4) {
                throw ParseError(lineno, "item row needs 'index profit weight city'");
            }
            const auto idx = parse_int(fields[0]);
            const auto p = parse_int(fields[1]);
            const auto w = parse_int(fields[2]);
            const auto c = parse_int(fields[3]);
            if (!idx || !p || !w || !c) {
                throw ParseError(lineno, "malformed number in item row");
            }
            if (*idx != static_cast<long long>(inst.items.size() + 1)) {
                throw ParseError(lineno, "item index out of order");
            }
            if (*c == 1) {
                throw ParseError(lineno, "item assigned to city 1");
            }
            if (*c < 1 || *c > *dimension) {
                throw ParseError(lineno, "item assigned to unknown city " + std::to_string(*c));
            }
            if (*w < 1 || *p < 1) {
                throw ParseError(lineno, "item weight and profit must be positive");
            }
            Item it;
            it.city = static_cast<int>(*c);
            it.profit = *p;
            it.weight = *w;
            it.id = static_cast<int>(inst.items.size());
            inst.items.push_back(it);
        }
    }
    if (section == Section::Header) {
        require_header(lineno);
        throw ParseError(lineno, "missing NODE_COORD_SECTION");
    }
    if (section == Section::Nodes) {
        throw ParseError(lineno, "missing ITEMS SECTION");
    }
    if (inst.items.size() != static_cast<std::size_t>(*item_count)) {
        throw ParseError(lineno, "item count mismatch: declared " + std::to_string(*item_count) + ", read " +
                                     std::to_string(inst.items.size()));
    }
    inst.capacity = *capacity;
    inst.v_min = *min_speed;
    inst.v_max = *max_speed;
    inst.renting_ratio = *renting;
    try {
        validate(inst);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
    return inst;
}

inline TtpInstance parse_ttp(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_ttp(in);
}

// Canonical text form; parse_ttp(serialize_ttp(x)) reproduces x bit for bit.
inline std::string serialize_ttp(const TtpInstance& inst)
{
    std::ostringstream os;
    os << "PROBLEM NAME: \t" << inst.name << '\n';
    os << "KNAPSACK DATA TYPE: " << inst.kp_text << '\n';
    os << "DIMENSION:\t" << inst.n() << '\n';
    os << "NUMBER OF ITEMS: \t" << inst.m() << '\n';
    os << "CAPACITY OF KNAPSACK: \t" << inst.capacity << '\n';
    os << "MIN SPEED: \t" << format_double(inst.v_min) << '\n';
    os << "MAX SPEED: \t" << format_double(inst.v_max) << '\n';
    os << "RENTING RATIO: \t" << format_double(inst.renting_ratio) << '\n';
    os << "EDGE_WEIGHT_TYPE:\t" << (inst.edge_weight_kind == EdgeWeightKind::Ceil2D ? "CEIL_2D" : "EUC_2D")
       << '\n';
    os << "NODE_COORD_SECTION\t(INDEX, X, Y): \n";
    for (int i = 0; i < inst.n(); ++i) {
        os << (i + 1) << '\t' << format_double(inst.coords[i].x) << '\t' << format_double(inst.coords[i].y)
           << '\n';
    }
    os << "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER): \n";
    for (const auto& it : inst.items) {
        os << (it.id + 1) << '\t' << it.profit << '\t' << it.weight << '\t' << it.city << '\n';
    }
    return os.str();
}

struct CoordinateSet {
    std::string name;
    std::vector<Point> coords;
    EdgeWeightKind edge_weight_kind = EdgeWeightKind::Ceil2D;
};

// TSPLIB .tsp reader; only coordinate-based 2-D edge weight types.
inline CoordinateSet read_tsp_coords(std::istream& in)
{
    CoordinateSet out;
    std::optional<long long> dimension;
    std::string line;
    std::size_t lineno = 0;
    bool in_nodes = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (detail::starts_with_ci(t, "EOF")) {
            break;
        }
        if (detail::starts_with_ci(t, "NODE_COORD_SECTION")) {
            if (!dimension) {
                throw ParseError(lineno, "missing header key DIMENSION");
            }
            in_nodes = true;
            continue;
        }
        if (!in_nodes) {
            const auto colon = t.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError(lineno, "expected 'KEY : value' header line");
            }
            const auto key = detail::upper(trim(t.substr(0, colon)));
            const auto value = trim(t.substr(colon + 1));
            if (key == "NAME") {
                out.name = std::string(value);
            } else if (key == "DIMENSION") {
                dimension = parse_int(value);
                if (!dimension) throw ParseError(lineno, "malformed integer for DIMENSION");
            } else if (key == "EDGE_WEIGHT_TYPE") {
                const auto v = detail::upper(value);
                if (v == "CEIL_2D") {
                    out.edge_weight_kind = EdgeWeightKind::Ceil2D;
                } else if (v == "EUC_2D") {
                    out.edge_weight_kind = EdgeWeightKind::Euc2D;
                } else {
                    throw ParseError(lineno, "unsupported EDGE_WEIGHT_TYPE " + v);
                }
            }
            continue;
        }
        const auto fields = split_ws(t);
        if (fields.size() != 3) {
            throw ParseError(lineno, "node row needs 'index x y'");
        }
        const auto x = parse_double(fields[1]);
        const auto y = parse_double(fields[2]);
        if (!parse_int(fields[0]) || !x || !y) {
            throw ParseError(lineno, "malformed number in node row");
        }
        out.coords.push_back({*x, *y});
    }
    if (!dimension || out.coords.size() != static_cast<std::size_t>(*dimension)) {
        throw ParseError(lineno, "dimension mismatch in NODE_COORD_SECTION");
    }
    return out;
}

} // namespace ttp
