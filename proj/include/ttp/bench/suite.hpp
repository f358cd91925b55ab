#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ttp/bench/csv.hpp"
#include "ttp/error.hpp"
#include "ttp/format.hpp"
#include "ttp/generator.hpp"
#include "ttp/instance.hpp"
#include "ttp/random.hpp"
#include "ttp/tour.hpp"

namespace ttp::bench {

namespace fs = std::filesystem;

inline constexpr int kSuiteItemFactors[] = {1, 5, 10};

// "uniform:N[:SEED]", "clustered:N[:SEED]" or a path to a coordinate file.
inline CoordinateSet load_coordinate_source(const std::string& source, std::uint64_t seed)
{
    const auto colon = source.find(':');
    const std::string kind = source.substr(0, colon);
    if ((kind == "uniform" || kind == "clustered") && colon != std::string::npos) {
        const auto rest = source.substr(colon + 1);
        const auto c2 = rest.find(':');
        const auto n = parse_int(rest.substr(0, c2));
        if (!n || *n < 2) throw std::invalid_argument("bad city count in coordinate source '" + source + "'");
        std::uint64_t s = derive_seed(seed, {hash_text(source)});
        if (c2 != std::string::npos) {
            const auto v = parse_int(rest.substr(c2 + 1));
            if (!v || *v < 0) throw std::invalid_argument("bad seed in coordinate source '" + source + "'");
            s = static_cast<std::uint64_t>(*v);
        }
        const int cities = static_cast<int>(*n);
        return kind == "uniform" ? uniform_coordinates("uni" + std::to_string(cities), cities, s)
                                 : clustered_coordinates("clu" + std::to_string(cities), cities, s);
    }
    std::ifstream in(source);
    if (!in) throw StageError("cannot open coordinate file " + source);
    auto cs = read_tsp_coords(in);
    if (cs.name.empty()) cs.name = fs::path(source).stem().string();
    return cs;
}

struct SuiteSpec {
    std::vector<CoordinateSet> coordinate_sets;
    std::vector<int> item_factors{std::begin(kSuiteItemFactors), std::end(kSuiteItemFactors)};
    std::vector<KpType> kp_types{std::begin(kAllKpTypes), std::end(kAllKpTypes)};
    std::vector<int> capacity_factors{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::uint64_t seed = 1;
};

struct ManifestEntry {
    std::string file; // relative to the manifest directory
    std::string instance;
    std::string coord_set;
    int n = 0;
    int m = 0;
    KpType kp = KpType::Uncorr;
    int item_factor = 1;
    int capacity_factor = 1;
    std::int64_t capacity = 0;
    double renting_ratio = 0.0;
};

inline const std::vector<std::string>& manifest_columns()
{
    static const std::vector<std::string> cols = {"file", "instance", "coord_set", "n", "m", "kp_type",
                                                  "F",    "C",        "W",         "R"};
    return cols;
}

inline CsvTable manifest_table(const std::vector<ManifestEntry>& entries)
{
    CsvTable t;
    t.header = manifest_columns();
    for (const auto& e : entries) {
        t.rows.push_back({e.file, e.instance, e.coord_set, std::to_string(e.n), std::to_string(e.m),
                          std::string(kp_tag(e.kp)), std::to_string(e.item_factor), std::to_string(e.capacity_factor),
                          std::to_string(e.capacity), format_double(e.renting_ratio)});
    }
    return t;
}

// Full factorial over the suite settings; writes one .ttp file per cell and manifest.csv.
inline std::vector<ManifestEntry> generate_suite(const SuiteSpec& spec, const fs::path& out_dir)
{
    for (int f : spec.item_factors) {
        if (!valid_item_factor(f)) throw std::invalid_argument("item factor " + std::to_string(f) + " not supported");
    }
    for (int c : spec.capacity_factors) {
        if (!valid_capacity_factor(c)) throw std::invalid_argument("capacity factor must be in 1..10");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw StageError("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<ManifestEntry> entries;
    for (const auto& cs : spec.coordinate_sets) {
        const auto tour = reference_tour(coordinate_instance(cs)).order();
        for (int f : spec.item_factors) {
            for (KpType kp : spec.kp_types) {
                for (int c : spec.capacity_factors) {
                    const auto seed = derive_seed(spec.seed, {hash_text(cs.name), static_cast<std::uint64_t>(f),
                                                              static_cast<std::uint64_t>(kp),
                                                              static_cast<std::uint64_t>(c)});
                    auto inst = generate_instance(cs, f, kp, c, tour, seed);
                    ManifestEntry e;
                    e.instance = inst.name;
                    e.file = inst.name + ".ttp";
                    e.coord_set = cs.name;
                    e.n = inst.n();
                    e.m = inst.m();
                    e.kp = kp;
                    e.item_factor = f;
                    e.capacity_factor = c;
                    e.capacity = inst.capacity;
                    e.renting_ratio = inst.renting_ratio;
                    const auto path = out_dir / e.file;
                    std::ofstream os(path, std::ios::binary);
                    os << serialize_ttp(inst);
                    if (!os) throw StageError("cannot write " + path.string());
                    entries.push_back(std::move(e));
                }
            }
        }
    }
    write_csv_file(out_dir / "manifest.csv", manifest_table(entries));
    return entries;
}

struct LoadedInstance {
    ManifestEntry entry;
    TtpInstance instance;
};

// Accepts a manifest.csv or a directory holding one.
inline fs::path manifest_path(const fs::path& p)
{
    return fs::is_directory(p) ? p / "manifest.csv" : p;
}

inline std::vector<ManifestEntry> read_manifest(const fs::path& p)
{
    const auto path = manifest_path(p);
    if (!fs::exists(path)) throw StageError("missing instance manifest " + path.string());
    const auto t = read_csv_file(path);
    const auto ci = [&](const char* name) { return t.require(name); };
    const auto c_file = ci("file"), c_inst = ci("instance"), c_set = ci("coord_set"), c_n = ci("n"), c_m = ci("m"),
               c_kp = ci("kp_type"), c_f = ci("F"), c_c = ci("C"), c_w = ci("W"), c_r = ci("R");
    std::vector<ManifestEntry> out;
    for (const auto& r : t.rows) {
        ManifestEntry e;
        e.file = r[c_file];
        e.instance = r[c_inst];
        e.coord_set = r[c_set];
        e.n = static_cast<int>(csv_int(r[c_n], "n"));
        e.m = static_cast<int>(csv_int(r[c_m], "m"));
        const auto kp = parse_kp_type(r[c_kp]);
        if (!kp) throw ParseError(0, "unknown kp_type '" + r[c_kp] + "' in " + path.string());
        e.kp = *kp;
        e.item_factor = static_cast<int>(csv_int(r[c_f], "F"));
        e.capacity_factor = static_cast<int>(csv_int(r[c_c], "C"));
        e.capacity = csv_int(r[c_w], "W");
        e.renting_ratio = csv_double(r[c_r], "R");
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<LoadedInstance> load_instances(const fs::path& p)
{
    const auto path = manifest_path(p);
    const auto dir = path.parent_path();
    std::vector<LoadedInstance> out;
    for (auto& e : read_manifest(path)) {
        const auto file = dir / e.file;
        std::ifstream in(file, std::ios::binary);
        if (!in) throw StageError("missing instance file " + file.string());
        auto inst = parse_ttp(in);
        out.push_back({std::move(e), std::move(inst)});
    }
    return out;
}

} // namespace ttp::bench
