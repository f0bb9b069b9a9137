#include "scs/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scs {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value, const std::string& key) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError("config key '" + key + "': empty list element");
        }
        items.push_back(item);
    }
    if (items.empty()) {
        throw ConfigError("config key '" + key + "': empty list");
    }
    return items;
}

long long parse_int(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
    return v;
}

uint64_t parse_u64(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    if (!value.empty() && value[0] == '-') {
        throw ConfigError("config key '" + key + "': '" + value + "' must be >= 0");
    }
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
    return v;
}

double parse_real(const std::string& value, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a finite real");
    }
    return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("config key '" + key + "': expected 'true' or 'false', got '" +
                      value + "'");
}

const std::set<std::string> kKnownKeys = {
    "t1",        "r1",          "t2",          "r2",
    "snr_db_grid", "t_grid",    "interference_gain_db", "beacon_mode",
    "cycle_length_n", "alpha",  "trials",      "seed",
    "schemes",   "partial_extra", "fdd_power_boost", "threads",
    "output_path"};

}  // namespace

BeaconMode parse_beacon_mode(const std::string& name) {
    if (name == "ideal") return BeaconMode::Ideal;
    if (name == "sampled") return BeaconMode::SampleAverage;
    if (name == "projected_ideal") return BeaconMode::ProjectedIdeal;
    if (name == "projected_sampled") return BeaconMode::ProjectedSampleAverage;
    throw ConfigError("unknown beacon mode '" + name +
                      "' (expected ideal, sampled, projected_ideal, projected_sampled)");
}

Scheme parse_scheme(const std::string& name) {
    if (name == "scs") return Scheme::SCS;
    if (name == "fdd") return Scheme::FDD;
    if (name == "no_mitigation") return Scheme::NoMitigation;
    if (name == "partial_scs") return Scheme::PartialSCS;
    throw ConfigError("unknown scheme '" + name +
                      "' (expected scs, fdd, no_mitigation, partial_scs)");
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void ExperimentConfig::validate() const {
    try {
        antennas().validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (snr_db_grid.empty()) throw ConfigError("snr_db_grid must be non-empty");
    for (int t : t_grid) {
        if (t < 1) throw ConfigError("t_grid entries must be >= 1");
    }
    if (!t_grid.empty() && snr_db_grid.size() != 1) {
        throw ConfigError("a t_grid sweep requires exactly one snr_db_grid entry");
    }
    if (cycle_length_n < 1) throw ConfigError("cycle_length_n must be >= 1");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (partial_extra < 0) throw ConfigError("partial_extra must be >= 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

double ExperimentConfig::interference_gain() const {
    return std::pow(10.0, interference_gain_db / 10.0);
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "t1=" << t1 << "\n";
    out << "r1=" << r1 << "\n";
    out << "t2=" << t2 << "\n";
    out << "r2=" << r2 << "\n";
    out << "snr_db_grid=";
    for (size_t i = 0; i < snr_db_grid.size(); ++i) {
        if (i) out << ",";
        out << format_double(snr_db_grid[i]);
    }
    out << "\n";
    if (!t_grid.empty()) {
        out << "t_grid=";
        for (size_t i = 0; i < t_grid.size(); ++i) {
            if (i) out << ",";
            out << t_grid[i];
        }
        out << "\n";
    }
    out << "interference_gain_db=" << format_double(interference_gain_db) << "\n";
    out << "beacon_mode=" << beacon_mode_name(beacon_mode) << "\n";
    out << "cycle_length_n=" << cycle_length_n << "\n";
    out << "alpha=" << format_double(alpha) << "\n";
    out << "trials=" << trials << "\n";
    out << "seed=" << seed << "\n";
    out << "schemes=";
    bool first = true;
    for (Scheme s : {Scheme::SCS, Scheme::FDD, Scheme::NoMitigation, Scheme::PartialSCS}) {
        if (std::find(schemes.begin(), schemes.end(), s) == schemes.end()) continue;
        if (!first) out << ",";
        out << scheme_name(s);
        first = false;
    }
    out << "\n";
    out << "partial_extra=" << partial_extra << "\n";
    out << "fdd_power_boost=" << (fdd_power_boost ? "true" : "false") << "\n";
    return out.str();
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value, got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (kKnownKeys.find(key) == kKnownKeys.end()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        }
    }

    ExperimentConfig cfg;
    auto take = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (const auto* v = take("t1")) cfg.t1 = static_cast<int>(parse_int(*v, "t1"));
    if (const auto* v = take("r1")) cfg.r1 = static_cast<int>(parse_int(*v, "r1"));
    if (const auto* v = take("t2")) cfg.t2 = static_cast<int>(parse_int(*v, "t2"));
    if (const auto* v = take("r2")) cfg.r2 = static_cast<int>(parse_int(*v, "r2"));
    if (const auto* v = take("snr_db_grid")) {
        cfg.snr_db_grid.clear();
        for (const std::string& item : split_list(*v, "snr_db_grid")) {
            cfg.snr_db_grid.push_back(parse_real(item, "snr_db_grid"));
        }
    }
    if (const auto* v = take("t_grid")) {
        cfg.t_grid.clear();
        for (const std::string& item : split_list(*v, "t_grid")) {
            cfg.t_grid.push_back(static_cast<int>(parse_int(item, "t_grid")));
        }
    }
    if (const auto* v = take("interference_gain_db")) {
        cfg.interference_gain_db = parse_real(*v, "interference_gain_db");
    }
    if (const auto* v = take("beacon_mode")) cfg.beacon_mode = parse_beacon_mode(*v);
    if (const auto* v = take("cycle_length_n")) {
        cfg.cycle_length_n = static_cast<int>(parse_int(*v, "cycle_length_n"));
    }
    if (const auto* v = take("alpha")) cfg.alpha = parse_real(*v, "alpha");
    if (const auto* v = take("trials")) cfg.trials = static_cast<int>(parse_int(*v, "trials"));
    if (const auto* v = take("seed")) cfg.seed = parse_u64(*v, "seed");
    if (const auto* v = take("schemes")) {
        cfg.schemes.clear();
        std::set<int> seen;
        for (const std::string& item : split_list(*v, "schemes")) {
            const Scheme s = parse_scheme(item);
            if (seen.insert(static_cast<int>(s)).second) cfg.schemes.push_back(s);
        }
    }
    if (const auto* v = take("partial_extra")) {
        cfg.partial_extra = static_cast<int>(parse_int(*v, "partial_extra"));
    }
    if (const auto* v = take("fdd_power_boost")) {
        cfg.fdd_power_boost = parse_bool(*v, "fdd_power_boost");
    }
    if (const auto* v = take("threads")) {
        cfg.threads = static_cast<int>(parse_int(*v, "threads"));
    }
    if (const auto* v = take("output_path")) cfg.output_path = *v;

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

}  // namespace scs
