#include "urnkit/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace urnkit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool ExperimentConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::invalid_argument("missing config key: " + key);
    return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: " + v);
    }
    if (pos != v.size()) throw std::invalid_argument("config key " + key + ": trailing junk: " + v);
    return out;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
    const std::string v = get_string(key);
    std::size_t pos = 0;
    std::uint64_t out;
    try {
        out = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an unsigned integer: " + v);
    }
    if (pos != v.size()) throw std::invalid_argument("config key " + key + ": trailing junk: " + v);
    return out;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

std::vector<std::uint64_t> ExperimentConfig::get_u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& part : split(get_string(key), ','))
        if (!part.empty()) out.push_back(std::stoull(part));
    return out;
}

std::vector<double> ExperimentConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& part : split(get_string(key), ','))
        if (!part.empty()) out.push_back(std::stod(part));
    return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

std::vector<std::pair<double, double>> parse_knots(const std::string& text) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& part : split(text, ';')) {
        if (part.empty()) continue;
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("table knot needs y:f form: " + part);
        knots.emplace_back(std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1)));
    }
    return knots;
}

UrnConfig ExperimentConfig::urn_config() const {
    UrnConfig cfg;
    cfg.matrix.h11 = get_double("model.h11");
    cfg.matrix.h12 = get_double("model.h12");
    cfg.matrix.h21 = get_double("model.h21");
    cfg.matrix.h22 = get_double("model.h22");
    cfg.y1_0 = get_double("model.y1_0", 1.0);
    cfg.y2_0 = get_double("model.y2_0", 1.0);

    std::string family = get_string("model.skew", "identity");
    if (family == "identity") {
        cfg.skew = SkewSpec::identity();
    } else if (family == "power") {
        cfg.skew = SkewSpec::power_family(get_double("model.skew_p", 2.0));
    } else if (family == "mirror_power") {
        cfg.skew = SkewSpec::mirror_power(get_double("model.skew_p", 2.0));
    } else if (family == "table") {
        cfg.skew = SkewSpec::table(parse_knots(get_string("model.table")),
                                   get_double("model.concave", 0.0) != 0.0);
    } else {
        throw std::invalid_argument("unknown skew family: " + family);
    }
    return cfg;
}

}  // namespace urnkit
