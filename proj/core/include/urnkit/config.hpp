#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urnkit/model.hpp"

namespace urnkit {

// Flat key=value experiment config with dotted section prefixes, e.g.
//   model.h11 = 2
//   model.skew = identity
//   analysis.seed = 42
// '#' starts a comment; blank lines are ignored.
class ExperimentConfig {
public:
    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<std::uint64_t> get_u64_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    // model.* keys -> UrnConfig. Throws std::invalid_argument on missing or
    // malformed keys; does not run validate_config.
    UrnConfig urn_config() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

// parse "0:0;0.25:0.6;1:1" into table knots
std::vector<std::pair<double, double>> parse_knots(const std::string& text);

}  // namespace urnkit
