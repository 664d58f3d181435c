#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "liouville/generator.hpp"

namespace liouville {

/// Key-value config file: one `key = value` per line, '#' comments. Keys are
/// documented in the README; unknown keys are errors (typos should not pass
/// silently). CLI flags override file values.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not 'key = value': " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config key '" + key + "' expects a boolean, got '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v, const std::string& key) {
    std::istringstream in(v);
    T out;
    in >> out;
    if (!in || !(in >> std::ws).eof())
        throw config_error("config key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

} // namespace detail

/// Applies config-file keys onto a GeneratorConfig.
inline void apply_config(GeneratorConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, v] : kv) {
        if (key == "tower") cfg.fixed_tower = parse_tower(v);
        else if (key == "tower_depth_min") cfg.tower_depth_min = detail::parse_num<int>(v, key);
        else if (key == "tower_depth_max") cfg.tower_depth_max = detail::parse_num<int>(v, key);
        else if (key == "nesting_max") cfg.nesting_max = detail::parse_num<int>(v, key);
        else if (key == "deep_nesting_prob") cfg.deep_nesting_prob = detail::parse_num<double>(v, key);
        else if (key == "enable_specials") cfg.enable_specials = detail::parse_bool(v, key);
        else if (key == "special_prob") cfg.special_prob = detail::parse_num<double>(v, key);
        else if (key == "r") cfg.r = detail::parse_num<int>(v, key);
        else if (key == "q_deg_max") cfg.q_deg_max = detail::parse_num<int>(v, key);
        else if (key == "q_const_prob") cfg.q_const_prob = detail::parse_num<double>(v, key);
        else if (key == "coeff_const_prob") cfg.coeff_const_prob = detail::parse_num<double>(v, key);
        else if (key == "coeff_extra_var_prob") cfg.coeff_extra_var_prob = detail::parse_num<double>(v, key);
        else if (key == "coeff_deg_max") cfg.coeff_deg_max = detail::parse_num<int>(v, key);
        else if (key == "const_abs_max") cfg.const_abs_max = detail::parse_num<int>(v, key);
        else if (key == "proper_prob") cfg.proper_prob = detail::parse_num<double>(v, key);
        else if (key == "j_max") cfg.j_max = detail::parse_num<int>(v, key);
        else if (key == "k_max") cfg.k_max = detail::parse_num<int>(v, key);
        else if (key == "k_zero_prob") cfg.k_zero_prob = detail::parse_num<double>(v, key);
        else if (key == "b_deg_max") cfg.b_deg_max = detail::parse_num<int>(v, key);
        else if (key == "b_terms_max") cfg.b_terms_max = detail::parse_num<int>(v, key);
        else if (key == "normal") cfg.normal = detail::parse_bool(v, key);
        else if (key == "retry_budget") cfg.retry_budget = detail::parse_num<int>(v, key);
        else throw config_error("unknown config key '" + key + "'");
    }
    if (cfg.r < 1) throw config_error("r must be >= 1");
    if (cfg.q_deg_max < 1) throw config_error("q_deg_max must be >= 1");
    if (cfg.tower_depth_min < 0 || cfg.tower_depth_max < cfg.tower_depth_min)
        throw config_error("tower depth range is invalid");
}

inline GeneratorConfig load_generator_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    GeneratorConfig cfg;
    apply_config(cfg, parse_config_text(ss.str()));
    return cfg;
}

} // namespace liouville
