#pragma once

// Plain-text key=value config files. Blank lines and lines starting with
// '#' are ignored; unknown or duplicate keys are hard errors.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tqd/params.hpp"
#include "tqd/pulse.hpp"

namespace tqd {

struct Config {
    PhysicalParams params;
    std::string scenario = "counterdiabatic";
    std::optional<PulseAnsatz> ansatz;  // set when U0_meV/a1/w1/a2/w2 present
    int grid = 4001;
    int steps = 0;  // 0 = derive from tf
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key +
                                    "': " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("config: trailing junk in value for '" +
                                    key + "': " + v);
    return x;
}

}  // namespace detail

inline Config parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (kv.count(key))
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        kv[key] = val;
    }

    Config cfg;
    auto take = [&kv](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_num = [&take](const char* key, double& dst) -> bool {
        if (auto v = take(key)) {
            dst = detail::to_double(key, *v);
            return true;
        }
        return false;
    };

    take_num("g", cfg.params.g);
    take_num("B_tesla", cfg.params.B_tesla);
    take_num("J_meV", cfg.params.J_meV);
    take_num("hbar_alpha_meVcm", cfg.params.hbar_alpha_meVcm);
    take_num("hbar_beta_meVcm", cfg.params.hbar_beta_meVcm);
    take_num("tf_ns", cfg.params.tf_ns);
    if (auto v = take("scenario")) cfg.scenario = *v;

    PulseAnsatz an;
    an.tf_ns = cfg.params.tf_ns;
    int n_ansatz = 0;
    n_ansatz += take_num("U0_meV", an.U0_meV);
    n_ansatz += take_num("a1", an.a1);
    n_ansatz += take_num("w1", an.w1);
    n_ansatz += take_num("a2", an.a2);
    n_ansatz += take_num("w2", an.w2);
    if (n_ansatz == 5) {
        cfg.ansatz = an;
    } else if (n_ansatz != 0) {
        throw std::invalid_argument(
            "config: partial ansatz; need all of U0_meV, a1, w1, a2, w2");
    }

    double tmp;
    if (take_num("grid", tmp)) cfg.grid = static_cast<int>(tmp);
    if (take_num("steps", tmp)) cfg.steps = static_cast<int>(tmp);
    if (cfg.grid < 3) throw std::invalid_argument("config: grid must be >= 3");
    if (cfg.steps < 0) throw std::invalid_argument("config: steps must be >= 0");

    if (!kv.empty())
        throw std::invalid_argument("config: unknown key '" + kv.begin()->first +
                                    "'");
    cfg.params.validate();
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace tqd
