#include "sphmono/config.hpp"

#include <fstream>
#include <sstream>

#include "sphmono/csv.hpp"
#include "sphmono/errors.hpp"

namespace sphmono {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

Potential make_potential(const PotentialSpec& spec) {
    bool has_params = spec.omega || spec.eta || spec.lambda;
    if (spec.coeffs && has_params)
        throw ConfigError("potential: coeffs and omega/eta/lambda are mutually exclusive");
    if (spec.coeffs) return Potential(*spec.coeffs);
    if (has_params)
        return Potential::from_parameters(spec.omega.value_or(0.0), spec.eta.value_or(0.0),
                                          spec.lambda.value_or(0.0));
    throw ConfigError("potential: provide coeffs or omega/eta/lambda");
}

std::string describe(const Potential& pot) {
    std::string out = "coeffs=[";
    const auto& c = pot.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(c[i]);
    }
    out += ']';
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') throw ConfigError("list: missing closing bracket in '" + text + "'");
        t = t.substr(1, t.size() - 2);
    }
    for (auto& ch : t)
        if (ch == ',') ch = ' ';
    std::istringstream ss(t);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok));
    if (out.empty()) throw ConfigError("list: no values in '" + text + "'");
    return out;
}

}  // namespace sphmono
