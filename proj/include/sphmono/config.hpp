#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphmono/potential.hpp"

namespace sphmono {

/** Potential selection from a config file or CLI flags: either an explicit
 *  coefficient list or the (omega, eta, lambda) shorthands, never both.
 */
struct PotentialSpec {
    std::optional<std::vector<double>> coeffs;
    std::optional<double> omega;
    std::optional<double> eta;
    std::optional<double> lambda;
};

/// Validates exclusivity and builds the potential; throws ConfigError.
Potential make_potential(const PotentialSpec& spec);

/// One-line description for summary output, e.g. "coeffs=[-1,0,0]".
std::string describe(const Potential& pot);

/** Flat `key = value` config file. Lines starting with '#' (and blank lines)
 *  are ignored; list values use `[v1, v2, ...]`.
 */
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Parses "[1.2, -0.2]" (brackets optional, comma or space separated).
std::vector<double> parse_double_list(const std::string& text);

}  // namespace sphmono
