// Command-line front end: subcommands over the library operations, flat
// key=value config files (flags take precedence), CSV/report emission.
//
// Exit codes: 0 success, 2 invalid config/input, 3 numerical
// non-convergence, 4 invalid circuit.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphmono/actions.hpp"
#include "sphmono/config.hpp"
#include "sphmono/csv.hpp"
#include "sphmono/dynamics.hpp"
#include "sphmono/emmap.hpp"
#include "sphmono/errors.hpp"
#include "sphmono/monodromy.hpp"
#include "sphmono/numerics.hpp"
#include "sphmono/potential.hpp"

namespace {

using namespace sphmono;

struct CommonOpts {
    std::string config_path;
    std::string coeffs_text;
    double omega = 0.0, eta = 0.0, lambda = 0.0;
    std::string out;
    double tol = 1e-10;

    CLI::App* cmd = nullptr;
    std::map<std::string, std::string> config;
};

void add_common(CLI::App& cmd, CommonOpts& o, const std::string& default_out) {
    o.cmd = &cmd;
    o.out = default_out;
    cmd.set_help_flag("--help", "print this help message and exit");  // frees -h for --h
    cmd.add_option("--config", o.config_path, "flat key = value config file");
    cmd.add_option("--coeffs", o.coeffs_text, "potential coefficients, e.g. \"[1.0, -0.5]\"");
    cmd.add_option("--omega", o.omega, "coefficient of -cos(theta)");
    cmd.add_option("--eta", o.eta, "coefficient of -cos^2(theta)");
    cmd.add_option("--lambda", o.lambda, "coefficient of -cos^3(theta)");
    cmd.add_option("--out", o.out, "output file path");
    cmd.add_option("--tol", o.tol, "quadrature relative tolerance");
}

bool flag_given(const CommonOpts& o, const std::string& name) {
    return o.cmd->count("--" + name) > 0;
}

// config value lookup for keys not overridden on the command line
template <typename T>
void from_config(const CommonOpts& o, const std::string& key, T& target) {
    if (flag_given(o, key)) return;
    auto it = o.config.find(key);
    if (it == o.config.end()) return;
    if constexpr (std::is_same_v<T, double>)
        target = parse_double(it->second);
    else if constexpr (std::is_same_v<T, int>)
        target = int(std::lround(parse_double(it->second)));
    else
        target = it->second;
}

Potential resolve_potential(CommonOpts& o) {
    if (!o.config_path.empty()) o.config = parse_config_file(o.config_path);

    PotentialSpec spec;
    bool cli_pot = flag_given(o, "coeffs") || flag_given(o, "omega") || flag_given(o, "eta") ||
                   flag_given(o, "lambda");
    if (cli_pot) {
        if (flag_given(o, "coeffs")) spec.coeffs = parse_double_list(o.coeffs_text);
        if (flag_given(o, "omega")) spec.omega = o.omega;
        if (flag_given(o, "eta")) spec.eta = o.eta;
        if (flag_given(o, "lambda")) spec.lambda = o.lambda;
    } else {
        auto get = [&](const char* key) -> std::optional<double> {
            auto it = o.config.find(key);
            if (it == o.config.end()) return std::nullopt;
            return parse_double(it->second);
        };
        if (auto it = o.config.find("coeffs"); it != o.config.end())
            spec.coeffs = parse_double_list(it->second);
        spec.omega = get("omega");
        spec.eta = get("eta");
        spec.lambda = get("lambda");
    }

    from_config(o, "tol", o.tol);
    from_config(o, "out", o.out);
    if (!(o.tol > 0.0 && o.tol <= 1e-2))
        throw ConfigError("tol must lie in (0, 1e-2]");
    return make_potential(spec);
}

void summary(const std::string& command, const Potential& pot, const std::string& result) {
    std::printf("%s %s -> %s\n", command.c_str(), describe(pot).c_str(), result.c_str());
}

struct KeyValueReport {
    std::string buffer;
    void add(const std::string& key, const std::string& value) {
        buffer += key + ": " + value + "\n";
    }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void write(const std::string& path) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (f == nullptr) throw ConfigError("cannot open output file: " + path);
        std::fwrite(buffer.data(), 1, buffer.size(), f);
        std::fclose(f);
    }
};

void add_transfer(KeyValueReport& rep, const std::string& prefix, const TransferMatrix& m) {
    rep.add(prefix + "_m11", m.m11);
    rep.add(prefix + "_m12", m.m12);
    rep.add(prefix + "_m21", m.m21);
    rep.add(prefix + "_m22", m.m22);
}

void add_delta(KeyValueReport& rep, const std::string& prefix, const DeltaResult& d) {
    rep.add(prefix + "_real", d.value_real);
    rep.add(prefix + "_int", d.value_int);
    rep.add(prefix + "_residual", d.residual);
    rep.add(prefix + "_side", std::string(d.side == Side::plus ? "+" : "-"));
    rep.add(prefix + "_samples", long(d.samples.size()));
}

void write_delta_samples(const std::string& path, const std::vector<DeltaSample>& plus,
                         const std::vector<DeltaSample>& minus) {
    CsvWriter csv(path);
    csv.header({"side", "j", "two_chi"});
    for (const auto& s : plus) csv.raw_row({"+", format_double(s.j), format_double(s.two_chi)});
    for (const auto& s : minus) csv.raw_row({"-", format_double(s.j), format_double(s.two_chi)});
    csv.close();
}

const OrbitBranch& pick_branch(const std::vector<OrbitBranch>& brs, int index) {
    if (index < 0 || index >= int(brs.size()))
        throw ConfigError("branch index " + std::to_string(index) + " out of range (r = " +
                          std::to_string(brs.size()) + ")");
    return brs[std::size_t(index)];
}

// ---- subcommands ----

int cmd_em_grid(CommonOpts& o, double h_min, double h_max, double j_min, double j_max, int nh,
                int nj) {
    Potential pot = resolve_potential(o);
    from_config(o, "h-min", h_min);
    from_config(o, "h-max", h_max);
    from_config(o, "j-min", j_min);
    from_config(o, "j-max", j_max);
    from_config(o, "nh", nh);
    from_config(o, "nj", nj);

    auto grid = em_grid(pot, h_min, h_max, j_min, j_max, nh, nj);
    CsvWriter csv(o.out);
    csv.header({"h", "j", "status", "r"});
    int n_regular = 0;
    for (int jj = 0; jj < nj; ++jj) {
        for (int ih = 0; ih < nh; ++ih) {
            const auto& c = grid.cells[std::size_t(jj) * std::size_t(nh) + std::size_t(ih)];
            const char* status = c.status == EMStatus::regular
                                     ? "regular"
                                     : (c.status == EMStatus::critical ? "critical"
                                                                       : "out_of_range");
            if (c.status == EMStatus::regular) ++n_regular;
            csv.raw_row({format_double(grid.h_values[ih]), format_double(grid.j_values[jj]),
                         status, std::to_string(c.r)});
        }
    }
    csv.close();
    summary("em-grid", pot,
            std::to_string(n_regular) + "/" + std::to_string(nh * nj) + " regular cells -> " + o.out);
    return 0;
}

int cmd_curves(CommonOpts& o, double j_max, int samples) {
    Potential pot = resolve_potential(o);
    from_config(o, "j-max", j_max);
    from_config(o, "samples", samples);

    auto curves = critical_curves(pot, j_max, samples);
    CsvWriter csv(o.out);
    csv.header({"curve_id", "kind", "j", "h", "x"});
    for (const auto& c : curves)
        for (const auto& s : c.samples)
            csv.raw_row({std::to_string(c.id), c.boundary ? "boundary" : "interior",
                         format_double(s.j), format_double(s.h), format_double(s.x)});
    csv.close();
    summary("curves", pot, std::to_string(curves.size()) + " curves -> " + o.out);
    return 0;
}

int cmd_branches(CommonOpts& o, double h, double j) {
    Potential pot = resolve_potential(o);
    from_config(o, "h", h);
    from_config(o, "j", j);

    auto brs = branches(pot, h, j);
    CsvWriter csv(o.out);
    csv.header({"branch_index", "alpha_minus", "alpha_plus", "open_left", "open_right"});
    for (const auto& b : brs)
        csv.raw_row({std::to_string(b.branch_index), format_double(b.alpha_minus),
                     format_double(b.alpha_plus), b.open_left ? "1" : "0",
                     b.open_right ? "1" : "0"});
    csv.close();
    summary("branches", pot, "r = " + std::to_string(brs.size()) + " -> " + o.out);
    return 0;
}

int cmd_orbit(CommonOpts& o, double h, double j, int branch_index) {
    Potential pot = resolve_potential(o);
    from_config(o, "h", h);
    from_config(o, "j", j);
    from_config(o, "branch", branch_index);

    auto brs = branches(pot, h, j);
    const auto& br = pick_branch(brs, branch_index);
    auto rec = trajectory_oracle(pot, h, j, br, o.tol);

    CsvWriter csv(o.out);
    csv.header({"t", "theta", "p_theta", "phi"});
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        csv.row({rec.times[i], rec.states[i].theta, rec.states[i].p_theta, rec.states[i].phi});
    csv.close();
    summary("orbit", pot,
            "T = " + format_double(rec.radial_period) + ", dphi = " + format_double(rec.delta_phi) +
                " -> " + o.out);
    return 0;
}

int cmd_actions(CommonOpts& o, double h, double j, int branch_index) {
    Potential pot = resolve_potential(o);
    from_config(o, "h", h);
    from_config(o, "j", j);
    from_config(o, "branch", branch_index);

    auto brs = branches(pot, h, j);
    const auto& br = pick_branch(brs, branch_index);

    KeyValueReport rep;
    rep.add("command", std::string("actions"));
    rep.add("potential", describe(pot));
    rep.add("h", h);
    rep.add("j", j);
    rep.add("branch_index", long(br.branch_index));
    rep.add("alpha_minus", br.alpha_minus);
    rep.add("alpha_plus", br.alpha_plus);
    rep.add("I1", action_I1(pot, h, j, br, o.tol));
    rep.add("I2", j);
    rep.add("beta", beta(pot, h, j, br, o.tol));
    double T = period(pot, h, j, br, o.tol);
    rep.add("T", T);
    if (j != 0.0) {
        rep.add("chi", chi(pot, h, j, br, o.tol));
        rep.add("T_hat", period_hat(pot, h, j, br, o.tol));
    }
    rep.write(o.out);
    summary("actions", pot, "T = " + format_double(T) + " -> " + o.out);
    return 0;
}

int cmd_chi_scan(CommonOpts& o, double h, double j_from, double j_to, double seed) {
    Potential pot = resolve_potential(o);
    from_config(o, "h", h);
    from_config(o, "j-from", j_from);
    from_config(o, "j-to", j_to);
    from_config(o, "seed", seed);
    if (!(j_from > j_to && j_to > 0.0))
        throw ConfigError("chi-scan: requires j-from > j-to > 0");

    CsvWriter csv(o.out);
    csv.header({"j", "chi"});
    double track_lo = 0.0, track_hi = 0.0;
    bool tracking = false;
    double last_chi = 0.0;
    int rows = 0;
    for (double j = j_from; j >= j_to * (1.0 - 1e-12); j *= 0.5) {
        std::vector<OrbitBranch> brs;
        try {
            brs = branches(pot, h, j);
        } catch (const InvalidInput&) {
            if (tracking) throw BranchLost("chi-scan: branch vanished along the sequence");
            continue;
        }
        const OrbitBranch* br = nullptr;
        if (!tracking) {
            if (std::isnan(seed)) {
                if (brs.size() > 1)
                    throw ConfigError("chi-scan: several branches at j-from; provide --seed");
                br = &brs[0];
            } else {
                for (const auto& b : brs)
                    if (seed > b.alpha_minus && seed < b.alpha_plus) br = &b;
                if (br == nullptr) throw BranchLost("chi-scan: seed theta lies in no branch");
            }
        } else {
            double best = 0.0;
            for (const auto& b : brs) {
                double len = std::min(b.alpha_plus, track_hi) - std::max(b.alpha_minus, track_lo);
                if (len > best) {
                    best = len;
                    br = &b;
                }
            }
            if (br == nullptr) throw BranchLost("chi-scan: no branch overlaps tracked interval");
        }
        track_lo = br->alpha_minus;
        track_hi = br->alpha_plus;
        tracking = true;
        last_chi = chi(pot, h, j, *br, o.tol);
        csv.row({j, last_chi});
        ++rows;
    }
    csv.close();
    summary("chi-scan", pot,
            std::to_string(rows) + " samples, last chi = " + format_double(last_chi) + " -> " + o.out);
    return 0;
}

int cmd_delta(CommonOpts& o, double a, std::string side_text, double seed, double j_start,
              double j_floor, const std::string& samples_out) {
    Potential pot = resolve_potential(o);
    from_config(o, "a", a);
    from_config(o, "side", side_text);
    from_config(o, "seed", seed);
    from_config(o, "j-start", j_start);
    from_config(o, "j-floor", j_floor);

    Side side;
    if (side_text == "+" || side_text == "plus")
        side = Side::plus;
    else if (side_text == "-" || side_text == "minus")
        side = Side::minus;
    else
        throw ConfigError("delta: --side must be + or -");

    DeltaOptions dopt;
    dopt.j_start = j_start;
    dopt.j_floor = j_floor;
    dopt.quad_tol = o.tol;
    if (std::isnan(seed)) {
        auto brs = branches(pot, a, side == Side::plus ? j_start : -j_start);
        if (brs.size() > 1) throw ConfigError("delta: several branches at j-start; provide --seed");
        seed = 0.5 * (brs[0].alpha_minus + brs[0].alpha_plus);
    }
    auto d = delta_at(pot, a, side, seed, dopt);

    KeyValueReport rep;
    rep.add("command", std::string("delta"));
    rep.add("potential", describe(pot));
    rep.add("a", a);
    rep.add("seed_theta", d.seed_theta);
    add_delta(rep, "delta", d);
    rep.write(o.out);
    if (!samples_out.empty()) write_delta_samples(samples_out, d.samples, {});
    summary("delta", pot,
            "Delta(" + format_double(a) + ",0" + (side == Side::plus ? "+" : "-") + ") = " +
                std::to_string(d.value_int) + " (residual " + format_double(d.residual) + ") -> " +
                o.out);
    return 0;
}

int cmd_monodromy(CommonOpts& o, double a, double b, double j_amplitude, double seed_a,
                  double seed_b, double j_floor, const std::string& samples_out) {
    Potential pot = resolve_potential(o);
    from_config(o, "a", a);
    from_config(o, "b", b);
    from_config(o, "j-amplitude", j_amplitude);
    from_config(o, "seed-a", seed_a);
    from_config(o, "seed-b", seed_b);
    from_config(o, "j-floor", j_floor);

    Circuit circuit;
    circuit.a = a;
    circuit.b = b;
    circuit.j_amplitude = j_amplitude;

    MonodromyOptions mopt;
    mopt.delta.quad_tol = o.tol;
    mopt.delta.j_floor = j_floor;
    if (!std::isnan(seed_a)) mopt.seed_a = seed_a;
    if (!std::isnan(seed_b)) mopt.seed_b = seed_b;

    auto rep_data = monodromy_test(pot, circuit, mopt);

    KeyValueReport rep;
    rep.add("command", std::string("monodromy"));
    rep.add("potential", describe(pot));
    rep.add("a", a);
    rep.add("b", b);
    rep.add("j_amplitude", j_amplitude);
    add_delta(rep, "delta_a", rep_data.delta_a);
    add_delta(rep, "delta_b", rep_data.delta_b);
    rep.add("index", rep_data.index);
    rep.add("has_monodromy", std::string(rep_data.has_monodromy ? "yes" : "no"));
    add_transfer(rep, "transfer_a", rep_data.transfer_a);
    add_transfer(rep, "transfer_b", rep_data.transfer_b);
    if (rep_data.delta_a_minus) add_delta(rep, "delta_a_minus", *rep_data.delta_a_minus);
    if (rep_data.delta_b_minus) add_delta(rep, "delta_b_minus", *rep_data.delta_b_minus);
    rep.write(o.out);

    if (!samples_out.empty())
        write_delta_samples(samples_out, rep_data.delta_a.samples, rep_data.delta_b.samples);

    summary("monodromy", pot,
            "index = " + std::to_string(rep_data.index) + ", monodromy = " +
                (rep_data.has_monodromy ? "yes" : "no") + " -> " + o.out);
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Hamiltonian monodromy detector for azimuthally symmetric potentials on the sphere"};
    app.require_subcommand(1);
    const double nan = std::nan("");

    // em-grid
    CommonOpts o_grid;
    double gh_min = -2, gh_max = 2, gj_min = -2, gj_max = 2;
    int g_nh = 100, g_nj = 100;
    auto* grid_cmd = app.add_subcommand("em-grid", "classification grid of the energy-momentum plane");
    add_common(*grid_cmd, o_grid, "em_grid.csv");
    grid_cmd->add_option("--h-min", gh_min);
    grid_cmd->add_option("--h-max", gh_max);
    grid_cmd->add_option("--j-min", gj_min);
    grid_cmd->add_option("--j-max", gj_max);
    grid_cmd->add_option("--nh", g_nh);
    grid_cmd->add_option("--nj", g_nj);

    // curves
    CommonOpts o_curves;
    double c_jmax = 2.0;
    int c_samples = 101;
    auto* curves_cmd = app.add_subcommand("curves", "critical curves h_c(j) tracked from j=0");
    add_common(*curves_cmd, o_curves, "curves.csv");
    curves_cmd->add_option("--j-max", c_jmax);
    curves_cmd->add_option("--samples", c_samples);

    // branches
    CommonOpts o_br;
    double br_h = 0.0, br_j = 0.0;
    auto* br_cmd = app.add_subcommand("branches", "orbit branches at fixed (h, j)");
    add_common(*br_cmd, o_br, "branches.csv");
    br_cmd->add_option("--h", br_h);
    br_cmd->add_option("--j", br_j);

    // orbit
    CommonOpts o_orbit;
    double ob_h = 0.0, ob_j = 0.25;
    int ob_branch = 0;
    auto* orbit_cmd = app.add_subcommand("orbit", "integrate one orbit over a radial period");
    add_common(*orbit_cmd, o_orbit, "orbit.csv");
    orbit_cmd->add_option("--h", ob_h);
    orbit_cmd->add_option("--j", ob_j);
    orbit_cmd->add_option("--branch", ob_branch);

    // actions
    CommonOpts o_act;
    double ac_h = 0.0, ac_j = 0.25;
    int ac_branch = 0;
    auto* act_cmd = app.add_subcommand("actions", "actions, beta, chi, periods at (h, j)");
    add_common(*act_cmd, o_act, "actions.txt");
    act_cmd->add_option("--h", ac_h);
    act_cmd->add_option("--j", ac_j);
    act_cmd->add_option("--branch", ac_branch);

    // chi-scan
    CommonOpts o_scan;
    double sc_h = 0.0, sc_from = 0.5, sc_to = 1e-4, sc_seed = nan;
    auto* scan_cmd = app.add_subcommand("chi-scan", "chi(h, j) along a halving j sequence");
    add_common(*scan_cmd, o_scan, "chi_scan.csv");
    scan_cmd->add_option("--h", sc_h);
    scan_cmd->add_option("--j-from", sc_from);
    scan_cmd->add_option("--j-to", sc_to);
    scan_cmd->add_option("--seed", sc_seed, "branch seed theta");

    // delta
    CommonOpts o_delta;
    double dl_a = 0.0, dl_seed = nan, dl_jstart = 0.5, dl_jfloor = 1e-5;
    std::string dl_side = "+", dl_samples;
    auto* delta_cmd = app.add_subcommand("delta", "integer limit of 2 chi at a j=0 crossing");
    add_common(*delta_cmd, o_delta, "delta.txt");
    delta_cmd->add_option("--a", dl_a);
    delta_cmd->add_option("--side", dl_side, "+ or -");
    delta_cmd->add_option("--seed", dl_seed, "branch seed theta");
    delta_cmd->add_option("--j-start", dl_jstart);
    delta_cmd->add_option("--j-floor", dl_jfloor);
    delta_cmd->add_option("--samples-out", dl_samples, "CSV of (j, 2 chi) samples");

    // monodromy
    CommonOpts o_mono;
    double mn_a = 0.0, mn_b = 0.0, mn_jamp = 0.5, mn_seed_a = nan, mn_seed_b = nan,
           mn_jfloor = 1e-5;
    std::string mn_samples;
    auto* mono_cmd = app.add_subcommand("monodromy", "monodromy test over a circuit through (a,0) and (b,0)");
    add_common(*mono_cmd, o_mono, "monodromy.txt");
    mono_cmd->add_option("--a", mn_a);
    mono_cmd->add_option("--b", mn_b);
    mono_cmd->add_option("--j-amplitude", mn_jamp);
    mono_cmd->add_option("--seed-a", mn_seed_a);
    mono_cmd->add_option("--seed-b", mn_seed_b);
    mono_cmd->add_option("--j-floor", mn_jfloor);
    mono_cmd->add_option("--samples-out", mn_samples, "CSV of (j, 2 chi) samples per side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (grid_cmd->parsed())
            return cmd_em_grid(o_grid, gh_min, gh_max, gj_min, gj_max, g_nh, g_nj);
        if (curves_cmd->parsed()) return cmd_curves(o_curves, c_jmax, c_samples);
        if (br_cmd->parsed()) return cmd_branches(o_br, br_h, br_j);
        if (orbit_cmd->parsed()) return cmd_orbit(o_orbit, ob_h, ob_j, ob_branch);
        if (act_cmd->parsed()) return cmd_actions(o_act, ac_h, ac_j, ac_branch);
        if (scan_cmd->parsed()) return cmd_chi_scan(o_scan, sc_h, sc_from, sc_to, sc_seed);
        if (delta_cmd->parsed())
            return cmd_delta(o_delta, dl_a, dl_side, dl_seed, dl_jstart, dl_jfloor, dl_samples);
        if (mono_cmd->parsed())
            return cmd_monodromy(o_mono, mn_a, mn_b, mn_jamp, mn_seed_a, mn_seed_b, mn_jfloor,
                                 mn_samples);
    } catch (const InvalidCircuit& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const NumericalFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
