// xp2 — command-line front end for the regularized (xp)^2 model.
//
// Subcommands map one-to-one onto the model's datasets: classical
// trajectories and the phase-space boundary, quantum/semiclassical
// spectra from every backend, ordering discrepancies, the u-space
// effective potentials, and eigenfunction samples. Output is
// deterministic CSV (or a JSON mirror), optionally with a small SVG
// plot. Exit codes: 0 success, 1 solver failure, 2 usage error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xp2/io/svg.hpp"
#include "xp2/io/table.hpp"
#include "xp2/xp2.hpp"

namespace {

using namespace xp2;

struct CommonOpts {
    double a = 1.0;
    double hbar = 1.0;
    std::string out;
    std::string format = "csv";
    std::string svg;
};

struct LevelRange {
    int lo = 1;
    int hi = 1;
};

LevelRange parse_levels(const std::string& text) {
    LevelRange r;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            r.lo = 1;
            r.hi = std::stoi(text);
        } else {
            r.lo = std::stoi(text.substr(0, dots));
            r.hi = std::stoi(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--levels", "expected <n> or <lo>..<hi>");
    }
    if (r.lo < 1 || r.hi < r.lo)
        throw CLI::ValidationError("--levels", "need 1 <= lo <= hi");
    return r;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

Backend parse_backend(const std::string& name) {
    if (name == "shooting") return Backend::shooting;
    if (name == "matrix") return Backend::matrix;
    if (name == "fd") return Backend::fd;
    if (name == "mathieu") return Backend::mathieu;
    if (name == "semiclassical") return Backend::semiclassical;
    throw CLI::ValidationError("--backend", "unknown backend '" + name + "'");
}

void write_output(const io::Table& table, const CommonOpts& opts) {
    std::ostringstream body;
    if (opts.format == "csv")
        table.write_csv(body);
    else if (opts.format == "json")
        table.write_json(body);
    else
        throw CLI::ValidationError("--format", "expected csv or json");

    if (opts.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream file(opts.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file " + opts.out);
        file << body.str();
    }
}

void write_svg(const CommonOpts& opts, const std::string& title,
               const std::vector<io::Series>& series) {
    if (opts.svg.empty()) return;
    std::ofstream file(opts.svg, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open svg file " + opts.svg);
    io::write_svg_plot(file, title, series);
}

// --config support: plain key=value lines; values feed option defaults,
// explicit command-line flags win.
std::map<std::string, std::string> load_config(int argc, char** argv) {
    std::map<std::string, std::string> kv;
    std::string path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") path = argv[i + 1];
    if (path.empty()) return kv;
    std::ifstream file(path);
    if (!file) throw CLI::ValidationError("--config", "cannot read " + path);
    std::string line;
    while (std::getline(file, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

template <typename T>
void config_default(const std::map<std::string, std::string>& kv, const std::string& key,
                    T& var) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    std::istringstream ss(it->second);
    ss >> var;
}

void config_default(const std::map<std::string, std::string>& kv, const std::string& key,
                    std::string& var) {
    const auto it = kv.find(key);
    if (it != kv.end()) var = it->second;
}

// ---------------------------------------------------------------------

Spectrum compute_spectrum(Backend backend, int form_id, const ModelParams& params,
                          LevelRange range, double x_max, int basis_size, int grid_points,
                          double u_max_mathieu) {
    switch (backend) {
        case Backend::shooting: {
            quantum::ShootingConfig cfg;
            cfg.x_max = x_max;
            return quantum::spectrum_shooting(QuantForm::form(form_id), params, range.lo,
                                              range.hi, cfg);
        }
        case Backend::matrix: {
            quantum::OscillatorBasisConfig cfg;
            cfg.n_basis = std::max(basis_size, 4 * range.hi);
            Spectrum all =
                quantum::spectrum_matrix(QuantForm::form(form_id), params, cfg, range.hi);
            Spectrum out = all;
            out.levels.clear();
            for (const Level& l : all.levels)
                if (l.n >= range.lo) out.levels.push_back(l);
            return out;
        }
        case Backend::fd: {
            // wall placed for the highest requested level, estimated from
            // the counting function
            semiclassical::SemiclassicalConfig scfg;
            const double e_top =
                semiclassical::semiclassical_levels(params, scfg, range.hi, range.hi)
                    .levels.front()
                    .e;
            const auto grid =
                schrodinger::GridSpec::for_max_energy(params, 1.3 * e_top + 1.0, grid_points);
            Spectrum all =
                schrodinger::spectrum_fd(QuantForm::form(form_id), params, grid, range.hi);
            Spectrum out = all;
            out.levels.clear();
            for (const Level& l : all.levels)
                if (l.n >= range.lo) out.levels.push_back(l);
            return out;
        }
        case Backend::mathieu: {
            if (form_id != 2)
                throw CLI::ValidationError("--backend",
                                           "the mathieu backend applies to form 2 only");
            return schrodinger::spectrum_mathieu(params, range.lo, range.hi, u_max_mathieu);
        }
        case Backend::semiclassical: {
            semiclassical::SemiclassicalConfig cfg;
            return semiclassical::semiclassical_levels(params, cfg, range.lo, range.hi);
        }
    }
    throw std::runtime_error("unreachable");
}

int cmd_trajectory(const CommonOpts& common, double energy, int samples) {
    if (samples < 2) throw CLI::ValidationError("--samples", "need at least 2 rows");
    ModelParams params(common.a, common.hbar);
    const auto ep = EnergyPoint::from_e(params, energy);
    const double t_e = classical::period(params, ep);

    io::Table table;
    table.columns = {"t", "x", "p", "H_residual"};
    io::Series sx{"x(t)", {}, false}, sp{"p(t)", {}, false};
    for (int i = 0; i < samples; ++i) {
        const double t = t_e * i / (samples - 1);
        const auto pt = classical::trajectory_point(params, ep, t);
        const double res = classical::hamiltonian(params, pt) - ep.h_e;
        table.add_row({t, pt.x, pt.p, res});
        sx.points.emplace_back(t, pt.x);
        sp.points.emplace_back(t, pt.p);
    }
    write_output(table, common);
    write_svg(common, "trajectory over one period", {sx, sp});
    return 0;
}

int cmd_phase(const CommonOpts& common, double energy, int samples) {
    if (samples < 2) throw CLI::ValidationError("--samples", "need at least 2 rows");
    ModelParams params(common.a, common.hbar);
    const auto ep = EnergyPoint::from_e(params, energy);
    const double x_turn = ep.e / params.a;

    io::Table table;
    table.columns = {"x", "p_plus", "p_minus"};
    io::Series hi{"boundary +", {}, false}, lo{"boundary -", {}, false};
    for (int i = 0; i < samples; ++i) {
        const double x = -x_turn + 2.0 * x_turn * i / (samples - 1);
        const double x_clamped = std::min(x_turn, std::max(-x_turn, x));
        const double p = classical::phase_boundary(params, ep, x_clamped);
        table.add_row({x_clamped, p, -p});
        hi.points.emplace_back(x_clamped, p);
        lo.points.emplace_back(x_clamped, -p);
    }
    write_output(table, common);
    write_svg(common, "allowed phase-space region", {hi, lo});
    return 0;
}

int cmd_spectrum(const CommonOpts& common, int form_id, const std::string& levels,
                 const std::string& backends_csv, bool semiclassical_flag, bool compare,
                 double x_max, int basis_size, int grid_points, double u_max) {
    ModelParams params(common.a, common.hbar);
    const LevelRange range = parse_levels(levels);

    std::vector<Backend> backends;
    if (semiclassical_flag) backends.push_back(Backend::semiclassical);
    for (const auto& name : split_list(backends_csv)) backends.push_back(parse_backend(name));
    if (backends.empty()) backends.push_back(Backend::shooting);

    std::vector<Spectrum> spectra;
    spectra.reserve(backends.size());
    for (Backend b : backends)
        spectra.push_back(compute_spectrum(b, form_id, params, range, x_max, basis_size,
                                           grid_points, u_max));

    io::Table table;
    if (!compare || spectra.size() == 1) {
        table.columns = {"n", "parity", "E", "H_E", "residual", "backend"};
        for (const Spectrum& s : spectra)
            for (const Level& l : s.levels)
                table.add_row({l.n, to_string(l.parity), l.e, l.h_e, l.residual,
                               to_string(l.backend)});
    } else {
        table.columns = {"n", "parity"};
        for (const Spectrum& s : spectra)
            table.columns.push_back("E_" + std::string(to_string(s.backend)));
        table.columns.push_back("max_delta");
        for (std::size_t i = 0; i < spectra.front().levels.size(); ++i) {
            std::vector<io::Cell> row;
            const Level& ref = spectra.front().levels[i];
            row.emplace_back(ref.n);
            row.emplace_back(to_string(ref.parity));
            double lo = ref.e, hi = ref.e;
            for (const Spectrum& s : spectra) {
                const double e = s.at_n(ref.n).e;
                row.emplace_back(e);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            row.emplace_back(hi - lo);
            table.add_row(std::move(row));
        }
    }
    write_output(table, common);

    if (!common.svg.empty()) {
        std::vector<io::Series> series;
        for (const Spectrum& s : spectra) {
            io::Series ser{to_string(s.backend), {}, true};
            for (const Level& l : s.levels) ser.points.emplace_back(l.n, l.e);
            series.push_back(std::move(ser));
        }
        write_svg(common, "spectrum", series);
    }
    return 0;
}

int cmd_discrepancy(const CommonOpts& common, const std::string& levels,
                    const std::string& backend_name, double x_max, int basis_size,
                    int grid_points) {
    ModelParams params(common.a, common.hbar);
    const LevelRange range = parse_levels(levels);
    const Backend backend = parse_backend(backend_name);
    if (backend == Backend::semiclassical)
        throw CLI::ValidationError("--backend", "discrepancy needs a quantum backend");

    semiclassical::SemiclassicalConfig scfg;
    const Spectrum semi =
        semiclassical::semiclassical_levels(params, scfg, range.lo, range.hi);

    io::Table table;
    table.columns = {"n", "d_h1", "d_h2", "d_h3"};
    std::vector<Spectrum> forms;
    for (int f = 1; f <= 3; ++f)
        forms.push_back(compute_spectrum(backend, f, params, range, x_max, basis_size,
                                         grid_points, 12.0));

    std::vector<io::Series> series = {{"H1 - semiclassical", {}, true},
                                      {"H2 - semiclassical", {}, true},
                                      {"H3 - semiclassical", {}, true}};
    for (int n = range.lo; n <= range.hi; ++n) {
        const double base = semi.at_n(n).e;
        const double d1 = forms[0].at_n(n).e - base;
        const double d2 = forms[1].at_n(n).e - base;
        const double d3 = forms[2].at_n(n).e - base;
        table.add_row({n, d1, d2, d3});
        series[0].points.emplace_back(n, d1);
        series[1].points.emplace_back(n, d2);
        series[2].points.emplace_back(n, d3);
    }
    write_output(table, common);
    write_svg(common, "ordering discrepancies against the semiclassical levels", series);
    return 0;
}

int cmd_potentials(const CommonOpts& common, double u_max, int samples) {
    if (samples < 2) throw CLI::ValidationError("--samples", "need at least 2 rows");
    ModelParams params(common.a, common.hbar);
    io::Table table;
    table.columns = {"u", "V1", "V2", "V3", "V2_minus_V1", "V3_minus_V2"};
    std::vector<io::Series> series = {{"V1", {}, false}, {"V2", {}, false}, {"V3", {}, false}};
    for (int i = 0; i < samples; ++i) {
        const double u = -u_max + 2.0 * u_max * i / (samples - 1);
        const double v1 = schrodinger::potential(QuantForm::form(1), params, u);
        const double v2 = schrodinger::potential(QuantForm::form(2), params, u);
        const double v3 = schrodinger::potential(QuantForm::form(3), params, u);
        table.add_row({u, v1, v2, v3, v2 - v1, v3 - v2});
        series[0].points.emplace_back(u, v1);
        series[1].points.emplace_back(u, v2);
        series[2].points.emplace_back(u, v3);
    }
    write_output(table, common);
    write_svg(common, "effective potentials", series);
    return 0;
}

int cmd_wavefunction(const CommonOpts& common, int form_id, int level,
                     const std::string& backend_name, int samples, double x_max,
                     int grid_points) {
    if (samples < 3) throw CLI::ValidationError("--samples", "need at least 3 rows");
    ModelParams params(common.a, common.hbar);
    if (params.hbar != 1.0)
        throw CLI::ValidationError("--hbar", "wavefunction emission is defined at hbar = 1");
    const Backend backend = parse_backend(backend_name);
    const Parity parity = parity_of_level(level);

    quantum::WavefunctionSamples w;
    std::string coord = "x";
    if (backend == Backend::shooting) {
        quantum::ShootingConfig cfg;
        cfg.x_max = x_max;
        const Spectrum spec =
            quantum::spectrum_shooting(QuantForm::form(form_id), params, level, level, cfg);
        w = quantum::sample_wavefunction(QuantForm::form(form_id), params,
                                         spec.levels.front().e, parity, samples, 0.0, cfg);
    } else if (backend == Backend::fd) {
        coord = "u";
        semiclassical::SemiclassicalConfig scfg;
        const double e_top =
            semiclassical::semiclassical_levels(params, scfg, level, level).levels.front().e;
        const auto grid =
            schrodinger::GridSpec::for_max_energy(params, 1.3 * e_top + 1.0, grid_points);
        w = schrodinger::fd_wavefunction(QuantForm::form(form_id), params, grid, level);
    } else if (backend == Backend::mathieu) {
        coord = "u";
        if (form_id != 2)
            throw CLI::ValidationError("--backend", "the mathieu backend applies to form 2 only");
        const Spectrum spec = schrodinger::spectrum_mathieu(params, level, level);
        w = schrodinger::mathieu_wavefunction(params, spec.levels.front().e, parity, samples);
    } else {
        throw CLI::ValidationError("--backend",
                                   "wavefunction backends: shooting, fd, mathieu");
    }

    io::Table table;
    table.columns = {coord, "psi"};
    io::Series ser{"psi_" + std::to_string(level), {}, false};
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        table.add_row({w.x[i], w.psi[i]});
        ser.points.emplace_back(w.x[i], w.psi[i]);
    }
    write_output(table, common);
    write_svg(common, "eigenfunction (form " + std::to_string(form_id) + ", level " +
                          std::to_string(level) + ")",
              {ser});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regularized (xp)^2 model: classical orbits, semiclassical counting,\n"
                 "and quantum spectra for the three operator orderings"};
    app.require_subcommand(1);

    std::map<std::string, std::string> config;
    try {
        config = load_config(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    CommonOpts common;
    config_default(config, "a", common.a);
    config_default(config, "hbar", common.hbar);
    config_default(config, "format", common.format);
    config_default(config, "out", common.out);
    config_default(config, "svg", common.svg);

    double energy = 3.0, u_max_pot = 3.0, x_max = 0.0, u_max_mathieu = 12.0;
    int samples_traj = 1000, samples_phase = 2000, samples_pot = 601, samples_wf = 2001;
    int form_id = 1, level = 1, basis_size = 400, grid_points = 6000;
    std::string levels_spectrum = "1..10", levels_disc = "1..20";
    std::string backends = "", backend_single = "shooting";
    bool semiclassical_flag = false, compare = false;
    std::string config_path;

    config_default(config, "energy", energy);
    config_default(config, "form", form_id);
    config_default(config, "levels", levels_spectrum);
    config_default(config, "backend", backends);
    config_default(config, "samples", samples_traj);
    config_default(config, "xmax", x_max);
    config_default(config, "basis-size", basis_size);
    config_default(config, "grid-points", grid_points);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--a", common.a, "regulator a > 0");
        sub->add_option("--hbar", common.hbar, "reduced Planck constant");
        sub->add_option("--out", common.out, "output path (default: stdout)");
        sub->add_option("--format", common.format, "csv or json");
        sub->add_option("--svg", common.svg, "also write an SVG plot here");
        sub->add_option("--config", config_path, "key=value defaults file");
    };

    auto* traj = app.add_subcommand("trajectory", "closed orbit samples over one period");
    traj->add_option("--energy", energy, "energy label E > 0");
    traj->add_option("--samples", samples_traj, "number of rows");
    add_common(traj);

    auto* phase = app.add_subcommand("phase", "phase-space boundary of H = E^2 + a^4");
    phase->add_option("--energy", energy, "energy label E > 0");
    phase->add_option("--samples", samples_phase, "number of rows");
    add_common(phase);

    auto* spec = app.add_subcommand("spectrum", "bound-state levels by any backend");
    spec->add_option("--form", form_id, "operator ordering 1, 2 or 3");
    spec->add_option("--levels", levels_spectrum, "<n> or <lo>..<hi>");
    spec->add_option("--backend", backends,
                     "comma list of shooting,matrix,fd,mathieu,semiclassical");
    spec->add_flag("--semiclassical", semiclassical_flag,
                   "shorthand for --backend semiclassical");
    spec->add_flag("--compare", compare, "wide per-level cross-backend table");
    spec->add_option("--xmax", x_max, "shooting integration start (0 = auto)");
    spec->add_option("--basis-size", basis_size, "oscillator basis size (matrix backend)");
    spec->add_option("--grid-points", grid_points, "interior grid points (fd backend)");
    spec->add_option("--umax", u_max_mathieu, "mathieu integration cutoff");
    add_common(spec);

    auto* disc = app.add_subcommand(
        "discrepancy", "per-level offsets of each ordering from the semiclassical levels");
    disc->add_option("--levels", levels_disc, "<n> or <lo>..<hi>");
    disc->add_option("--backend", backend_single, "quantum backend for the three forms");
    disc->add_option("--xmax", x_max, "shooting integration start (0 = auto)");
    disc->add_option("--basis-size", basis_size, "oscillator basis size (matrix backend)");
    disc->add_option("--grid-points", grid_points, "interior grid points (fd backend)");
    add_common(disc);

    auto* pot = app.add_subcommand("potentials", "u-space effective potentials V1, V2, V3");
    pot->add_option("--umax", u_max_pot, "half-width of the u grid");
    pot->add_option("--samples", samples_pot, "number of rows");
    add_common(pot);

    auto* wf = app.add_subcommand("wavefunction", "normalized eigenfunction samples");
    wf->add_option("--form", form_id, "operator ordering 1, 2 or 3");
    wf->add_option("--level", level, "level index n >= 1");
    wf->add_option("--backend", backend_single, "shooting, fd or mathieu");
    wf->add_option("--samples", samples_wf, "number of rows");
    wf->add_option("--xmax", x_max, "emission half-width (shooting backend)");
    wf->add_option("--grid-points", grid_points, "interior grid points (fd backend)");
    add_common(wf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return (app.exit(e) == 0) ? 0 : 2;
    }

    try {
        if (traj->parsed()) return cmd_trajectory(common, energy, samples_traj);
        if (phase->parsed()) return cmd_phase(common, energy, samples_phase);
        if (spec->parsed())
            return cmd_spectrum(common, form_id, levels_spectrum, backends, semiclassical_flag,
                                compare, x_max, basis_size, grid_points, u_max_mathieu);
        if (disc->parsed())
            return cmd_discrepancy(common, levels_disc, backend_single, x_max, basis_size,
                                   grid_points);
        if (pot->parsed()) return cmd_potentials(common, u_max_pot, samples_pot);
        if (wf->parsed())
            return cmd_wavefunction(common, form_id, level, backend_single, samples_wf, x_max,
                                    grid_points);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
