#pragma once

/// @file
///
/// Command-line frontend. Subcommands:
///
///   validate  check a lattice spec and report its invariant residuals
///   bands     dispersion along a waypoint path (CSV)
///   dos       integrated density of states from a zone grid (CSV)
///   acoustic  sound speeds over a fixed direction set (CSV)
///   c0        Debye constant by spherical quadrature, with the Lame fit
///   heat      temperature sweep of U1, C and the reference models (CSV)
///   debye     Debye constant, lambda_D, Theta_D and the T^3 coefficients
///   oracle    Bloch-vs-supercell spectral consistency report
///
/// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latvib/acoustic.hpp"
#include "latvib/bloch.hpp"
#include "latvib/dos.hpp"
#include "latvib/lattice.hpp"
#include "latvib/report.hpp"
#include "latvib/spec_io.hpp"
#include "latvib/thermo.hpp"

namespace latvib {

/// Desk-scale consistency report: the supercell eigenvalue multiset against
/// the union of Bloch spectra over the commensurate grid, and the trace
/// identity for f(lambda) = exp(-lambda).
struct OracleReport {
    int grid_n = 0;
    int dimension = 0;
    double eigenvalue_discrepancy = 0.0;  // relative to the spectral bound
    double trace_discrepancy = 0.0;
};

inline OracleReport oracle_report(const CrystalSpec& crystal, int N,
                                  int dimension_cap = 1000) {
    OracleReport rep;
    rep.grid_n = N;
    const std::vector<double> super = supercell_spectrum(crystal, N, dimension_cap);
    rep.dimension = static_cast<int>(super.size());
    const SpectralSamples samples = sample_spectrum(crystal, N);
    const double scale = std::max({1.0, std::abs(super.back()),
                                   std::abs(samples.entries.back().lambda)});
    double worst = 0.0;
    for (size_t i = 0; i < super.size(); ++i)
        worst = std::max(worst,
                         std::abs(super[i] - samples.entries[i].lambda) / scale);
    rep.eigenvalue_discrepancy = worst;

    const double avg =
        spectral_average(samples, [](double l) { return std::exp(-l); });
    double super_sum = 0.0;
    for (double v : super) super_sum += std::exp(-v);
    const long cells = static_cast<long>(N) * N * N;
    rep.trace_discrepancy = std::abs(avg - super_sum / static_cast<double>(cells));
    return rep;
}

namespace cli {

namespace detail {

inline std::vector<Vec3> parse_path(const std::string& text) {
    std::vector<Vec3> pts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::stringstream ps(part);
        std::string num;
        Vec3 v{};
        int i = 0;
        while (std::getline(ps, num, ',')) {
            if (i >= 3) throw CLI::ValidationError("--path", "waypoints need 3 coordinates");
            try {
                v[i++] = std::stod(num);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--path", "non-numeric coordinate '" + num + "'");
            }
        }
        if (i != 3) throw CLI::ValidationError("--path", "waypoints need 3 coordinates");
        pts.push_back(v);
    }
    return pts;
}

inline void emit(const std::string& content, const std::string& output_path,
                 std::ostream& out) {
    if (output_path.empty())
        out << content;
    else
        write_text_atomic(output_path, content);
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"lattice vibrations: dispersion, density of states, sound "
                 "speeds and specific heat of periodic harmonic crystals"};
    app.require_subcommand(1);

    std::string input_path, output_path, path_text, units = "natural";
    int grid_n = 8, sphere_order = 16, tsteps = 60, steps = 50, dos_points = 256;
    double tmin = 0.01, tmax = 100.0, lambda0 = 0.0, isotropy_tol = 1e-8;
    bool json = false;

    auto add_common = [&](CLI::App* cmd, bool with_json) {
        cmd->add_option("spec", input_path, "lattice spec file")->required();
        if (with_json) cmd->add_flag("--json", json, "structured JSON report");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a lattice spec");
    add_common(validate, true);

    CLI::App* bands = app.add_subcommand("bands", "dispersion along a path");
    add_common(bands, false);
    bands->add_option("--path", path_text,
                      "semicolon separated fractional waypoints, e.g. "
                      "'0,0,0;0.5,0,0;0.5,0.5,0'")
        ->required();
    bands->add_option("--steps", steps, "interpolation steps per segment")
        ->check(CLI::PositiveNumber);
    bands->add_option("--output,-o", output_path, "CSV output path");

    CLI::App* dos = app.add_subcommand("dos", "integrated density of states");
    add_common(dos, false);
    dos->add_option("--grid", grid_n, "zone grid N (N^3 characters)")
        ->check(CLI::Range(1, 128));
    dos->add_option("--points", dos_points, "number of thresholds")
        ->check(CLI::Range(2, 100000));
    dos->add_option("--output,-o", output_path, "CSV output path");

    CLI::App* acoustic = app.add_subcommand("acoustic", "sound speeds by direction");
    add_common(acoustic, false);
    acoustic->add_option("--output,-o", output_path, "CSV output path");

    CLI::App* c0cmd = app.add_subcommand("c0", "Debye constant");
    add_common(c0cmd, true);
    c0cmd->add_option("--sphere-order", sphere_order, "spherical quadrature order")
        ->check(CLI::Range(4, 256));
    c0cmd->add_option("--isotropy-tol", isotropy_tol, "relative Lame fit tolerance");

    CLI::App* heat = app.add_subcommand("heat", "temperature sweep of U1 and C");
    add_common(heat, false);
    heat->add_option("--grid", grid_n, "zone grid N")->check(CLI::Range(1, 128));
    heat->add_option("--tmin", tmin, "lowest temperature");
    heat->add_option("--tmax", tmax, "highest temperature");
    heat->add_option("--tsteps", tsteps, "number of log-spaced temperatures")
        ->check(CLI::Range(2, 100000));
    heat->add_option("--lambda0", lambda0,
                     "Einstein eigenvalue (defaults to lambda_D)");
    heat->add_option("--sphere-order", sphere_order, "quadrature order for c0")
        ->check(CLI::Range(4, 256));
    heat->add_option("--units", units, "natural|si")
        ->check(CLI::IsMember({"natural", "si"}));
    heat->add_option("--output,-o", output_path, "CSV output path");

    CLI::App* debye = app.add_subcommand("debye", "Debye temperature and T^3 law");
    add_common(debye, true);
    debye->add_option("--sphere-order", sphere_order, "spherical quadrature order")
        ->check(CLI::Range(4, 256));
    debye->add_option("--units", units, "natural|si")
        ->check(CLI::IsMember({"natural", "si"}));

    CLI::App* oracle = app.add_subcommand("oracle", "Bloch vs supercell check");
    add_common(oracle, true);
    oracle->add_option("--grid", grid_n, "supercell multiplier N")
        ->check(CLI::Range(1, 16));

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const CrystalSpec crystal = load_crystal(input_path);
        const PhysicalConstants consts =
            (units == "si") ? si_units() : natural_units();

        if (validate->parsed()) {
            const double residual = validate_rotation_invariance(crystal);
            const bool admissible = residual <= kRotationInvarianceTol;
            const bool connected = connectivity_certificate(crystal);
            if (json) {
                nlohmann::json j;
                j["name"] = crystal.name;
                j["atoms"] = crystal.atom_count();
                j["oriented_edges"] = crystal.edges.size();
                j["volume"] = crystal.basis.volume;
                j["total_mass"] = crystal.total_mass();
                j["rotation_invariance_residual"] = residual;
                j["connectivity_certificate"] = connected;
                j["admissible"] = admissible;
                out << j.dump(2) << "\n";
            } else {
                out << "name:                 " << crystal.name << "\n"
                    << "atoms per cell:       " << crystal.atom_count() << "\n"
                    << "oriented edge classes: " << crystal.edges.size() << "\n"
                    << "cell volume:          " << fmt17(crystal.basis.volume) << "\n"
                    << "total mass:           " << fmt17(crystal.total_mass()) << "\n"
                    << "rotation-invariance residual: " << fmt17(residual) << "\n"
                    << "connectivity certificate:     "
                    << (connected ? "pass" : "fail") << "\n"
                    << (admissible && connected ? "admissible" : "inadmissible")
                    << "\n";
            }
            return (admissible && connected) ? 0 : 1;
        }

        if (!is_admissible(crystal)) {
            err << "error: inadmissible crystal (rotation-invariance residual "
                << fmt17(validate_rotation_invariance(crystal)) << " > "
                << fmt17(kRotationInvarianceTol) << ")\n";
            return 1;
        }

        if (bands->parsed()) {
            const std::vector<Vec3> waypoints = detail::parse_path(path_text);
            const DispersionTable table = band_path(crystal, waypoints, steps);
            std::ostringstream csv;
            csv << "segment,t,k1,k2,k3";
            for (int b = 1; b <= crystal.branch_count(); ++b) csv << ",lambda_" << b;
            csv << "\n";
            for (const auto& row : table.rows) {
                csv << row.segment << "," << fmt17(row.t) << ","
                    << fmt17(row.kfrac[0]) << "," << fmt17(row.kfrac[1]) << ","
                    << fmt17(row.kfrac[2]);
                for (double v : row.branches) csv << "," << fmt17(v);
                csv << "\n";
            }
            detail::emit(csv.str(), output_path, out);
            return 0;
        }

        if (dos->parsed()) {
            const SpectralSamples samples = sample_spectrum(crystal, grid_n);
            const double top = samples.max_lambda();
            std::vector<double> thresholds;
            for (int i = 0; i < dos_points; ++i)
                thresholds.push_back(top * i / (dos_points - 1));
            const IdsCurve curve = ids_curve(samples, thresholds);
            std::ostringstream csv;
            csv << "lambda,phi\n";
            for (size_t i = 0; i < curve.thresholds.size(); ++i)
                csv << fmt17(curve.thresholds[i]) << "," << fmt17(curve.values[i])
                    << "\n";
            detail::emit(csv.str(), output_path, out);
            return 0;
        }

        if (acoustic->parsed()) {
            std::ostringstream csv;
            csv << "omega_x,omega_y,omega_z,s1,s2,s3\n";
            for (const Vec3& omega : latvib::detail::isotropy_directions()) {
                const SoundSpeeds s = sound_speeds(crystal, omega);
                csv << fmt17(omega[0]) << "," << fmt17(omega[1]) << ","
                    << fmt17(omega[2]) << "," << fmt17(s.speeds[0]) << ","
                    << fmt17(s.speeds[1]) << "," << fmt17(s.speeds[2]) << "\n";
            }
            detail::emit(csv.str(), output_path, out);
            return 0;
        }

        if (c0cmd->parsed()) {
            const double c0 = c0_quadrature(crystal, sphere_order);
            const std::optional<LameFit> fit = isotropy_fit(crystal, isotropy_tol);
            if (json) {
                nlohmann::json j;
                j["c0"] = c0;
                j["isotropic"] = fit.has_value();
                if (fit) {
                    j["lame_a"] = fit->a;
                    j["lame_b"] = fit->b;
                    j["c_l"] = fit->c_l;
                    j["c_t"] = fit->c_t;
                    j["a_positive"] = fit->a_positive;
                    j["c0_isotropic"] =
                        c0_isotropic(fit->c_l, fit->c_t, crystal.basis.volume);
                }
                out << j.dump(2) << "\n";
            } else {
                out << "c0 = " << fmt17(c0) << "\n";
                if (fit) {
                    out << "isotropic fit: a = " << fmt17(fit->a)
                        << ", b = " << fmt17(fit->b) << ", c_l = " << fmt17(fit->c_l)
                        << ", c_t = " << fmt17(fit->c_t) << "\n";
                    if (!fit->a_positive)
                        out << "note: fitted a <= 0 (degenerate isotropy)\n";
                    out << "c0 (isotropic closed form) = "
                        << fmt17(c0_isotropic(fit->c_l, fit->c_t,
                                              crystal.basis.volume))
                        << "\n";
                } else {
                    out << "anisotropic\n";
                }
            }
            return 0;
        }

        if (heat->parsed()) {
            if (!(tmin < tmax)) {
                err << "error: --tmin must be below --tmax\n";
                return 2;
            }
            const SpectralSamples samples = sample_spectrum(crystal, grid_n);
            const double c0 = c0_quadrature(crystal, sphere_order);
            const double lam_d = debye_lambda(c0, crystal.atom_count());
            const double theta_d = debye_temperature(lam_d, consts);
            const double einstein_lambda = (lambda0 > 0.0) ? lambda0 : lam_d;
            const ThermoCurve curve =
                make_thermo_curve(samples, tmin, tmax, tsteps, consts);
            std::ostringstream csv;
            csv << "T,U1,C,C_debye,C_einstein\n";
            for (size_t i = 0; i < curve.temperatures.size(); ++i) {
                const double t = curve.temperatures[i];
                csv << fmt17(t) << "," << fmt17(curve.u1[i]) << ","
                    << fmt17(curve.c[i]) << ","
                    << fmt17(debye_specific_heat(theta_d, crystal.atom_count(), t,
                                                 consts))
                    << ","
                    << fmt17(einstein_specific_heat(einstein_lambda,
                                                    crystal.atom_count(), t, consts))
                    << "\n";
            }
            detail::emit(csv.str(), output_path, out);
            return 0;
        }

        if (debye->parsed()) {
            const double c0 = c0_quadrature(crystal, sphere_order);
            const double lam_d = debye_lambda(c0, crystal.atom_count());
            const double theta_d = debye_temperature(lam_d, consts);
            const T3Coefficients coef = t3_coefficients(c0, consts);
            if (json) {
                nlohmann::json j;
                j["c0"] = c0;
                j["lambda_D"] = lam_d;
                j["theta_D"] = theta_d;
                j["t3_u1_coefficient"] = coef.internal_energy;
                j["t3_c_coefficient"] = coef.specific_heat;
                out << j.dump(2) << "\n";
            } else {
                out << "c0       = " << fmt17(c0) << "\n"
                    << "lambda_D = " << fmt17(lam_d) << "\n"
                    << "Theta_D  = " << fmt17(theta_d) << "\n"
                    << "U1(T) ~ " << fmt17(coef.internal_energy) << " T^4\n"
                    << "C(T)  ~ " << fmt17(coef.specific_heat) << " T^3\n";
            }
            return 0;
        }

        if (oracle->parsed()) {
            const OracleReport rep = oracle_report(crystal, grid_n);
            if (json) {
                nlohmann::json j;
                j["grid_n"] = rep.grid_n;
                j["dimension"] = rep.dimension;
                j["eigenvalue_discrepancy"] = rep.eigenvalue_discrepancy;
                j["trace_discrepancy"] = rep.trace_discrepancy;
                out << j.dump(2) << "\n";
            } else {
                out << "supercell N = " << rep.grid_n << " (dimension "
                    << rep.dimension << ")\n"
                    << "max relative eigenvalue discrepancy: "
                    << fmt17(rep.eigenvalue_discrepancy) << "\n"
                    << "trace identity discrepancy (f = exp(-lambda)): "
                    << fmt17(rep.trace_discrepancy) << "\n";
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace cli
}  // namespace latvib
