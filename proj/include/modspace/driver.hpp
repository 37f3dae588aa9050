#ifndef MODSPACE_DRIVER_HPP
#define MODSPACE_DRIVER_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "modspace/config.hpp"
#include "modspace/io.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_config = 2, exit_divergence = 3, exit_estimate = 4 };

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"params", "norm", "decompose", "solve", "oracle-compare", "verify", "residual"};
    return s;
}

/// Trajectory of a configured run plus the reports of its segments.
struct RunOutcome {
    Trajectory trajectory;
    std::vector<SolveReport> segments;
    double segment_T = 0.0;
};

inline RunOutcome run_solver(const ExperimentConfig& cfg, const GridFunction& u0, const Decomposer& dec) {
    SolveSetup setup = cfg.solve_setup();
    RunOutcome out;
    if (cfg.auto_T) {
        AutoTResult a = solve_auto_T(u0, setup, dec, cfg.time.T);
        setup.time = a.result.trajectory.time();
        if (!a.result.report.converged) throw DivergenceError("auto-T run did not converge", a.result.report);
        if (!cfg.horizon) {
            out.segment_T = setup.time.T;
            out.segments.push_back(a.result.report);
            out.trajectory = std::move(a.result.trajectory);
            return out;
        }
    }
    out.segment_T = setup.time.T;
    if (cfg.horizon) {
        ContinuationResult c = solve_continued(u0, setup, dec, *cfg.horizon);
        out.trajectory = std::move(c.trajectory);
        out.segments = std::move(c.segments);
        return out;
    }
    SolveResult r = picard_solve(u0, setup, dec);
    if (!r.report.converged) throw DivergenceError("Picard iteration did not converge", r.report);
    out.segments.push_back(r.report);
    out.trajectory = std::move(r.trajectory);
    return out;
}

inline ParameterInput parameter_input(const ExperimentConfig& cfg) {
    ParameterInput in;
    in.d = cfg.grid.d;
    in.p = cfg.norm.p;
    in.q = cfg.norm.q;
    in.kappa = cfg.params.kappa;
    in.sigma1 = cfg.symbol.sigma1();
    in.sigma2 = cfg.symbol.sigma2();
    in.K = cfg.params.K;
    in.regime = regime_from_string(cfg.params.regime);
    in.gamma = cfg.params.gamma;
    in.factors = cfg.params.factors;
    return in;
}

/// Every estimate listed in the verify section, in listing order.
inline std::vector<EstimateReport> run_verify_suite(const ExperimentConfig& cfg) {
    const auto& v = cfg.verify;
    const Decomposer dec = cfg.decomposer();
    const auto set = mixed_test_set(cfg.grid, cfg.seed, v.count);
    std::vector<EstimateReport> out;
    for (const auto& id : v.estimates) {
        if (id == "algebra") {
            out.push_back(check_algebra(set, v.s, v.p, v.q, v.r, dec, v.pairs, v.algebra_bound));
        } else if (id == "multilinear") {
            const double g = 3.0 * v.gamma;
            out.push_back(check_multilinear(set, {g, g, g}, v.gamma, v.s, v.p, v.q, v.r, dec, cfg.time.T));
        } else if (id == "derivative") {
            MultiIndex alpha(static_cast<std::size_t>(cfg.grid.d), 0);
            alpha[0] = 1;
            out.push_back(check_derivative_estimate(set, alpha, 0.0, v.p, v.q, v.r, dec, v.derivative_bound));
        } else if (id == "linear_smoothing") {
            SmoothingOptions opt;
            opt.T = 1.0;
            out.push_back(check_linear_smoothing(cfg.symbol, set, v.gamma, v.r, dec, opt));
        } else if (id == "remainder_separable") {
            const Symbol sym = cfg.symbol.separable() ? cfg.symbol : confining_symbol();
            RemainderOptions opt;
            opt.gamma = v.gamma;
            EstimateReport r = check_remainder_T_scaling(sym, set, v.T_list, dec, opt);
            r.id = "remainder_separable";
            out.push_back(std::move(r));
        } else if (id == "remainder_symbol_class") {
            RemainderOptions opt;
            opt.gamma = v.gamma;
            EstimateReport r = check_remainder_T_scaling(catalog_symbol(v.catalog_symbol), set, v.T_list, dec, opt);
            r.id = "remainder_symbol_class";
            out.push_back(std::move(r));
        } else if (id == "triple_decay") {
            out.push_back(check_triple_decay(catalog_symbol(v.catalog_symbol), cfg.family()));
        } else {
            throw ConfigError("unknown estimate '" + id + "'");
        }
    }
    return out;
}

namespace detail {

inline int cmd_params(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const ParameterRecipe r = admissible_parameters(parameter_input(cfg));
    const json j = to_json(r);
    write_json(out / "params.json", j);
    log << j.dump(2) << "\n";
    return exit_ok;
}

inline int cmd_norm(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const GridFunction u = initial_data(cfg);
    const Decomposer dec = cfg.decomposer();
    const auto& n = cfg.norm;
    const json j{{"l2", lp_norm(u, 2.0)},
                 {"sobolev", sobolev_norm(u, n.s, false)},
                 {"modulation", number_json(modulation_norm(u, n.s, n.p, n.q, dec))},
                 {"x_norm", number_json(x_norm(u, n, dec))},
                 {"tail_fraction", tail_fraction(u, dec)},
                 {"norm", json{{"s", n.s}, {"p", number_json(n.p)}, {"q", number_json(n.q)}, {"r", number_json(n.r)}}}};
    write_json(out / "norms.json", j);
    log << j.dump(2) << "\n";
    return exit_ok;
}

inline int cmd_decompose(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const GridFunction u = initial_data(cfg);
    const DecompositionTable t = decompose_all(u, cfg.decomposer());
    std::ofstream csv(out / "heatmap.csv");
    write_heatmap_csv(t, csv);
    const double rel = t.tail_mass() / std::max(lp_norm(u, 2.0), 1e-300);
    const bool pass = rel <= cfg.solver.tail_error;
    write_json(out / "decompose.json", json{{"pieces", t.pieces().size()}, {"tail_mass", t.tail_mass()}, {"tail_fraction", rel}, {"pass", pass}});
    log << "pieces " << t.pieces().size() << ", tail fraction " << rel << "\n";
    return pass ? exit_ok : exit_estimate;
}

inline int cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const GridFunction u0 = initial_data(cfg);
    const Decomposer dec = cfg.decomposer();
    const RunOutcome run = run_solver(cfg, u0, dec);
    {
        std::ofstream bin(out / "trajectory.bin", std::ios::binary);
        write_trajectory(run.trajectory, bin);
    }
    write_json(out / "manifest.json", manifest_json(run.trajectory));
    const EnergyReport e = energy_ledger(run.trajectory, cfg.symbol, cfg.threshold("energy_slack", 1e-2));
    {
        std::ofstream csv(out / "energy.csv");
        write_energy_csv(e, csv);
    }
    json segs = json::array();
    for (const auto& s : run.segments) segs.push_back(to_json(s));
    const bool check_energy = cfg.threshold("energy_check", 1.0) != 0.0;
    const bool pass = !check_energy || e.pass;
    write_json(out / "solve_report.json",
               json{{"segments", segs}, {"segment_T", run.segment_T}, {"energy", to_json(e)}, {"energy_checked", check_energy}, {"pass", pass}});
    log << "segments " << run.segments.size() << ", iterations " << run.segments.front().iterations << ", energy "
        << (e.pass ? "pass" : "FAIL") << "\n";
    return pass ? exit_ok : exit_estimate;
}

inline int cmd_oracle_compare(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const GridFunction u0 = initial_data(cfg);
    const RunOutcome run = run_solver(cfg, u0, cfg.decomposer());
    const Trajectory ref = splitting_oracle(u0, cfg.symbol, cfg.nonlinearity, run.trajectory.time());
    std::ofstream csv(out / "oracle_compare.csv");
    csv << "t,rel_l2\n" << std::setprecision(17);
    double worst = 0.0;
    for (std::size_t j = 1; j < ref.size(); ++j) {
        const double d = relative_l2(run.trajectory[j], ref[j]);
        worst = std::max(worst, d);
        csv << ref.time().node(static_cast<int>(j)) << "," << d << "\n";
    }
    const double final_rel = relative_l2(run.trajectory.back(), ref.back());
    const double tol = cfg.threshold("oracle_rel", 1e-3);
    const bool pass = final_rel < tol;
    write_json(out / "oracle_report.json",
               json{{"final_rel_l2", final_rel}, {"max_rel_l2", worst}, {"threshold", tol}, {"T", run.trajectory.time().T}, {"pass", pass}});
    log << "solver/oracle relative L2 at T: " << final_rel << "\n";
    return pass ? exit_ok : exit_estimate;
}

inline int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const auto reports = run_verify_suite(cfg);
    bool pass = true;
    json summary = json::array();
    for (const auto& r : reports) {
        write_json(out / ("report_" + r.id + ".json"), to_json(r));
        summary.push_back(json{{"id", r.id}, {"pass", r.pass}});
        log << (r.pass ? "PASS " : "FAIL ") << r.id << "\n";
        pass = pass && r.pass;
    }
    write_json(out / "verify_report.json", json{{"seed", cfg.seed}, {"estimates", summary}, {"pass", pass}});
    return pass ? exit_ok : exit_estimate;
}

inline int cmd_residual(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    const GridFunction u0 = initial_data(cfg);
    const Decomposer dec = cfg.decomposer();
    const RunOutcome run = run_solver(cfg, u0, dec);
    const ResidualReport r = pde_residual(run.trajectory, cfg.symbol, cfg.nonlinearity, cfg.norm, dec);
    const double limit = cfg.threshold("residual_max", kInf);
    const bool pass = std::isfinite(r.value) && r.value <= limit;
    write_json(out / "residual.json", json{{"value", r.value}, {"per_node", vector_json(r.per_node)}, {"limit", number_json(limit)}, {"pass", pass}});
    log << "residual " << r.value << "\n";
    return pass ? exit_ok : exit_estimate;
}

}  // namespace detail

/// Runs one subcommand; maps library errors to exit codes. Timestamps go to
/// metadata.json so that every other output depends on (config, seed) only.
inline int run(const std::string& sub, const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log,
               std::ostream& err) {
    try {
        std::filesystem::create_directories(out);
        int code = exit_ok;
        if (sub == "params") code = detail::cmd_params(cfg, out, log);
        else if (sub == "norm") code = detail::cmd_norm(cfg, out, log);
        else if (sub == "decompose") code = detail::cmd_decompose(cfg, out, log);
        else if (sub == "solve") code = detail::cmd_solve(cfg, out, log);
        else if (sub == "oracle-compare") code = detail::cmd_oracle_compare(cfg, out, log);
        else if (sub == "verify") code = detail::cmd_verify(cfg, out, log);
        else if (sub == "residual") code = detail::cmd_residual(cfg, out, log);
        else throw ConfigError("unknown subcommand '" + sub + "'");
        write_json(out / "metadata.json",
                   json{{"subcommand", sub}, {"finished_utc", utc_timestamp()}, {"threads", worker_threads()}, {"exit", code}});
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_config;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << "\n";
        return exit_config;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << "\n";
        return exit_divergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace modspace

#endif  // MODSPACE_DRIVER_HPP
