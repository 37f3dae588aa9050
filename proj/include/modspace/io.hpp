#ifndef MODSPACE_IO_HPP
#define MODSPACE_IO_HPP

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "modspace/evolve.hpp"
#include "modspace/verify.hpp"

namespace modspace {

using json = nlohmann::json;

// nlohmann turns non-finite doubles into null; keep them readable instead.
inline json number_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline json vector_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number_json(x));
    return a;
}

inline json fit_json(const LinearFit& f) {
    return json{{"slope", number_json(f.slope)}, {"intercept", number_json(f.intercept)}, {"r2", number_json(f.r2)}};
}

inline json to_json(const EstimateReport& r) {
    json j;
    j["id"] = r.id;
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = number_json(v);
    j["params"] = params;
    j["ratios"] = json{{"min", number_json(r.ratios.min)},
                       {"med", number_json(r.ratios.median)},
                       {"max", number_json(r.ratios.max)},
                       {"count", r.ratios.count}};
    j["fit"] = r.fit ? fit_json(*r.fit) : json(nullptr);
    if (!r.axis_fits.empty()) {
        json axes = json::object();
        for (const auto& [k, f] : r.axis_fits) axes[k] = fit_json(f);
        j["axis_fits"] = axes;
    }
    if (!r.series.empty()) {
        json s = json::object();
        for (const auto& [k, v] : r.series) s[k] = vector_json(v);
        j["series"] = s;
    }
    j["bound"] = number_json(r.bound);
    j["pass"] = r.pass;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const SolveReport& r) {
    return json{{"converged", r.converged},
                {"iterations", r.iterations},
                {"diff_norms", vector_json(r.diff_norms)},
                {"contraction_factors", vector_json(r.contraction_factors)},
                {"final_diff_norm", number_json(r.final_diff_norm)},
                {"tail_mass", number_json(r.tail_mass)},
                {"T", r.T},
                {"J", r.J},
                {"scheme", r.scheme},
                {"warnings", r.warnings}};
}

inline json to_json(const ParameterRecipe& r) {
    return json{{"regime", to_string(r.regime)},
                {"gamma_K", number_json(r.gamma_K)},
                {"gamma_qK", number_json(r.gamma_qK)},
                {"gamma_lower", number_json(r.gamma_lower)},
                {"gamma_strict", r.gamma_strict},
                {"gamma", number_json(r.gamma)},
                {"s_threshold", number_json(r.s_threshold)},
                {"global", r.global},
                {"delta", number_json(r.delta)},
                {"factors", r.factors}};
}

inline json to_json(const EnergyReport& r) {
    return json{{"pass", r.pass}, {"monotone_l2", r.monotone_l2}, {"max_step_increase", number_json(r.max_step_increase)},
                {"rows", r.rows.size()}};
}

/// One row per node; `monotone` flags whether 1/2 ||u||^2 did not grow since the previous node.
inline void write_energy_csv(const EnergyReport& r, std::ostream& os, double step_tol = 1e-10) {
    os << "t,half_l2_sq,cumulative_dissipation,bound,pass,monotone\n" << std::setprecision(17);
    double prev = kInf;
    for (const auto& row : r.rows) {
        const bool mono = !(row.half_l2_sq - prev > step_tol * std::max(1.0, prev));
        os << row.t << "," << row.half_l2_sq << "," << row.cumulative_dissipation << "," << row.bound << ","
           << (row.pass ? 1 : 0) << "," << (mono ? 1 : 0) << "\n";
        prev = row.half_l2_sq;
    }
}

/// All states back to back, node order, in the write_binary layout.
inline void write_trajectory(const Trajectory& traj, std::ostream& os) {
    for (const auto& s : traj.states()) write_binary(s, os);
}

inline Trajectory read_trajectory(const TorusGrid& g, const TimeGrid& tg, std::istream& is) {
    std::vector<GridFunction> states;
    for (std::size_t j = 0; j < tg.node_count(); ++j) states.push_back(read_binary(g, is));
    return Trajectory(tg, std::move(states));
}

inline json manifest_json(const Trajectory& traj) {
    const auto& g = traj.grid();
    return json{{"T", traj.time().T}, {"J", traj.time().J}, {"L", g.L}, {"N", g.N}, {"d", g.d}, {"layout", "node-major, re/im float64"}};
}

/// Pretty-printed with sorted keys, so equal reports give equal bytes.
inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace modspace

#endif  // MODSPACE_IO_HPP
