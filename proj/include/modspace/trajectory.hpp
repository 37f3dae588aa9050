#ifndef MODSPACE_TRAJECTORY_HPP
#define MODSPACE_TRAJECTORY_HPP

#include <vector>

#include "modspace/error.hpp"
#include "modspace/grid.hpp"

namespace modspace {

/// Uniform time grid t_j = j T / J, j = 0..J.
struct TimeGrid {
    double T = 0.25;
    int J = 64;

    TimeGrid() = default;
    TimeGrid(double horizon, int steps) : T(horizon), J(steps) { validate(); }

    void validate() const {
        if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("time horizon T must be positive");
        if (J < 2) throw DomainError("time grid needs J >= 2 steps");
    }
    double dt() const { return T / J; }
    double node(int j) const { return T * static_cast<double>(j) / J; }
    std::size_t node_count() const { return static_cast<std::size_t>(J) + 1; }

    /// Trapezoid weights over [0, T].
    std::vector<double> trapezoid_weights() const {
        std::vector<double> w(node_count(), dt());
        w.front() = w.back() = 0.5 * dt();
        return w;
    }
};

/// States u(t_j), one per node of the time grid.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(TimeGrid tg, std::vector<GridFunction> states) : tg_(tg), states_(std::move(states)) {
        tg_.validate();
        require(states_.size() == tg_.node_count(), "trajectory needs one state per time node");
        for (const auto& s : states_) require(s.grid() == states_.front().grid(), "trajectory states must share a grid");
    }

    /// u(t) = f for every node.
    static Trajectory constant(TimeGrid tg, const GridFunction& f) {
        return Trajectory(tg, std::vector<GridFunction>(tg.node_count(), f));
    }

    const TimeGrid& time() const { return tg_; }
    const std::vector<GridFunction>& states() const { return states_; }
    std::vector<GridFunction>& states() { return states_; }
    const GridFunction& operator[](std::size_t j) const { return states_[j]; }
    const GridFunction& back() const { return states_.back(); }
    std::size_t size() const { return states_.size(); }
    bool empty() const { return states_.empty(); }
    const TorusGrid& grid() const {
        require(!states_.empty(), "empty trajectory");
        return states_.front().grid();
    }

private:
    TimeGrid tg_{};
    std::vector<GridFunction> states_;
};

}  // namespace modspace

#endif  // MODSPACE_TRAJECTORY_HPP
