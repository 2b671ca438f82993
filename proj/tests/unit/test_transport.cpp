#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "tlao/tdse.hpp"

using namespace tlao;

namespace {

Numerics1D coarse() {
    Numerics1D num;
    num.grid = {-16.0, 16.0, 512};
    num.dt = 0.02;
    num.sample_interval = 0.0;
    return num;
}

TrajectorySpec cpt_trajectory() {
    TrajectorySpec t;
    t.separation = SeparationMode::Symmetric;
    return t;
}

}  // namespace

TEST_CASE("CPT imbalance grows with the separation asymmetry") {
    double prev = -1.0;
    for (double f : {0.0, 0.1, 0.2}) {
        auto traj = cpt_trajectory();
        traj.mr.t_sep = traj.mr.t_r / (1.0 + f);
        const auto r = run_cpt(traj, {}, TrapParams{}, coarse());
        const double imbalance = std::abs(r.final_populations[0] - r.final_populations[2]);
        CAPTURE(f);
        CHECK(imbalance > prev);
        prev = imbalance;
    }
}

TEST_CASE("traps that never approach leave the atom in place") {
    auto traj = cpt_trajectory();
    traj.lm.d_min = traj.mr.d_min = 8.99;
    const auto r = run_cpt(traj, {}, TrapParams{}, coarse());
    CHECK(r.final_populations[0] == doctest::Approx(1.0).epsilon(1e-6));

    PairSchedule pair;
    pair.d_min = 8.99;
    pair.t_i = 12.0;
    const auto rabi = run_rabi(pair, RampShape::Cosine, {}, TrapParams{}, coarse());
    CHECK(rabi.final_populations[2] <= 1e-4);
}

TEST_CASE("calibrated Rabi hold and its periodicity") {
    PairSchedule pair;
    pair.t_i = 12.0;
    const auto num = coarse();
    pair.t_i = calibrate_rabi_hold(pair, RampShape::Cosine, TrapParams{}, num);
    const double full = run_rabi(pair, RampShape::Cosine, {}, TrapParams{}, num).final_populations[2];
    CHECK(full >= 0.95);

    const double period = std::numbers::pi / tunneling_splitting(pair.d_min, TrapParams{}, num.grid);
    double lowest = 1.0;
    for (int k = 1; k <= 8; ++k) {
        PairSchedule p = pair;
        p.t_i += period * k / 8.0;
        lowest = std::min(lowest, run_rabi(p, RampShape::Cosine, {}, TrapParams{}, num).final_populations[2]);
    }
    CHECK(lowest <= 0.2);
}

TEST_CASE("slower tilted STIRAP does not lose efficiency") {
    PerturbationSpec tilt;
    tilt.gamma = 0.01;
    double prev = 0.0;
    for (double scale : {0.5, 1.0, 2.0}) {
        const double rho = run_stirap(TrajectorySpec{}.dilated(scale), tilt, TrapParams{}, coarse()).efficiency;
        CAPTURE(scale);
        CHECK(rho >= prev);
        prev = rho;
    }
}
