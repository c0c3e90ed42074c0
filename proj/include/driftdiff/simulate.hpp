// Time loop: fixed-dt implicit Euler from t = 0 to T with per-step
// diagnostics. Deterministic given the system and settings.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "driftdiff/diagnostics.hpp"
#include "driftdiff/solver.hpp"

namespace driftdiff {

struct RunSettings {
    double T = 1.0;
    StepParams step;
    int diagnostics_cadence = 1;  // record every k-th step (last step always recorded)
    DiagnosticThresholds thresholds;

    void validate() const {
        require(T > 0.0, "RunSettings: T must be > 0");
        step.validate();
        require(diagnostics_cadence >= 1, "RunSettings: diagnostics cadence must be >= 1");
    }
};

struct SimulationResult {
    SystemState final_state;          // last valid state
    std::vector<DiagnosticsRecord> records;
    bool ok = false;
    std::string error;
    int steps_taken = 0;
    bool any_flag = false;
};

using StepObserver = std::function<void(const SystemState&, const DiagnosticsRecord&)>;

inline SimulationResult run_simulation(const System& sys, const RunSettings& settings,
                                       const StepObserver& observer = {}) {
    settings.validate();
    sys.validate();
    SimulationResult result;
    SystemState state = make_initial_state(sys);
    result.final_state = state;

    const double dt = settings.step.dt;
    int step = 0;
    double t = 0.0;
    while (t < settings.T - 1e-12 * settings.T) {
        StepParams sp = settings.step;
        sp.dt = std::min(dt, settings.T - t);  // final step lands exactly on T
        try {
            auto [next, report] = assemble_step(sys, state, sp);
            ++step;
            t = next.t;
            const bool record_now = (step % settings.diagnostics_cadence == 0) || (t >= settings.T - 1e-12);
            DiagnosticsRecord rec = record_step(sys, state, next, report, settings.thresholds);
            if (!rec.flags.empty()) result.any_flag = true;
            state = std::move(next);
            if (record_now) {
                if (observer) observer(state, rec);
                result.records.push_back(std::move(rec));
            }
        } catch (const SolverError& e) {
            result.error = e.what();
            result.ok = false;
            result.final_state = state;  // last valid state persisted
            result.steps_taken = step;
            // terminal record with the norms of the last valid state, so the
            // trajectory stays well formed
            StepReport failed;
            failed.species.resize(sys.species.size());
            DiagnosticsRecord rec = record_step(sys, state, state, failed, settings.thresholds);
            rec.flags.push_back(DiagnosticFlag::PicardFail);
            result.any_flag = true;
            result.records.push_back(std::move(rec));
            return result;
        }
    }
    result.final_state = std::move(state);
    result.steps_taken = step;
    result.ok = true;
    return result;
}

}  // namespace driftdiff
