#pragma once

#include <string>

#include "pursuit/csv.hpp"
#include "pursuit/scenario.hpp"

namespace pursuit {

enum class RunMode { Vision, Truth };

struct RunConfig {
    Scenario scenario;
    RunMode mode = RunMode::Vision;
    std::uint64_t seed = 1;     // drives maneuver schedule and measurement noise
    std::string out_dir;        // when non-empty, run.csv (and frames) are written
    bool dump_frames = false;   // PNG frame dumps under out_dir/frames
};

// Closed-loop execution: render -> track -> estimate -> guide -> step, one
// command per frame. In truth mode the renderer/tracker/estimator are bypassed
// and guidance sees exact states. Returns the per-frame log; the column
// schema is stable and shared with emit_plots. Deterministic given the
// scenario and seed. Never contains NaN/Inf: invalid measurement cells hold 0
// with meas_valid = 0.
CsvTable run(const RunConfig& cfg);

// Run-log column names in order.
const std::vector<std::string>& run_log_columns();

}  // namespace pursuit
