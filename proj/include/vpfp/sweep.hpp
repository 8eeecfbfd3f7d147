#pragma once

#include <string>

#include "vpfp/config.hpp"
#include "vpfp/output.hpp"

namespace vpfp {

// Grid of runs over sweep.tau_list x sweep.delta_list x sweep.seed_list with
// a bounded worker pool (VPFP_WORKERS, default the OpenMP thread count).
// Each worker owns one cell end-to-end and writes its own sample CSV; a cell
// that fails records its status without disturbing the others. Returns the
// ordered cell table (also written to <prefix>_sweep.csv under out_dir).
std::vector<SweepCell> run_sweep(const RunSetup& setup, const std::string& out_dir);

}  // namespace vpfp
