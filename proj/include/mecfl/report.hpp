#pragma once

// CSV and JSON-lines writers. Numbers are written with the shortest
// round-trip representation, independent of the global locale.

#include <ostream>
#include <string>
#include <vector>

#include "mecfl/orchestrator.hpp"
#include "mecfl/sweep.hpp"

namespace mecfl {

std::string format_double(double x);

extern const char* const kIterationCsvHeader;
extern const char* const kSweepCsvHeader;

/// One row per iteration.
void write_iteration_csv(std::ostream& out, const std::vector<RoundMetrics>& trace);

/// One row per sweep point.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// One JSON object per iteration holding the allocation in force.
void write_allocation_trace(std::ostream& out, const std::vector<AllocationState>& allocations);

/// Opens `path` for writing or throws ValidationError.
void write_file(const std::string& path, const std::string& contents);

}  // namespace mecfl
