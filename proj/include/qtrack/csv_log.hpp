#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtrack/config.hpp"
#include "qtrack/sim.hpp"

// CSV serialization of run logs. Column order is fixed and documented in the
// README; floats are written as the shortest decimal that round-trips, so a
// parse of a written file reproduces the records bit-exactly. The first
// lines are `#` comments carrying the config hash, seed, and tool version.

namespace qtrack {

/// Comma-joined header row (no leading '#').
std::string csv_header();

void write_log(const std::vector<SimLogRecord>& records, std::ostream& out,
               const SimConfig& cfg);

/// Writes to path; I/O failures surface as std::runtime_error with errno text.
void write_log(const std::vector<SimLogRecord>& records, const std::string& path,
               const SimConfig& cfg);

/// Parses a file produced by write_log (comments skipped, header checked).
std::vector<SimLogRecord> read_log(std::istream& in);
std::vector<SimLogRecord> read_log(const std::string& path);

} // namespace qtrack
