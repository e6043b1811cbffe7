#pragma once

#include <iosfwd>
#include <string>

#include "tli/simulate.hpp"

namespace tli {

// Line-oriented record format:
//   header lines "#key value..." (version, scheme, epsilon, optional true_g,
//   seed/stream, shots, column names), then one outcome per line.
// Columns by scheme:
//   direct / entangled : delta outcome
//   heterodyne         : re_mu im_mu re_nu im_nu
//   homodyne           : delta x y
// Values are written with 17 significant digits so a reloaded record is
// bit-identical to the original.
void write_record(std::ostream& out, const MeasurementRecord& record);
void write_record_file(const std::string& path, const MeasurementRecord& record);

MeasurementRecord read_record(std::istream& in);
MeasurementRecord read_record_file(const std::string& path);

}  // namespace tli
