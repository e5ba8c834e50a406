#pragma once

#include <ostream>
#include <string>

#include "koitervi/gridfield.hpp"
#include "koitervi/lab.hpp"

namespace koitervi {

/// 12-significant-digit scientific notation, the report float format.
std::string sci12(double v);

void write_sweep_csv(std::ostream& os, const SweepReport& rep);
void write_probe_csv(std::ostream& os, const std::vector<ProbeRow>& rows);

}  // namespace koitervi
