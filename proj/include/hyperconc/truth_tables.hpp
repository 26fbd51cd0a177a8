// truth_tables.hpp
// Characteristic input/output tables for the four devices, used by the
// CLI `devices` subcommand and the golden-file tests.

#pragma once

#include "hyperconc/devices.hpp"

namespace hyperconc {

// PPC comparator stage only (the two PBS0s): routing of the four
// polarization products with uniform spatial superpositions.
std::string ppc_routing_json();

// Full-device detector statistics for the characteristic inputs of each
// device, under the given detector model.
std::string device_tables_json(DetectorModel model);

std::string device_tables_text(DetectorModel model);

}  // namespace hyperconc
