#pragma once

#include <string>
#include <vector>

#include "lifshitz/config.hpp"

namespace lifshitz {

struct PropertyRecord {
    std::string name;
    bool pass = false;
    // Measured quantity and the bound it is compared against.
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;

    std::string to_json() const;
};

// Property suite on the configured plates at the configured gap and
// temperatures: oscillator causality, imaginary-axis D_mu scans, modified-mode
// removability, the permittivity FDR identity and the equal-temperature
// reduction of the steady pressure to the Matsubara sum.
std::vector<PropertyRecord> run_verify(const RunConfig& cfg);

}  // namespace lifshitz
