#pragma once

#include <string>
#include <vector>

#include "spinrelax/errors.hpp"

namespace spinrelax {

enum class RelaxationQuantity { T1, T2 };

std::string quantity_name(RelaxationQuantity q);
RelaxationQuantity parse_quantity(const std::string& token);  // "T1"/"T2"

struct RelaxationPoint {
    double temperature_K;
    double time_s;
    double sigma_s;
    // Optional hyperfine-line tag carried through from the data file.
    std::string line;
};

// Measured relaxation times versus temperature. Points are kept sorted by
// temperature (non-decreasing, stable; duplicate temperatures are preserved).
struct RelaxationDataset {
    RelaxationQuantity quantity = RelaxationQuantity::T2;
    std::string label;
    std::vector<RelaxationPoint> points;
    std::vector<std::string> warnings;  // loader notes, e.g. defaulted sigmas

    // Stable sort by temperature and validate positivity; InputError on bad data.
    void sort_and_validate();
};

struct EchoPoint {
    double tau_s;
    double amplitude;  // may be negative (modulation beats through zero)
    double sigma;
};

// Echo amplitude versus interpulse delay at one temperature. Delays are
// strictly increasing; duplicates are a data error.
struct EchoTrace {
    std::string label;
    std::vector<EchoPoint> points;
    std::vector<std::string> warnings;

    void sort_and_validate();
};

}  // namespace spinrelax
