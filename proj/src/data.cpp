#include "spinrelax/data.hpp"

#include <algorithm>
#include <cmath>

namespace spinrelax {

std::string quantity_name(RelaxationQuantity q) {
    return q == RelaxationQuantity::T1 ? "T1" : "T2";
}

RelaxationQuantity parse_quantity(const std::string& token) {
    if (token == "T1" || token == "t1") return RelaxationQuantity::T1;
    if (token == "T2" || token == "t2") return RelaxationQuantity::T2;
    throw InputError("unknown relaxation quantity '" + token + "' (expected T1 or T2)");
}

void RelaxationDataset::sort_and_validate() {
    if (points.empty()) throw InputError("relaxation dataset has no points");
    for (const auto& p : points) {
        if (!std::isfinite(p.temperature_K) || !(p.temperature_K > 0.0))
            throw InputError("relaxation dataset: temperatures must be finite and > 0");
        if (!std::isfinite(p.time_s) || !(p.time_s > 0.0))
            throw InputError("relaxation dataset: times must be finite and > 0");
        if (!std::isfinite(p.sigma_s) || !(p.sigma_s > 0.0))
            throw InputError("relaxation dataset: uncertainties must be finite and > 0");
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const RelaxationPoint& a, const RelaxationPoint& b) {
                         return a.temperature_K < b.temperature_K;
                     });
}

void EchoTrace::sort_and_validate() {
    if (points.empty()) throw InputError("echo trace has no points");
    for (const auto& p : points) {
        if (!std::isfinite(p.tau_s) || !(p.tau_s >= 0.0))
            throw InputError("echo trace: delays must be finite and >= 0");
        if (!std::isfinite(p.amplitude))
            throw InputError("echo trace: amplitudes must be finite");
        if (!std::isfinite(p.sigma) || !(p.sigma > 0.0))
            throw InputError("echo trace: uncertainties must be finite and > 0");
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const EchoPoint& a, const EchoPoint& b) { return a.tau_s < b.tau_s; });
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].tau_s == points[i - 1].tau_s)
            throw InputError("echo trace: duplicate delay values");
}

}  // namespace spinrelax
