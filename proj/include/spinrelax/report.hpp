#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "spinrelax/fitting.hpp"

namespace spinrelax::report {

using ordered_json = nlohmann::ordered_json;

// Canonical text for a double: shortest round-trip decimal form, identical to
// what the JSON rendering prints. Non-finite values render "inf"/"-inf"/"nan".
std::string num_text(double v);

// JSON node for a double; non-finite values become their sentinel strings so
// documents stay valid JSON.
ordered_json num_node(double v);

ordered_json fit_outcome_node(const fitting::FitOutcome& outcome);

// Tab-separated plot data with a '#'-prefixed header row; numbers share the
// canonical rendering with JSON reports.
class TsvBuilder {
public:
    explicit TsvBuilder(std::vector<std::string> columns);

    void add_row(const std::vector<ordered_json>& cells);
    std::string str() const { return text_; }

private:
    size_t n_columns_;
    std::string text_;
};

// Human-readable rendering of a report document: indented key/value lines
// whose numbers are the JSON texts themselves.
std::string render_human(const ordered_json& doc);

}  // namespace spinrelax::report
