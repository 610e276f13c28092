#include "spinrelax/report.hpp"

#include <cmath>

namespace spinrelax::report {

std::string num_text(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return ordered_json(v).dump();
}

ordered_json num_node(double v) {
    if (!std::isfinite(v)) return num_text(v);
    return v;
}

ordered_json fit_outcome_node(const fitting::FitOutcome& outcome) {
    ordered_json node;
    ordered_json params = ordered_json::object();
    for (const auto& [name, value] : outcome.parameters) params[name] = num_node(value);
    node["parameters"] = params;
    if (!outcome.stderrs.empty()) {
        ordered_json errs = ordered_json::object();
        for (const auto& [name, value] : outcome.stderrs) errs[name] = num_node(value);
        node["stderrs"] = errs;
    }
    node["reduced_chi2"] = num_node(outcome.reduced_chi2);
    node["iterations"] = outcome.iterations;
    node["converged"] = outcome.converged;
    node["singular"] = outcome.singular;
    ordered_json residuals = ordered_json::array();
    for (double r : outcome.residuals) residuals.push_back(num_node(r));
    node["residuals"] = residuals;
    if (!outcome.excluded_points.empty()) {
        ordered_json excluded = ordered_json::array();
        for (const auto& [k, i] : outcome.excluded_points)
            excluded.push_back(ordered_json::array({k, i}));
        node["excluded_points"] = excluded;
    }
    if (!outcome.warnings.empty()) node["warnings"] = outcome.warnings;
    return node;
}

TsvBuilder::TsvBuilder(std::vector<std::string> columns) : n_columns_(columns.size()) {
    text_ = "#";
    for (size_t i = 0; i < columns.size(); ++i) {
        text_ += (i == 0 ? " " : "\t");
        text_ += columns[i];
    }
    text_ += "\n";
}

void TsvBuilder::add_row(const std::vector<ordered_json>& cells) {
    if (cells.size() != n_columns_)
        throw InputError("TSV row width does not match the header");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += "\t";
        if (cells[i].is_string())
            text_ += cells[i].get<std::string>();
        else
            text_ += cells[i].dump();
    }
    text_ += "\n";
}

namespace {

void render_node(const ordered_json& node, const std::string& key, int depth, std::string& out) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    if (node.is_object()) {
        if (!key.empty()) out += indent + key + ":\n";
        for (const auto& [k, v] : node.items()) render_node(v, k, key.empty() ? depth : depth + 1, out);
        return;
    }
    if (node.is_array()) {
        // Arrays render inline when scalar-only, one line per element otherwise.
        bool scalars = true;
        for (const auto& v : node)
            if (v.is_object() || v.is_array()) scalars = false;
        if (scalars) {
            out += indent + key + ": ";
            for (size_t i = 0; i < node.size(); ++i) {
                if (i) out += ", ";
                const auto& v = node[i];
                out += v.is_string() ? v.get<std::string>() : v.dump();
            }
            out += "\n";
            return;
        }
        out += indent + key + ":\n";
        for (size_t i = 0; i < node.size(); ++i)
            render_node(node[i], "- " + std::to_string(i), depth + 1, out);
        return;
    }
    out += indent + key + ": " + (node.is_string() ? node.get<std::string>() : node.dump()) + "\n";
}

}  // namespace

std::string render_human(const ordered_json& doc) {
    std::string out;
    render_node(doc, "", 0, out);
    return out;
}

}  // namespace spinrelax::report
