#include "spinrelax/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "spinrelax/constants.hpp"

namespace spinrelax::io {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void fail(const std::string& path, int row, const std::string& what) {
    throw InputError(path + " row " + std::to_string(row) + ": " + what);
}

double parse_number(const std::string& path, int row, const std::string& column,
                    const std::string& cell) {
    if (cell.empty()) fail(path, row, "empty value in column '" + column + "'");
    try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        if (!std::isfinite(v)) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        fail(path, row, "non-numeric value '" + cell + "' in column '" + column + "'");
    }
}

struct CsvFile {
    std::vector<std::string> header;
    // (file row number, cells)
    std::vector<std::pair<int, std::vector<std::string>>> rows;
};

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    CsvFile csv;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (csv.header.empty())
            csv.header = split_csv(t);
        else
            csv.rows.emplace_back(row, split_csv(t));
    }
    if (csv.header.empty()) throw InputError(path + ": empty file (no header row)");
    return csv;
}

int column_index(const CsvFile& csv, const std::string& name) {
    for (size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return static_cast<int>(i);
    return -1;
}

int require_column(const std::string& path, const CsvFile& csv, const std::string& name) {
    int i = column_index(csv, name);
    if (i < 0) throw InputError(path + ": missing column '" + name + "'");
    return i;
}

const std::string& cell_at(const std::string& path, int row,
                           const std::vector<std::string>& cells, int index,
                           const std::string& column) {
    if (index >= static_cast<int>(cells.size()))
        fail(path, row, "missing value in column '" + column + "'");
    return cells[static_cast<size_t>(index)];
}

}  // namespace

RelaxationDataset load_relaxation_csv(const std::string& path, RelaxationQuantity quantity) {
    CsvFile csv = read_csv(path);
    int i_temp = require_column(path, csv, "temperature_K");
    int i_time = require_column(path, csv, "time_us");
    int i_sigma = column_index(csv, "sigma_us");
    int i_line = column_index(csv, "line");

    if (csv.rows.empty()) throw InputError(path + ": no data rows");

    RelaxationDataset ds;
    ds.quantity = quantity;
    ds.label = path;
    for (const auto& [row, cells] : csv.rows) {
        RelaxationPoint pt{};
        pt.temperature_K = parse_number(path, row, "temperature_K",
                                        cell_at(path, row, cells, i_temp, "temperature_K"));
        double time_us =
            parse_number(path, row, "time_us", cell_at(path, row, cells, i_time, "time_us"));
        if (!(pt.temperature_K > 0.0)) fail(path, row, "temperature_K must be > 0");
        if (!(time_us > 0.0)) fail(path, row, "time_us must be > 0");
        pt.time_s = time_us * units::us_to_s;
        if (i_sigma >= 0) {
            double sigma_us =
                parse_number(path, row, "sigma_us", cell_at(path, row, cells, i_sigma, "sigma_us"));
            if (!(sigma_us > 0.0)) fail(path, row, "sigma_us must be > 0");
            pt.sigma_s = sigma_us * units::us_to_s;
        } else {
            pt.sigma_s = 0.05 * pt.time_s;
        }
        if (i_line >= 0 && i_line < static_cast<int>(cells.size()))
            pt.line = cells[static_cast<size_t>(i_line)];
        ds.points.push_back(std::move(pt));
    }
    if (i_sigma < 0)
        ds.warnings.push_back(path + ": no sigma_us column; uncertainties default to 5% of value");
    ds.sort_and_validate();
    return ds;
}

EchoTrace load_echo_csv(const std::string& path) {
    CsvFile csv = read_csv(path);
    int i_tau = require_column(path, csv, "tau_us");
    int i_amp = require_column(path, csv, "amplitude");
    int i_sigma = require_column(path, csv, "sigma");

    if (csv.rows.empty()) throw InputError(path + ": no data rows");

    EchoTrace tr;
    tr.label = path;
    for (const auto& [row, cells] : csv.rows) {
        EchoPoint pt{};
        double tau_us = parse_number(path, row, "tau_us", cell_at(path, row, cells, i_tau, "tau_us"));
        if (!(tau_us >= 0.0)) fail(path, row, "tau_us must be >= 0");
        pt.tau_s = tau_us * units::us_to_s;
        pt.amplitude =
            parse_number(path, row, "amplitude", cell_at(path, row, cells, i_amp, "amplitude"));
        pt.sigma = parse_number(path, row, "sigma", cell_at(path, row, cells, i_sigma, "sigma"));
        if (!(pt.sigma > 0.0)) fail(path, row, "sigma must be > 0");
        tr.points.push_back(pt);
    }
    tr.sort_and_validate();
    return tr;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace spinrelax::io
