#include "polycop/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "polycop/errors.hpp"

namespace polycop {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool is_missing(const std::string& s) {
    return s.empty() || s == "NA" || s == "na" || s == "nan" || s == "NaN" || s == ".";
}

double parse_cell(const std::string& s, std::size_t line_no, const std::string& col) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DataError("parse error: non-numeric value '" + s + "' in column '" + col +
                        "' at line " + std::to_string(line_no));
    }
    if (pos != s.size())
        throw DataError("parse error: non-numeric value '" + s + "' in column '" + col +
                        "' at line " + std::to_string(line_no));
    return v;
}

}  // namespace

bool Dataset::has_column(const std::string& name) const {
    return std::find(column_names.begin(), column_names.end(), name) != column_names.end();
}

const std::vector<double>& Dataset::col(const std::string& name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return columns[i];
    throw DataError("unknown column '" + name + "'");
}

Matrix Dataset::design(const std::vector<std::string>& names) const {
    Matrix m(n(), names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto& c = col(names[j]);
        for (std::size_t i = 0; i < n(); ++i) m(i, j) = c[i];
    }
    return m;
}

Dataset Dataset::filter_group(double value) const {
    if (schema.group.empty()) throw ConfigError("group filter requested but schema has no group column");
    const auto& g = col(schema.group);
    Dataset out;
    out.schema = schema;
    out.column_names = column_names;
    out.num_alternatives = num_alternatives;
    out.columns.assign(columns.size(), {});
    for (std::size_t i = 0; i < n(); ++i) {
        if (g[i] != value) continue;
        for (std::size_t c = 0; c < columns.size(); ++c) out.columns[c].push_back(columns[c][i]);
        out.choice.push_back(choice[i]);
        out.outcome.push_back(outcome[i]);
    }
    out.record_exclusions();
    return out;
}

void Dataset::record_exclusions() {
    z_only.clear();
    x_only.clear();
    for (const auto& zc : schema.z_cols)
        if (std::find(schema.x_cols.begin(), schema.x_cols.end(), zc) == schema.x_cols.end())
            z_only.push_back(zc);
    for (const auto& xc : schema.x_cols)
        if (std::find(schema.z_cols.begin(), schema.z_cols.end(), xc) == schema.z_cols.end())
            x_only.push_back(xc);
}

Dataset load_dataset(const std::string& path, const DataSchema& schema,
                     int expected_alternatives) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("data file '" + path + "' is empty (no header)");
    const auto header = split_csv_line(line);

    // Every column the schema references must exist.
    std::vector<std::string> referenced = {schema.choice, schema.outcome};
    for (const auto* grp : {&schema.z_cols, &schema.x_cols, &schema.zext_cols, &schema.wage_cols,
                            &schema.proxy_cols})
        referenced.insert(referenced.end(), grp->begin(), grp->end());
    if (!schema.earnings.empty()) referenced.push_back(schema.earnings);
    if (!schema.hours.empty()) referenced.push_back(schema.hours);
    if (!schema.group.empty()) referenced.push_back(schema.group);
    for (const auto& name : referenced) {
        if (name.empty()) continue;
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw DataError("schema error: column '" + name + "' not present in '" + path + "'");
    }
    if (schema.choice.empty() || schema.outcome.empty())
        throw DataError("schema error: choice and outcome columns are required");

    Dataset ds;
    ds.schema = schema;
    ds.column_names = header;
    ds.columns.assign(header.size(), {});

    const std::set<std::string> required(referenced.begin(), referenced.end());
    std::size_t choice_idx = header.size(), outcome_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == schema.choice) choice_idx = c;
        if (header[c] == schema.outcome) outcome_idx = c;
    }

    std::size_t line_no = 1;
    std::vector<double> row(header.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("parse error: line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, header has " +
                            std::to_string(header.size()));
        bool drop = false;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (is_missing(cells[c])) {
                if (required.count(header[c])) {
                    drop = true;
                    break;
                }
                row[c] = std::nan("");
                continue;
            }
            row[c] = parse_cell(cells[c], line_no, header[c]);
        }
        if (drop) {
            ds.dropped_lines.push_back(line_no);
            continue;
        }
        const double cv = row[choice_idx];
        if (cv != std::floor(cv) || cv < 1.0 ||
            (expected_alternatives > 0 && cv > expected_alternatives))
            throw DataError("range error: choice value " + std::to_string(cv) + " at line " +
                            std::to_string(line_no) + " outside 1.." +
                            std::to_string(expected_alternatives > 0 ? expected_alternatives : 0) +
                            (expected_alternatives > 0 ? "" : " (must be a positive integer)"));
        const double mv = row[outcome_idx];
        if (mv != 0.0 && mv != 1.0)
            throw DataError("range error: outcome value " + std::to_string(mv) + " at line " +
                            std::to_string(line_no) + " must be 0 or 1");
        for (std::size_t c = 0; c < cells.size(); ++c) ds.columns[c].push_back(row[c]);
        ds.choice.push_back(static_cast<int>(cv));
        ds.outcome.push_back(static_cast<int>(mv));
    }
    if (ds.n() == 0) throw DataError("data file '" + path + "' contains no valid rows");

    ds.num_alternatives = expected_alternatives > 0
                              ? expected_alternatives
                              : *std::max_element(ds.choice.begin(), ds.choice.end());
    if (ds.num_alternatives < 2)
        throw DataError("data file '" + path + "' must contain at least two alternatives");
    ds.record_exclusions();
    return ds;
}

void ModelData::validate() const {
    const std::size_t rows = choice.size();
    if (rows == 0) throw DataError("ModelData: no rows");
    if (J < 2) throw DataError("ModelData: need at least two alternatives");
    if (z.rows() != rows || x.rows() != rows || vl.rows() != rows || outcome.size() != rows)
        throw ShapeError("ModelData: row counts disagree");
    if (vl.cols() != static_cast<std::size_t>(J))
        throw ShapeError("ModelData: wage matrix must have one column per alternative");
    for (std::size_t i = 0; i < rows; ++i) {
        if (choice[i] < 1 || choice[i] > J)
            throw DataError("ModelData: choice out of range at row " + std::to_string(i + 1));
        if (outcome[i] != 0 && outcome[i] != 1)
            throw DataError("ModelData: outcome not binary at row " + std::to_string(i + 1));
    }
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write data file '" + path + "'");
    for (std::size_t c = 0; c < ds.column_names.size(); ++c)
        out << (c ? "," : "") << ds.column_names[c];
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t c = 0; c < ds.columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.columns[c][i]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace polycop
