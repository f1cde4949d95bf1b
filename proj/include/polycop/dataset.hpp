#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polycop/matrix.hpp"

namespace polycop {

// Maps file columns onto model roles. A column may appear in both z and x;
// identification later requires at least one column exclusive to each side.
struct DataSchema {
    std::string choice;
    std::string outcome;
    std::vector<std::string> z_cols;     // choice-equation covariates
    std::vector<std::string> x_cols;     // outcome-equation covariates
    std::vector<std::string> zext_cols;  // extra exogenous first-stage columns
    std::string earnings;                // realized earnings response (optional)
    std::string hours;                   // realized working-hours response (optional)
    std::vector<std::string> wage_cols;  // direct per-alternative expected wages (optional)
    std::string group;                   // optional group column (subsample fits)
    std::vector<std::string> proxy_cols;  // optional proxy covariates, appended to x

    bool has_first_stage() const { return !earnings.empty() && !hours.empty(); }
};

// Validated rectangular dataset with role bookkeeping.
struct Dataset {
    DataSchema schema;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;  // column-major numeric payload
    std::vector<int> choice;                   // 1-based alternative per row
    std::vector<int> outcome;                  // 0/1 per row
    int num_alternatives = 0;

    std::vector<std::string> z_only;  // exclusion bookkeeping
    std::vector<std::string> x_only;
    std::vector<std::size_t> dropped_lines;  // 1-based file lines removed by validation

    std::size_t n() const { return choice.size(); }
    bool has_column(const std::string& name) const;
    const std::vector<double>& col(const std::string& name) const;

    // n x k design matrix from named columns, in the given order.
    Matrix design(const std::vector<std::string>& names) const;

    // Rows where the group column equals value (compared exactly).
    Dataset filter_group(double value) const;

    void record_exclusions();
};

// Loads and validates a comma-delimited file with a header row.
// Rows with missing required fields are dropped and recorded in
// dropped_lines; malformed cells and out-of-range choice/outcome values
// raise DataError with the file location. expected_alternatives = 0 infers J
// from the data.
Dataset load_dataset(const std::string& path, const DataSchema& schema,
                     int expected_alternatives = 0);

// Canonical echo of a dataset: header plus full-precision rows, bit-stable
// across reruns.
void save_dataset(const Dataset& ds, const std::string& path);

// Numeric views the estimators consume: choice design, outcome design, and
// per-alternative expected hourly wages.
struct ModelData {
    Matrix z;    // n x kz
    Matrix x;    // n x kx
    Matrix vl;   // n x J
    std::vector<int> choice;   // 1-based
    std::vector<int> outcome;  // 0/1
    int J = 0;

    std::size_t n() const { return choice.size(); }
    void validate() const;
};

}  // namespace polycop
