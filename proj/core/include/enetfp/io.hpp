#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "enetfp/experiments.hpp"
#include "enetfp/operators.hpp"
#include "enetfp/selection.hpp"
#include "enetfp/solver.hpp"

namespace enetfp {

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

/// Numeric CSV with a mandatory header row. Throws DataError on a missing
/// file, ragged rows or non-numeric cells.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<memory>");
std::string format_csv(const CsvTable& table);

/// Dataset CSV: columns x_1..x_d then y_1..y_m.
Dataset read_dataset_csv(const std::string& path);
Dataset parse_dataset_csv(const std::string& text, const std::string& origin = "<memory>");
std::string format_dataset_csv(const Dataset& data);

/// JSON documents (2-space indent, keys sorted, shortest round-trip doubles).
std::string coefficients_json(const Coefficients& beta);
std::string solver_result_json(const SolverResult& result);
std::string selection_report_json(const SelectionReport& report);
std::string experiment_report_json(const ExperimentReport& report);

/// One row per cell: seed, params..., metrics..., support size.
std::string experiment_report_csv(const ExperimentReport& report);

}  // namespace enetfp
