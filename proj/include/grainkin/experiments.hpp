#pragma once

#include <string>
#include <vector>

#include "grainkin/config.hpp"

// The six reproducible experiments and their CSV / gnuplot outputs.

namespace grainkin {

struct ReportRow {
    std::string key;
    double value = 0.0;
    std::string provenance;  ///< "paper" (against a published constant) or "oracle" (against a quadrature)
    std::string status;      ///< "pass", "fail" or "record" (measured, no threshold)
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  ///< NaN cells are written empty
};

struct ExperimentResult {
    Table series;                      ///< first column is t
    std::vector<ReportRow> report;
    std::vector<std::pair<std::string, Table>> extra;  ///< further CSVs (file name, table)
    std::string error;                 ///< non-empty when the run aborted

    bool all_pass() const;
    /// Value of the first row named `key`; throws std::out_of_range if absent.
    const ReportRow& row(const std::string& key) const;
};

/// One line per experiment: name and the keys it reads.
std::string list_experiments();

/// Runs the configured experiment. Solver failures are caught and recorded in `error`
/// together with a diagnostic report row.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes series.csv, report.csv, plot.gp, config.txt and any extra tables to cfg.output_dir.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

/// run_experiment + write_outputs; 0 on success, 2 if a criterion failed, 1 on runtime error.
int run(const ExperimentConfig& cfg);

/// CSV text with `.` decimals, `,` separators and LF endings; numbers in shortest round-trip form.
std::string to_csv(const Table& t);
std::string to_csv(const std::vector<ReportRow>& rows);

}  // namespace grainkin
