#pragma once

#include <string>
#include <vector>

#include "dataset.hpp"

namespace zic {

/// Builds a Dataset from a CSV file (header row required, comma separated,
/// "." decimal point). Non-numeric covariate columns are expanded to
/// reference-coded indicators, reference level = lexicographically first.
/// Rows with missing values (empty or "NA" cells) are rejected with an error
/// listing the offending rows. An intercept column is prepended to both
/// designs unless `intercept` is false.
Dataset load_dataset_csv(const std::string& path, const std::string& response,
                         const std::vector<std::string>& count_columns,
                         const std::vector<std::string>& zero_columns,
                         bool intercept = true);

/// Writes a dataset back to CSV with full-precision doubles (%.17g), one
/// column per distinct non-intercept covariate. Reloading with the same
/// formulas reproduces the dataset bit for bit.
void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::string& response_name = "y");

}  // namespace zic
