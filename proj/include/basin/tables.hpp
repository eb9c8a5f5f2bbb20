#pragma once

#include <string>
#include <vector>

#include "basin/manifest.hpp"

namespace basin {

/// A posterior reference table with full-precision values and display
/// strings at the table's printed precision.
struct PosteriorTable {
    std::string name;
    std::string row_label;
    std::vector<long> rows;  // n
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> value;           // displayed probability
    std::vector<std::vector<double>> log_complement;  // ln(1 - value), exact
    std::vector<std::vector<std::string>> display;
    std::vector<std::vector<std::string>> complement_display;
};

/// P(s >= 1-eps | H_n) = 1 - (1-eps)^{n+1} under Beta(1,1), n x eps grid.
PosteriorTable make_table1();

/// P(s = 1 | H_n) = p / (p + (1-p)/(n+1)) under the spike-and-slab prior
/// with a uniform slab, n x p grid.
PosteriorTable make_table2();

/// Lower bounds on P(K = 1 | H_n) for the geometric and zero-truncated
/// Poisson(1) priors over an n x alpha grid.
PosteriorTable make_table3();

std::string table_csv(const PosteriorTable& table);
json table_json(const PosteriorTable& table);

/// "2.39e-05" from ln(complement); safe far below double underflow.
std::string sci_from_log(double ln_complement);

/// "1-2.39e-05"
std::string near_one_display(double ln_complement);

/// Minimal CSV round-trip helpers (cells must not contain commas).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string emit_csv(const std::vector<std::vector<std::string>>& cells);

}  // namespace basin
