#pragma once

#include "rb/types.hpp"

#include <iosfwd>
#include <string>

namespace rb {

enum class CsvConvention {
    Auto,     // decided by an optional "returns" / "losses" header line
    Returns,  // entries are returns, negated on load
    Losses,   // entries taken verbatim
};

/// Reads a scenario matrix from a comma-delimited file. An optional single
/// header line "returns" or "losses" declares the sign convention; when
/// absent, `fallback` applies. Returns are negated on load so the matrix
/// always stores losses.
ScenarioMatrix load_scenarios(const std::string& path,
                              CsvConvention fallback = CsvConvention::Losses);

ScenarioMatrix read_scenarios(std::istream& in, const std::string& name,
                              CsvConvention fallback = CsvConvention::Losses);

/// Writes the matrix with a "losses" header line in the same format.
void write_scenarios(const std::string& path, const ScenarioMatrix& sm);

/// Reads a numeric vector from a one-column or one-row CSV file.
Vector load_vector(const std::string& path);

/// Reads a square matrix from CSV (no header).
Matrix load_matrix(const std::string& path);

}  // namespace rb
