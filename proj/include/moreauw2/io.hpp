// File formats: cloud/weighted-measure CSV, GaussianSpec and AffineMap JSON,
// and helpers for deterministic CSV emission (shortest round-trip doubles,
// atomic writes).

#ifndef MOREAUW2_IO_HPP
#define MOREAUW2_IO_HPP

#include <string>
#include <vector>

#include "moreauw2/types.hpp"

namespace mw2 {

// Cloud CSV: header "x0,x1,...,x{d-1}", one point per row, '.' decimal
// separator. Weighted measures append a trailing "w" column.
EmpiricalCloud read_cloud_csv(const std::string& path);
WeightedMeasure read_weighted_csv(const std::string& path);
void write_cloud_csv(const EmpiricalCloud& cloud, const std::string& path);
void write_weighted_csv(const WeightedMeasure& measure,
                        const std::string& path);

// True if the CSV header carries the trailing weight column.
bool csv_has_weights(const std::string& path);

// GaussianSpec JSON: {"mean":[...],"cov":[[...],...]}.
GaussianSpec read_gaussian_json(const std::string& path);
GaussianSpec parse_gaussian_json(const std::string& text);

// AffineMap JSON: {"matrix":[[...],...],"shift":[...]}.
AffineMap read_affine_json(const std::string& path);

// Shortest representation that round-trips the double exactly.
std::string format_double(double value);

// Writes to a temporary sibling and renames into place.
void atomic_write(const std::string& path, const std::string& contents);

// In-memory table with named columns; the exchange type for sweep results.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

}  // namespace mw2

#endif
