#ifndef CC_CSV_HPP
#define CC_CSV_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "cc/params.hpp"
#include "cc/samplers.hpp"

namespace cc {

// Parsed compositional CSV. Rows that fail SimplexPoint validation (or have
// the wrong arity) land in `rejected` with their 1-based line number and a
// reason; they are never silently dropped.
struct CompositionTable {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<SimplexPoint> rows;
  std::vector<std::pair<int, std::string>> rejected;
  int K = 0;
};

// Dialect: comma-separated, UTF-8, LF or CRLF; an optional single header
// line is auto-detected by a non-numeric first token. `smooth` > 0 applies
// the (x + s) / (1 + s K) adjustment to every row before validation.
CompositionTable read_composition_csv(std::istream& in, double smooth = 0.0);
CompositionTable read_composition_csv_file(const std::string& path,
                                           double smooth = 0.0);

// Numeric rectangular CSV (predictors); same header auto-detection.
Eigen::MatrixXd read_matrix_csv(std::istream& in,
                                std::vector<std::string>* header = nullptr);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path,
                                     std::vector<std::string>* header = nullptr);

// Shortest round-trip decimal form (up to 17 significant digits).
std::string format_full(double v);

void write_samples_csv(std::ostream& out, const SampleBatch& batch);

// Number parser for CLI lists; accepts plain decimals and a/b fractions.
double parse_number(const std::string& token);
std::vector<double> parse_number_list(const std::string& csv_list);

}  // namespace cc

#endif  // CC_CSV_HPP
