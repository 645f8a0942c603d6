#ifndef CC_SERIALIZE_HPP
#define CC_SERIALIZE_HPP

#include <iosfwd>
#include <vector>

#include "cc/inference.hpp"
#include "cc/samplers.hpp"

namespace cc {

// CSV forms. Field orders are fixed (see README): fit reports emit a
// key,value pair per line with the trace appended as trace rows; tables
// emit one header line plus one record per row.
void write_fit_report_csv(std::ostream& out, const FitReport& report,
                          bool include_trace = false);
void write_bias_table_csv(std::ostream& out, const std::vector<BiasRow>& rows);
void write_bench_table_csv(std::ostream& out, const std::vector<BenchRow>& rows);

// JSON Lines: one object per line, keys in documented order.
void write_fit_report_jsonl(std::ostream& out, const FitReport& report,
                            bool include_trace = false);
void write_bias_table_jsonl(std::ostream& out, const std::vector<BiasRow>& rows);

void write_glm_model_json(std::ostream& out, const GlmModel& model);
GlmModel read_glm_model_json(std::istream& in);

}  // namespace cc

#endif  // CC_SERIALIZE_HPP
