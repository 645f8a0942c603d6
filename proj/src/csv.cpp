#include "cc/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cc {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double* out) {
  std::string t = trim(token);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [p, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && p == end;
}

// Strips one trailing '\r' (CRLF input) and returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool looks_like_header(const std::string& line) {
  double v;
  return !parse_double(split_fields(line).front(), &v);
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CompositionTable read_composition_csv(std::istream& in, double smooth) {
  CompositionTable table;
  std::string line;
  int lineno = 0;
  bool first_content = true;
  while (next_line(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (first_content) {
      first_content = false;
      if (looks_like_header(line)) {
        for (const std::string& f : split_fields(line))
          table.header.push_back(trim(f));
        continue;
      }
    }
    std::vector<std::string> fields = split_fields(line);
    std::vector<double> vals;
    vals.reserve(fields.size());
    bool ok = true;
    for (const std::string& f : fields) {
      double v;
      if (!parse_double(f, &v)) {
        table.rejected.emplace_back(lineno, "non-numeric field '" + trim(f) + "'");
        ok = false;
        break;
      }
      vals.push_back(v);
    }
    if (!ok) continue;
    if (table.K == 0 && vals.size() >= 2) table.K = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != table.K || table.K < 2) {
      table.rejected.emplace_back(lineno, "expected " + std::to_string(table.K) +
                                              " columns, got " +
                                              std::to_string(vals.size()));
      continue;
    }
    if (smooth > 0.0) {
      double denom = 1.0 + smooth * table.K;
      for (double& v : vals) v = (v + smooth) / denom;
    }
    try {
      table.rows.emplace_back(std::move(vals));
    } catch (const std::exception& e) {
      table.rejected.emplace_back(lineno, e.what());
    }
  }
  return table;
}

CompositionTable read_composition_csv_file(const std::string& path,
                                           double smooth) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_composition_csv(in, smooth);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in,
                                std::vector<std::string>* header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool first_content = true;
  while (next_line(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (first_content) {
      first_content = false;
      if (looks_like_header(line)) {
        if (header)
          for (const std::string& f : split_fields(line))
            header->push_back(trim(f));
        continue;
      }
    }
    std::vector<double> vals;
    for (const std::string& f : split_fields(line)) {
      double v;
      if (!parse_double(f, &v))
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": non-numeric field '" + trim(f) + "'");
      vals.push_back(v);
    }
    if (!rows.empty() && vals.size() != rows.front().size())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": ragged row");
    rows.push_back(std::move(vals));
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path,
                                     std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_matrix_csv(in, header);
}

void write_samples_csv(std::ostream& out, const SampleBatch& batch) {
  for (const SimplexPoint& p : batch.points) {
    for (int i = 0; i < p.K(); ++i) {
      if (i) out << ',';
      out << format_full(p[i]);
    }
    out << '\n';
  }
}

double parse_number(const std::string& token) {
  std::string t = trim(token);
  size_t slash = t.find('/');
  if (slash != std::string::npos) {
    double num, den;
    if (!parse_double(t.substr(0, slash), &num) ||
        !parse_double(t.substr(slash + 1), &den) || den == 0.0)
      throw std::invalid_argument("cannot parse number '" + t + "'");
    return num / den;
  }
  double v;
  if (!parse_double(t, &v))
    throw std::invalid_argument("cannot parse number '" + t + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& csv_list) {
  std::vector<double> out;
  for (const std::string& f : split_fields(csv_list))
    out.push_back(parse_number(f));
  return out;
}

}  // namespace cc
