#include "moreauw2/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "moreauw2/error.hpp"

namespace mw2 {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

double parse_double(const std::string& token, const std::string& path,
                    std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    fail(ErrorCode::io_error, path + ": line " + std::to_string(line_no) +
                                  ": cannot parse number '" + token + "'");
  return value;
}

struct CsvBody {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvBody read_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  CsvBody body;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (body.header.empty()) {
      body.header = split_csv_line(line);
      continue;
    }
    const std::vector<std::string> tokens = split_csv_line(line);
    if (tokens.size() != body.header.size())
      fail(ErrorCode::io_error,
           path + ": line " + std::to_string(line_no) + ": expected " +
               std::to_string(body.header.size()) + " fields, got " +
               std::to_string(tokens.size()));
    std::vector<double> row;
    row.reserve(tokens.size());
    for (const auto& t : tokens) row.push_back(parse_double(t, path, line_no));
    body.rows.push_back(std::move(row));
  }
  if (body.header.empty())
    fail(ErrorCode::io_error, path + ": empty CSV file");
  return body;
}

void check_coordinate_header(const std::vector<std::string>& header,
                             std::size_t d, const std::string& path) {
  for (std::size_t c = 0; c < d; ++c) {
    if (header[c] != "x" + std::to_string(c))
      fail(ErrorCode::io_error, path + ": expected header column 'x" +
                                    std::to_string(c) + "', got '" + header[c] +
                                    "'");
  }
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows,
                      std::size_t cols) {
  Matrix m(Index(rows.size()), Index(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < cols; ++c) m(Index(i), Index(c)) = rows[i][c];
  return m;
}

}  // namespace

bool csv_has_weights(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> header = split_csv_line(line);
    return !header.empty() && header.back() == "w";
  }
  fail(ErrorCode::io_error, path + ": empty CSV file");
}

EmpiricalCloud read_cloud_csv(const std::string& path) {
  const CsvBody body = read_csv(path);
  if (body.rows.empty())
    fail(ErrorCode::empty_input, path + ": no data rows");
  check_coordinate_header(body.header, body.header.size(), path);
  return EmpiricalCloud(rows_to_matrix(body.rows, body.header.size()));
}

WeightedMeasure read_weighted_csv(const std::string& path) {
  const CsvBody body = read_csv(path);
  if (body.rows.empty())
    fail(ErrorCode::empty_input, path + ": no data rows");
  if (body.header.size() < 2 || body.header.back() != "w")
    fail(ErrorCode::io_error, path + ": expected a trailing 'w' column");
  const std::size_t d = body.header.size() - 1;
  check_coordinate_header(body.header, d, path);
  Matrix pts = rows_to_matrix(body.rows, d);
  Vector w = Vector::Zero(Index(body.rows.size()));
  for (std::size_t i = 0; i < body.rows.size(); ++i)
    w(Index(i)) = body.rows[i][d];
  return WeightedMeasure(std::move(pts), std::move(w));
}

void write_cloud_csv(const EmpiricalCloud& cloud, const std::string& path) {
  std::string out;
  for (Index c = 0; c < cloud.dim(); ++c) {
    if (c) out += ',';
    out += "x" + std::to_string(c);
  }
  out += '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index c = 0; c < cloud.dim(); ++c) {
      if (c) out += ',';
      out += format_double(cloud.points()(i, c));
    }
    out += '\n';
  }
  atomic_write(path, out);
}

void write_weighted_csv(const WeightedMeasure& measure,
                        const std::string& path) {
  std::string out;
  for (Index c = 0; c < measure.dim(); ++c) out += "x" + std::to_string(c) + ",";
  out += "w\n";
  for (Index i = 0; i < measure.size(); ++i) {
    for (Index c = 0; c < measure.dim(); ++c)
      out += format_double(measure.points()(i, c)) + ",";
    out += format_double(measure.weights()(i)) + "\n";
  }
  atomic_write(path, out);
}

namespace {

GaussianSpec gaussian_from_json(const nlohmann::json& j,
                                const std::string& context) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov"))
    fail(ErrorCode::io_error,
         context + ": expected {\"mean\":[...],\"cov\":[[...],...]}");
  const auto& jm = j["mean"];
  const auto& jc = j["cov"];
  if (!jm.is_array() || jm.empty() || !jc.is_array() || jc.size() != jm.size())
    fail(ErrorCode::io_error,
         context + ": mean must be a d-vector and cov a d x d matrix");
  const Index d = Index(jm.size());
  Vector mean(d);
  for (Index i = 0; i < d; ++i) mean(i) = jm[std::size_t(i)].get<double>();
  Matrix cov(d, d);
  for (Index i = 0; i < d; ++i) {
    const auto& row = jc[std::size_t(i)];
    if (!row.is_array() || Index(row.size()) != d)
      fail(ErrorCode::io_error, context + ": cov row " + std::to_string(i) +
                                    " has the wrong length");
    for (Index k = 0; k < d; ++k) cov(i, k) = row[std::size_t(k)].get<double>();
  }
  return GaussianSpec(std::move(mean), std::move(cov));
}

}  // namespace

GaussianSpec parse_gaussian_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCode::io_error, "gaussian JSON: parse error");
  return gaussian_from_json(j, "gaussian JSON");
}

GaussianSpec read_gaussian_json(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::io_error, path + ": JSON parse error");
  return gaussian_from_json(j, path);
}

AffineMap read_affine_json(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::io_error, path + ": JSON parse error");
  if (!j.is_object() || !j.contains("matrix") || !j.contains("shift"))
    fail(ErrorCode::io_error,
         path + ": expected {\"matrix\":[[...],...],\"shift\":[...]}");
  const auto& js = j["shift"];
  const auto& jm = j["matrix"];
  if (!js.is_array() || js.empty() || !jm.is_array() || jm.size() != js.size())
    fail(ErrorCode::io_error, path + ": matrix must be d x d with a d shift");
  const Index d = Index(js.size());
  Vector shift(d);
  for (Index i = 0; i < d; ++i) shift(i) = js[std::size_t(i)].get<double>();
  Matrix matrix(d, d);
  for (Index i = 0; i < d; ++i) {
    const auto& row = jm[std::size_t(i)];
    if (!row.is_array() || Index(row.size()) != d)
      fail(ErrorCode::io_error, path + ": matrix row " + std::to_string(i) +
                                    " has the wrong length");
    for (Index k = 0; k < d; ++k)
      matrix(i, k) = row[std::size_t(k)].get<double>();
  }
  return AffineMap(std::move(matrix), std::move(shift));
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    fail(ErrorCode::internal, "format_double: to_chars failed");
  return std::string(buf, ptr);
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot open '" + tmp + "' for writing");
    out.write(contents.data(), std::streamsize(contents.size()));
    if (!out) fail(ErrorCode::io_error, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    fail(ErrorCode::io_error,
         "rename '" + tmp + "' -> '" + path + "': " + ec.message());
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mw2
