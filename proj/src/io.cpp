#include "qcs/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qcs {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

double parse_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw std::runtime_error("malformed numeric field: '" + s + "'");
  }
}

std::string mode_name(const MeasurementMatrix& m) {
  std::string base = m.mode == MatrixMode::IidScaled ? "iid_scaled" : "column_normalized";
  return m.quantized ? "quantized_" + base : base;
}

void parse_mode(const std::string& name, MeasurementMatrix& m) {
  std::string base = name;
  m.quantized = false;
  if (base.rfind("quantized_", 0) == 0) {
    m.quantized = true;
    base = base.substr(10);
  }
  if (base == "iid_scaled")
    m.mode = MatrixMode::IidScaled;
  else if (base == "column_normalized")
    m.mode = MatrixMode::ColumnNormalized;
  else
    throw std::runtime_error("unknown matrix mode: " + name);
}

struct Table {
  Eigen::Index rows = 0, cols = 0;
  std::string mode;
  std::uint64_t seed = 0;
  Eigen::MatrixXd data;
};

void save_table(const std::filesystem::path& path, const Eigen::MatrixXd& data,
                const std::string& mode, std::uint64_t seed) {
  auto out = open_out(path);
  out << data.rows() << ',' << data.cols() << ',' << mode << ',' << seed << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << format_double(data(i, j));
    }
    out << '\n';
  }
}

Table load_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
  const auto header = split(line, ',');
  if (header.size() != 4) throw std::runtime_error("malformed header in " + path.string());
  Table t;
  t.rows = std::stol(header[0]);
  t.cols = std::stol(header[1]);
  t.mode = header[2];
  t.seed = std::stoull(header[3]);
  if (t.rows < 0 || t.cols < 0) throw std::runtime_error("negative dimensions in " + path.string());
  t.data.resize(t.rows, t.cols);
  for (Eigen::Index i = 0; i < t.rows; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated file: " + path.string());
    const auto fields = split(line, ',');
    if (static_cast<Eigen::Index>(fields.size()) != t.cols)
      throw std::runtime_error("row width mismatch in " + path.string());
    for (Eigen::Index j = 0; j < t.cols; ++j)
      t.data(i, j) = parse_double(fields[static_cast<std::size_t>(j)]);
  }
  return t;
}

}  // namespace

void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& m) {
  save_table(path, m.entries, mode_name(m), m.seed);
}

MeasurementMatrix load_matrix(const std::filesystem::path& path) {
  Table t = load_table(path);
  MeasurementMatrix m;
  parse_mode(t.mode, m);
  m.seed = t.seed;
  m.entries = std::move(t.data);
  return m;
}

void save_vector(const std::filesystem::path& path, const Eigen::VectorXd& v,
                 const std::string& kind, std::uint64_t seed) {
  save_table(path, v, kind, seed);
}

Eigen::VectorXd load_vector(const std::filesystem::path& path) {
  Table t = load_table(path);
  if (t.cols != 1) throw std::runtime_error("expected a single-column file: " + path.string());
  return t.data.col(0);
}

void save_signal(const std::filesystem::path& path, const SparseSignal& x, std::uint64_t seed) {
  save_table(path, x.values.transpose(), "signal", seed);
}

SparseSignal load_signal(const std::filesystem::path& path) {
  Table t = load_table(path);
  if (t.rows != 1) throw std::runtime_error("expected a single-row signal file: " + path.string());
  SparseSignal x;
  x.values = t.data.row(0).transpose();
  for (Eigen::Index j = 0; j < x.values.size(); ++j)
    if (x.values[j] != 0.0) x.support.push_back(j);
  return x;
}

void save_quantizer(const std::filesystem::path& path, const ScalarQuantizer& q) {
  q.validate();
  auto out = open_out(path);
  out << q.num_levels() << '\n';
  for (std::size_t i = 0; i < q.levels.size(); ++i) {
    if (i) out << ' ';
    out << format_double(q.levels[i]);
  }
  out << '\n';
  for (std::size_t i = 0; i < q.thresholds.size(); ++i) {
    if (i) out << ' ';
    out << format_double(q.thresholds[i]);
  }
  out << '\n';
}

ScalarQuantizer load_quantizer(const std::filesystem::path& path) {
  auto in = open_in(path);
  int m = 0;
  if (!(in >> m) || m < 1) throw std::runtime_error("malformed quantizer file: " + path.string());
  ScalarQuantizer q;
  q.levels.resize(static_cast<std::size_t>(m));
  for (auto& v : q.levels)
    if (!(in >> v)) throw std::runtime_error("truncated quantizer file: " + path.string());
  q.thresholds.resize(static_cast<std::size_t>(m - 1));
  for (auto& v : q.thresholds)
    if (!(in >> v)) throw std::runtime_error("truncated quantizer file: " + path.string());
  q.validate();
  return q;
}

void save_prefix_code(const std::filesystem::path& path, const PrefixCode& code) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < code.codewords.size(); ++i) out << i << ':' << code.codewords[i] << '\n';
}

PrefixCode load_prefix_code(const std::filesystem::path& path) {
  auto in = open_in(path);
  PrefixCode code;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.find(':');
    if (pos == std::string::npos) throw std::runtime_error("malformed code line: " + line);
    const auto idx = static_cast<std::size_t>(std::stoul(line.substr(0, pos)));
    if (idx != code.codewords.size()) throw std::runtime_error("code lines out of order");
    const std::string word = line.substr(pos + 1);
    for (char c : word)
      if (c != '0' && c != '1') throw std::runtime_error("codeword is not binary: " + word);
    code.codewords.push_back(word);
  }
  return code;
}

}  // namespace qcs
