#include "mcse/chain.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "mcse/errors.hpp"

namespace mcse {

namespace detail {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace detail

Chain::Chain(Eigen::MatrixXd samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 2) throw data_error("chain too short: need at least 2 rows");
  if (samples_.cols() < 1) throw data_error("chain must have at least one coordinate");
  if (!samples_.allFinite()) throw data_error("chain contains non-finite entries");
}

MultiChain::MultiChain(std::vector<Chain> chains) : chains_(std::move(chains)) {
  if (chains_.empty()) throw data_error("MultiChain requires at least one chain");
  const auto n = chains_.front().n();
  const auto d = chains_.front().d();
  for (std::size_t m = 1; m < chains_.size(); ++m) {
    if (chains_[m].n() != n || chains_[m].d() != d)
      throw data_error("all parallel chains must share the same length and dimension");
  }
}

namespace {

bool parse_field(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

void split_row(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

Chain load_chain(std::istream& in, bool has_header) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  std::size_t ncols = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      split_row(line, fields);
      ncols = fields.size();
      continue;
    }
    split_row(line, fields);
    if (ncols == 0) ncols = fields.size();
    if (fields.size() != ncols)
      throw data_error("ragged CSV row at line " + std::to_string(line_no) + ": expected " +
                       std::to_string(ncols) + " fields, got " + std::to_string(fields.size()));
    std::vector<double> row(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!parse_field(fields[c], row[c]))
        throw data_error("non-numeric CSV cell at line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": '" + fields[c] + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    throw data_error("chain too short: need at least 2 data rows, got " +
                     std::to_string(rows.size()));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ncols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return Chain(std::move(m));
}

Chain load_chain_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open chain file: " + path);
  return load_chain(in, has_header);
}

MeanVector chain_mean(const Chain& chain) {
  const Eigen::MatrixXd& s = chain.samples();
  MeanVector mean(s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    mean(j) = detail::pairwise_sum(s.col(j).data(), static_cast<std::size_t>(s.rows())) /
              static_cast<double>(s.rows());
  return mean;
}

MeanVector global_mean(const MultiChain& mc) {
  MeanVector sum = MeanVector::Zero(mc.d());
  for (std::size_t m = 0; m < mc.M(); ++m) sum += chain_mean(mc.chain(m));
  return sum / static_cast<double>(mc.M());
}

}  // namespace mcse
