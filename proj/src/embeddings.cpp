#include "tweetsent/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "tweetsent/io_util.hpp"

namespace tweetsent {

namespace {

double parse_double(std::string_view field, const std::string& path,
                    std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                             ": non-numeric field '" + std::string(field) +
                             "'");
  }
  return value;
}

}  // namespace

EmbeddingTable load_embeddings(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    throw std::runtime_error(path + ": empty embeddings file");
  }

  EmbeddingTable table;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> tokens;
  int dim = -1;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto fields = split(lines[ln], ' ');
    const int d = static_cast<int>(fields.size()) - 1;
    if (dim < 0) {
      if (d < 1) {
        throw std::runtime_error(path +
                                 ": line 1: expected token and vector fields");
      }
      dim = d;
    } else if (d != dim) {
      throw std::runtime_error(path + ": line " + std::to_string(ln + 1) +
                               ": dimension mismatch (expected " +
                               std::to_string(dim) + " values, found " +
                               std::to_string(d) + ")");
    }
    std::vector<double> vec(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
      vec[static_cast<std::size_t>(k)] =
          parse_double(fields[static_cast<std::size_t>(k) + 1], path, ln + 1);
    }
    const std::string& token = fields[0];
    auto it = table.vocab.find(token);
    if (it != table.vocab.end()) {
      rows[static_cast<std::size_t>(it->second)] = std::move(vec);
      ++table.duplicate_count;
    } else {
      table.vocab.emplace(token, static_cast<int>(rows.size()));
      tokens.push_back(token);
      rows.push_back(std::move(vec));
    }
  }

  table.dim = dim;
  table.matrix.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < dim; ++c) {
      table.matrix(static_cast<Eigen::Index>(r), c) =
          rows[r][static_cast<std::size_t>(c)];
    }
  }
  return table;
}

EmbeddedSequence embed(const TokenSequence& tokens, const EmbeddingTable& table,
                       int max_len) {
  if (max_len < 1) throw std::invalid_argument("embed: max_len must be >= 1");
  EmbeddedSequence seq;
  seq.vectors = Eigen::MatrixXd::Zero(max_len, table.dim);
  seq.mask.assign(static_cast<std::size_t>(max_len), 0);
  const int used =
      std::min(static_cast<int>(tokens.tokens.size()), max_len);
  for (int t = 0; t < used; ++t) {
    seq.mask[static_cast<std::size_t>(t)] = 1;
    const int row = table.lookup(tokens.tokens[static_cast<std::size_t>(t)]);
    if (row >= 0) seq.vectors.row(t) = table.matrix.row(row);
  }
  seq.length = used;
  return seq;
}

}  // namespace tweetsent
