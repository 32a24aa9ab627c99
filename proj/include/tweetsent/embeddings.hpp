#ifndef TWEETSENT_EMBEDDINGS_HPP
#define TWEETSENT_EMBEDDINGS_HPP

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "tweetsent/normalize.hpp"

namespace tweetsent {

// Vocabulary plus V x d matrix of word vectors. Immutable after load.
struct EmbeddingTable {
  std::unordered_map<std::string, int> vocab;  // token -> row index
  Eigen::MatrixXd matrix;                      // V x d
  int dim = 0;
  int duplicate_count = 0;  // tokens that appeared more than once (last wins)

  int size() const { return static_cast<int>(matrix.rows()); }
  // Row for a token, or -1 when out of vocabulary.
  int lookup(const std::string& token) const {
    auto it = vocab.find(token);
    return it == vocab.end() ? -1 : it->second;
  }
};

// GloVe text format: one entry per line, token then d decimal floats,
// single-space separated, no header. d is inferred from the first line.
// Throws on empty files, non-numeric or non-finite fields, and dimension
// mismatches (line number reported).
EmbeddingTable load_embeddings(const std::string& path);

// Fixed-length embedded sequence with a true-prefix validity mask.
// Rows at false-mask positions are all-zero.
struct EmbeddedSequence {
  Eigen::MatrixXd vectors;         // max_len x d
  std::vector<std::uint8_t> mask;  // 1 on a prefix, 0 on the suffix
  int length = 0;                  // number of true mask entries
};

// First min(|tokens|, max_len) tokens are mapped to their vectors;
// out-of-vocabulary tokens map to the zero vector but still count as real
// steps. Longer sequences are truncated from the tail, shorter ones
// zero-padded at the end.
EmbeddedSequence embed(const TokenSequence& tokens, const EmbeddingTable& table,
                       int max_len);

}  // namespace tweetsent

#endif  // TWEETSENT_EMBEDDINGS_HPP
