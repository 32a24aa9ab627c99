#include <bit>
#include <cstring>
#include <fstream>

#include "tweetsent/io_util.hpp"
#include "tweetsent/lstm.hpp"

namespace tweetsent {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'T', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kOutputSize = 3;

void append_u32le(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) {
    out += static_cast<char>((v >> (8 * k)) & 0xff);
  }
}

void append_u64le(std::string& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    out += static_cast<char>((v >> (8 * k)) & 0xff);
  }
}

void append_f64le(std::string& out, double d) {
  append_u64le(out, std::bit_cast<std::uint64_t>(d));
}

class Reader {
 public:
  Reader(const std::string& buf, const std::string& path)
      : buf_(buf), path_(path) {}

  void require(std::size_t n) const {
    if (pos_ + n > buf_.size()) {
      throw CheckpointError(
          CheckpointError::Kind::Truncated,
          path_ + ": truncated checkpoint (expected at least " +
              std::to_string(pos_ + n) + " bytes, file has " +
              std::to_string(buf_.size()) + ")");
    }
  }

  std::uint32_t read_u32le() {
    require(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(buf_[pos_ + k]))
           << (8 * k);
    }
    pos_ += 4;
    return v;
  }

  std::uint64_t read_u64le() {
    require(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(buf_[pos_ + k]))
           << (8 * k);
    }
    pos_ += 8;
    return v;
  }

  double read_f64le() { return std::bit_cast<double>(read_u64le()); }

  std::string read_bytes(std::size_t n) {
    require(n);
    std::string out = buf_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  std::size_t size() const { return buf_.size(); }

 private:
  const std::string& buf_;
  const std::string path_;
  std::size_t pos_ = 0;
};

void write_matrix_rowmajor(std::string& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      append_f64le(out, m(r, c));
    }
  }
}

void write_vector(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) append_f64le(out, v(k));
}

void read_matrix_rowmajor(Reader& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = in.read_f64le();
    }
  }
}

void read_vector(Reader& in, Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = in.read_f64le();
}

}  // namespace

void save_checkpoint(const std::string& path, const LstmParams& params,
                     const std::string& meta) {
  if (params.input_dim < 1 || params.hidden_dim < 1) {
    throw CheckpointError(CheckpointError::Kind::BadShape,
                          "save_checkpoint: uninitialized parameters");
  }
  std::string out;
  out.reserve(64 + static_cast<std::size_t>(params.parameter_count()) * 8 +
              meta.size());
  out.append(kMagic, 4);
  append_u32le(out, kVersion);
  append_u32le(out, static_cast<std::uint32_t>(params.input_dim));
  append_u32le(out, static_cast<std::uint32_t>(params.hidden_dim));
  append_u32le(out, kOutputSize);
  for (const GateParams* g : {&params.input_gate, &params.forget_gate,
                              &params.output_gate, &params.candidate}) {
    write_matrix_rowmajor(out, g->w);
    write_matrix_rowmajor(out, g->u);
    write_vector(out, g->b);
  }
  write_matrix_rowmajor(out, params.w_out);
  write_vector(out, params.b_out);
  append_u64le(out, meta.size());
  out += meta;
  write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::string buf;
  try {
    buf = read_file(path);
  } catch (const std::exception& e) {
    throw CheckpointError(CheckpointError::Kind::Io, e.what());
  }
  Reader in(buf, path);

  const std::string magic = in.read_bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw CheckpointError(CheckpointError::Kind::BadMagic,
                          path + ": bad magic bytes (not a checkpoint)");
  }
  const std::uint32_t version = in.read_u32le();
  if (version != kVersion) {
    throw CheckpointError(CheckpointError::Kind::BadVersion,
                          path + ": unsupported format version " +
                              std::to_string(version));
  }
  const std::uint32_t d = in.read_u32le();
  const std::uint32_t h = in.read_u32le();
  const std::uint32_t out_size = in.read_u32le();
  if (d < 1 || h < 1 || out_size != kOutputSize) {
    throw CheckpointError(
        CheckpointError::Kind::BadShape,
        path + ": invalid shape header (d=" + std::to_string(d) +
            ", h=" + std::to_string(h) + ", out=" + std::to_string(out_size) +
            ")");
  }

  Checkpoint ck;
  ck.params = LstmParams::zeros(static_cast<int>(d), static_cast<int>(h));
  for (GateParams* g : {&ck.params.input_gate, &ck.params.forget_gate,
                        &ck.params.output_gate, &ck.params.candidate}) {
    read_matrix_rowmajor(in, g->w);
    read_matrix_rowmajor(in, g->u);
    read_vector(in, g->b);
  }
  read_matrix_rowmajor(in, ck.params.w_out);
  read_vector(in, ck.params.b_out);

  const std::uint64_t meta_len = in.read_u64le();
  ck.meta = in.read_bytes(meta_len);
  if (in.pos() != in.size()) {
    throw CheckpointError(
        CheckpointError::Kind::Truncated,
        path + ": size mismatch (expected " + std::to_string(in.pos()) +
            " bytes, file has " + std::to_string(in.size()) + ")");
  }
  if (!ck.params.all_finite()) {
    throw CheckpointError(CheckpointError::Kind::BadShape,
                          path + ": non-finite parameter value");
  }
  return ck;
}

}  // namespace tweetsent
