#include "wmlp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "wmlp/errors.hpp"

namespace wmlp::nn {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

template <typename Tensor>
void put_tensor(std::vector<std::uint8_t>& out, const Tensor& t) {
  // Params are row-major, so storage order is the file order.
  for (Eigen::Index i = 0; i < t.size(); ++i) put_f64(out, t.data()[i]);
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * k);
    return std::bit_cast<double>(v);
  }

  template <typename Tensor>
  void tensor(Tensor& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = f64();
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw CorruptCheckpointError("corrupt checkpoint: truncated payload");
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const MlpParams& p, const std::filesystem::path& path) {
  if (!p.valid()) throw std::invalid_argument("save_checkpoint: parameters are inconsistent or non-finite");
  std::vector<std::uint8_t> bytes(std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  put_u32(bytes, kCheckpointVersion);
  put_u32(bytes, static_cast<std::uint32_t>(p.input_dim()));
  put_u32(bytes, static_cast<std::uint32_t>(p.hidden_dim()));
  put_u32(bytes, static_cast<std::uint32_t>(p.output_dim()));
  put_tensor(bytes, p.w1);
  put_tensor(bytes, p.b1);
  put_tensor(bytes, p.w2);
  put_tensor(bytes, p.b2);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw std::runtime_error("failed to write checkpoint: " + path.string());
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) {
    throw CorruptCheckpointError("not a checkpoint (bad magic bytes): " + path.string());
  }
  const std::vector<std::uint8_t> body(bytes.begin() + 4, bytes.end());
  Reader r(body);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CorruptCheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t in_dim = r.u32();
  const std::uint32_t hidden = r.u32();
  const std::uint32_t out_dim = r.u32();
  if (in_dim == 0 || hidden == 0 || out_dim == 0) throw CorruptCheckpointError("corrupt checkpoint: zero dimension");
  const std::uint64_t expected =
      8ULL * (std::uint64_t{hidden} * in_dim + hidden + std::uint64_t{out_dim} * hidden + out_dim);
  if (r.remaining() != expected) {
    throw CorruptCheckpointError("corrupt checkpoint: payload is " + std::to_string(r.remaining()) +
                                 " bytes, header implies " + std::to_string(expected));
  }
  MlpParams p{Matrix(hidden, in_dim), Vector(hidden), Matrix(out_dim, hidden), Vector(out_dim)};
  r.tensor(p.w1);
  r.tensor(p.b1);
  r.tensor(p.w2);
  r.tensor(p.b2);
  return p;
}

}  // namespace wmlp::nn
