#include <gtest/gtest.h>

#include <cstring>

#include "test_util.hpp"
#include "wmlp/checkpoint.hpp"
#include "wmlp/errors.hpp"

namespace wmlp::nn {
namespace {

using wmlp::testing::read_bytes;
using wmlp::testing::TempDir;

std::string bytes_of(const std::vector<char>& v) { return {v.begin(), v.end()}; }

std::uint32_t u32_at(const std::vector<char>& b, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[offset + static_cast<std::size_t>(i)]);
  return v;
}

TEST(Checkpoint, RoundTripIsExact) {
  TempDir tmp("ckpt");
  MlpParams p = init_params(7, 4, 3);
  p.b1.setConstant(-0.125);
  p.b2 << 1e-300, -2.5, 3.0;
  save_checkpoint(p, tmp / "m.wmlp");
  EXPECT_EQ(load_checkpoint(tmp / "m.wmlp"), p);
}

TEST(Checkpoint, LayoutIsLittleEndianRowMajor) {
  TempDir tmp("ckpt");
  MlpParams p = zeros_like(init_params(3, 2, 1));
  p.w1(0, 1) = 1.0;  // second stored value of w1
  p.b2(2) = -2.0;    // last stored value
  save_checkpoint(p, tmp / "m.wmlp");
  const std::vector<char> b = read_bytes(tmp / "m.wmlp");
  const std::size_t values = 3 * 2 + 2 + 3 * 2 + 3;
  ASSERT_EQ(b.size(), 20 + 8 * values);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "WMLP");
  EXPECT_EQ(u32_at(b, 4), 1u);
  EXPECT_EQ(u32_at(b, 8), 3u);
  EXPECT_EQ(u32_at(b, 12), 2u);
  EXPECT_EQ(u32_at(b, 16), 3u);
  // 1.0 = 0x3FF0000000000000, stored low byte first.
  EXPECT_EQ(static_cast<unsigned char>(b[20 + 8 + 7]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(b[20 + 8 + 6]), 0xF0);
  // -2.0 = 0xC000000000000000
  EXPECT_EQ(static_cast<unsigned char>(b.back()), 0xC0);
}

TEST(Checkpoint, TruncatedFileIsRejected) {
  TempDir tmp("ckpt");
  save_checkpoint(init_params(5, 3, 1), tmp / "m.wmlp");
  const std::string full = bytes_of(read_bytes(tmp / "m.wmlp"));
  for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{12}, std::size_t{20}, full.size() - 1}) {
    wmlp::testing::write_bytes(tmp / "t.wmlp", full.substr(0, len));
    EXPECT_THROW(load_checkpoint(tmp / "t.wmlp"), CorruptCheckpointError) << "length " << len;
  }
  wmlp::testing::write_bytes(tmp / "long.wmlp", full + "x");
  EXPECT_THROW(load_checkpoint(tmp / "long.wmlp"), CorruptCheckpointError);
}

TEST(Checkpoint, BadMagicIsRejectedBeforeAnythingElse) {
  TempDir tmp("ckpt");
  save_checkpoint(init_params(5, 3, 1), tmp / "m.wmlp");
  std::string bytes = bytes_of(read_bytes(tmp / "m.wmlp"));
  bytes[0] = 'X';
  wmlp::testing::write_bytes(tmp / "bad.wmlp", bytes);
  try {
    load_checkpoint(tmp / "bad.wmlp");
    FAIL() << "expected CorruptCheckpointError";
  } catch (const CorruptCheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, UnknownVersionAndZeroDimensionsAreRejected) {
  TempDir tmp("ckpt");
  save_checkpoint(init_params(5, 3, 1), tmp / "m.wmlp");
  const std::string bytes = bytes_of(read_bytes(tmp / "m.wmlp"));
  std::string v2 = bytes;
  v2[4] = 2;
  wmlp::testing::write_bytes(tmp / "v2.wmlp", v2);
  EXPECT_THROW(load_checkpoint(tmp / "v2.wmlp"), CorruptCheckpointError);
  std::string zero = bytes;
  zero[12] = 0;
  wmlp::testing::write_bytes(tmp / "z.wmlp", zero);
  EXPECT_THROW(load_checkpoint(tmp / "z.wmlp"), CorruptCheckpointError);
}

TEST(Checkpoint, MissingFileIsAnError) {
  TempDir tmp("ckpt");
  EXPECT_THROW(load_checkpoint(tmp / "none.wmlp"), std::runtime_error);
}

}  // namespace
}  // namespace wmlp::nn
