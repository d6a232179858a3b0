#pragma once

// Binary agent checkpoint, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "UEDFCKPT"
//   8       4     u32 format version (1)
//   12      4     u32 input width
//   16      4     u32 hidden width
//   20      4     u32 action count
//   24      8     u64 completed PPO updates
//   32      8     u64 Adam steps taken
//   40      8     u64 parameter count P
//   48      4P    f32 weights
//   ..      4P    f32 Adam first moments
//   ..      4P    f32 Adam second moments

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ued/nn.hpp"

namespace ued {

inline constexpr std::array<char, 8> kCheckpointMagic{'U', 'E', 'D', 'F', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class U>
void put_le(std::ostream& os, U v) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(bytes, sizeof(U));
}

template <class U>
U get_le(std::istream& is) {
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw CheckpointError("checkpoint truncated");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

inline void put_f32s(std::ostream& os, const std::vector<float>& xs) {
  for (float x : xs) put_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(x));
}

inline std::vector<float> get_f32s(std::istream& is, std::size_t n) {
  std::vector<float> xs(n);
  for (auto& x : xs) x = std::bit_cast<float>(get_le<std::uint32_t>(is));
  return xs;
}

}  // namespace detail

inline void write_checkpoint(std::ostream& os, const ActorCriticParams<float>& p) {
  os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put_le<std::uint32_t>(os, kCheckpointVersion);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(p.shape.input));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(p.shape.hidden));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(p.shape.actions));
  detail::put_le<std::uint64_t>(os, p.update_count);
  detail::put_le<std::uint64_t>(os, p.adam_step);
  detail::put_le<std::uint64_t>(os, p.weights.size());
  detail::put_f32s(os, p.weights);
  detail::put_f32s(os, p.adam_m);
  detail::put_f32s(os, p.adam_v);
}

inline ActorCriticParams<float> read_checkpoint(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kCheckpointMagic) throw CheckpointError("not a ued-forge checkpoint");
  const auto version = detail::get_le<std::uint32_t>(is);
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  ActorCriticParams<float> p;
  p.shape.input = static_cast<int>(detail::get_le<std::uint32_t>(is));
  p.shape.hidden = static_cast<int>(detail::get_le<std::uint32_t>(is));
  p.shape.actions = static_cast<int>(detail::get_le<std::uint32_t>(is));
  p.update_count = detail::get_le<std::uint64_t>(is);
  p.adam_step = detail::get_le<std::uint64_t>(is);
  const auto n = detail::get_le<std::uint64_t>(is);
  if (p.shape.input < 1 || p.shape.hidden < 1 || p.shape.actions < 1 || n != ParamLayout(p.shape).total)
    throw CheckpointError("checkpoint parameter count does not match its network shape");
  p.weights = detail::get_f32s(is, n);
  p.adam_m = detail::get_f32s(is, n);
  p.adam_v = detail::get_f32s(is, n);
  return p;
}

inline std::string checkpoint_to_string(const ActorCriticParams<float>& p) {
  std::ostringstream os(std::ios::binary);
  write_checkpoint(os, p);
  return os.str();
}

inline ActorCriticParams<float> checkpoint_from_string(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return read_checkpoint(is);
}

inline void save_checkpoint(const std::string& path, const ActorCriticParams<float>& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CheckpointError("cannot open " + path + " for writing");
  write_checkpoint(os, p);
}

inline ActorCriticParams<float> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open " + path);
  return read_checkpoint(is);
}

}  // namespace ued
