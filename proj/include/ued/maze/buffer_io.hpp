#pragma once

// Text checkpoint for a LevelBuffer<MazeLevel>:
//
//   ued-forge level-buffer v1
//   capacity <K>
//   size <n>
//   episode_counter <c>
//   then n records of the form
//     entry <slot>
//     score <%.17g>
//     last_touched <u64>
//     extras <m>
//     <key> <%.17g>          (m lines, keys in sorted order)
//     level
//     <level rows in the maze text format>
//     <blank line>
//
// Doubles are printed with 17 significant digits, so write -> read -> write
// is byte-identical.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ued/level_sampler.hpp"
#include "ued/maze/level.hpp"

namespace ued::maze {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number: " + s);
  return v;
}

inline std::string expect_field(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("buffer checkpoint truncated before '" + key + "'");
  if (line.rfind(key + " ", 0) != 0) throw std::runtime_error("expected '" + key + "', got '" + line + "'");
  return line.substr(key.size() + 1);
}

}  // namespace detail

inline void write_buffer(std::ostream& os, const LevelBuffer<MazeLevel>& buffer) {
  os << "ued-forge level-buffer v1\n";
  os << "capacity " << buffer.capacity() << '\n';
  os << "size " << buffer.size() << '\n';
  os << "episode_counter " << buffer.episode_counter() << '\n';
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const auto& e = buffer[i];
    os << "entry " << i << '\n';
    os << "score " << detail::format_double(e.score) << '\n';
    os << "last_touched " << e.last_touched << '\n';
    os << "extras " << e.extra.size() << '\n';
    for (const auto& [k, v] : e.extra) {
      if (k.empty() || k.find_first_of(" \t\r\n") != std::string::npos)
        throw std::invalid_argument("extra keys must be non-empty and whitespace-free");
      os << k << ' ' << detail::format_double(v) << '\n';
    }
    os << "level\n" << format_level(e.level) << '\n';
  }
}

inline LevelBuffer<MazeLevel> read_buffer(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "ued-forge level-buffer v1")
    throw std::runtime_error("not a ued-forge level-buffer v1 file");
  const auto capacity = std::stoull(detail::expect_field(is, "capacity"));
  const auto size = std::stoull(detail::expect_field(is, "size"));
  const auto counter = std::stoull(detail::expect_field(is, "episode_counter"));
  if (size > capacity) throw std::runtime_error("buffer size exceeds capacity");
  LevelBuffer<MazeLevel> buffer(capacity);
  buffer.set_episode_counter(counter);
  for (std::size_t i = 0; i < size; ++i) {
    if (std::stoull(detail::expect_field(is, "entry")) != i) throw std::runtime_error("entries out of order");
    BufferEntry<MazeLevel> e;
    e.score = detail::parse_double(detail::expect_field(is, "score"));
    e.last_touched = std::stoull(detail::expect_field(is, "last_touched"));
    if (e.last_touched > counter) throw std::runtime_error("last_touched exceeds episode_counter");
    const auto n_extra = std::stoull(detail::expect_field(is, "extras"));
    for (std::size_t k = 0; k < n_extra; ++k) {
      if (!std::getline(is, line)) throw std::runtime_error("buffer checkpoint truncated in extras");
      const auto sp = line.find(' ');
      if (sp == std::string::npos) throw std::runtime_error("bad extra line: " + line);
      e.extra[line.substr(0, sp)] = detail::parse_double(line.substr(sp + 1));
    }
    if (!std::getline(is, line) || line != "level") throw std::runtime_error("expected 'level'");
    std::string rows;
    while (std::getline(is, line) && !line.empty()) rows += line + '\n';
    e.level = parse_level(rows);
    validate(e.level);
    buffer.push_back(std::move(e));
  }
  return buffer;
}

inline std::string buffer_to_string(const LevelBuffer<MazeLevel>& buffer) {
  std::ostringstream os;
  write_buffer(os, buffer);
  return os.str();
}

inline LevelBuffer<MazeLevel> buffer_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_buffer(is);
}

}  // namespace ued::maze
