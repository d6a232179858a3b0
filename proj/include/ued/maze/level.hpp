#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ued/env.hpp"

namespace ued::maze {

struct Cell {
  int x = 0;  // column
  int y = 0;  // row, growing downwards
  friend constexpr bool operator==(Cell, Cell) = default;
};

enum class Direction : std::uint8_t { up = 0, right = 1, down = 2, left = 3 };

constexpr Direction turn_left(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }
constexpr Direction turn_right(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }

constexpr Cell offset(Direction d) {
  constexpr std::array<Cell, 4> kOffsets{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};
  return kOffsets[static_cast<int>(d)];
}

constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }

/// The free parameters of one maze: wall layout, agent start pose, goal.
struct MazeLevel {
  int width = 13;
  int height = 13;
  std::vector<std::uint8_t> walls;  // row-major, 1 = wall
  Cell agent_pos;
  Direction agent_dir = Direction::up;
  Cell goal_pos;

  /// Wall-free level with the goal in the top-left corner and the agent next to it.
  static MazeLevel empty(int width, int height) {
    if (width < 1 || height < 1 || width * height < 2)
      throw std::invalid_argument("maze needs at least two cells");
    MazeLevel level;
    level.width = width;
    level.height = height;
    level.walls.assign(static_cast<std::size_t>(width * height), 0);
    level.goal_pos = {0, 0};
    level.agent_pos = width > 1 ? Cell{1, 0} : Cell{0, 1};
    return level;
  }

  int num_cells() const { return width * height; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  int index(Cell c) const { return c.y * width + c.x; }
  Cell cell(int idx) const { return {idx % width, idx / width}; }
  bool wall(Cell c) const { return walls[static_cast<std::size_t>(index(c))] != 0; }
  void set_wall(Cell c, bool on) { walls[static_cast<std::size_t>(index(c))] = on ? 1 : 0; }

  int wall_count() const {
    int n = 0;
    for (auto w : walls) n += w != 0;
    return n;
  }

  friend bool operator==(const MazeLevel&, const MazeLevel&) = default;
};

/// Throws LevelError unless the level satisfies the maze invariants.
inline void validate(const MazeLevel& level) {
  if (level.width < 1 || level.height < 1) throw LevelError("maze dimensions must be positive");
  if (level.walls.size() != static_cast<std::size_t>(level.width * level.height))
    throw LevelError("wall grid size does not match dimensions");
  if (!level.in_bounds(level.agent_pos)) throw LevelError("agent position out of bounds");
  if (!level.in_bounds(level.goal_pos)) throw LevelError("goal position out of bounds");
  if (static_cast<int>(level.agent_dir) > 3) throw LevelError("invalid agent direction");
  if (level.wall(level.agent_pos)) throw LevelError("agent placed on a wall");
  if (level.wall(level.goal_pos)) throw LevelError("goal placed on a wall");
  if (level.agent_pos == level.goal_pos) throw LevelError("agent and goal share a cell");
}

inline bool is_valid(const MazeLevel& level) {
  try {
    validate(level);
    return true;
  } catch (const LevelError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Text format
//
//   '#' wall   '.' floor   'G' goal   '^' '>' 'v' '<' agent facing up/right/down/left
//
// One row per line, every line terminated by '\n'. A file holding several
// levels separates them with exactly one blank line.
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

constexpr char kAgentGlyphs[4] = {'^', '>', 'v', '<'};

inline MazeLevel parse_rows(std::span<const std::string_view> rows, int first_line) {
  if (rows.empty()) throw ParseError(first_line, "empty level");
  MazeLevel level;
  level.width = static_cast<int>(rows.front().size());
  level.height = static_cast<int>(rows.size());
  if (level.width == 0) throw ParseError(first_line, "empty row");
  level.walls.assign(static_cast<std::size_t>(level.width * level.height), 0);
  bool have_agent = false;
  bool have_goal = false;
  for (int y = 0; y < level.height; ++y) {
    const auto row = rows[static_cast<std::size_t>(y)];
    const int line = first_line + y;
    if (static_cast<int>(row.size()) != level.width) throw ParseError(line, "ragged row");
    for (int x = 0; x < level.width; ++x) {
      const char ch = row[static_cast<std::size_t>(x)];
      switch (ch) {
        case '#':
          level.set_wall({x, y}, true);
          break;
        case '.':
          break;
        case 'G':
          if (have_goal) throw ParseError(line, "duplicate goal");
          have_goal = true;
          level.goal_pos = {x, y};
          break;
        case '^':
        case '>':
        case 'v':
        case '<': {
          if (have_agent) throw ParseError(line, "duplicate agent");
          have_agent = true;
          level.agent_pos = {x, y};
          int d = 0;
          while (kAgentGlyphs[d] != ch) ++d;
          level.agent_dir = static_cast<Direction>(d);
          break;
        }
        default:
          throw ParseError(line, std::string("bad character '") + ch + "'");
      }
    }
  }
  if (!have_goal) throw ParseError(first_line, "missing goal");
  if (!have_agent) throw ParseError(first_line, "missing agent");
  return level;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace detail

/// Parses a single level. Trailing newline optional.
inline MazeLevel parse_level(std::string_view text) {
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].empty()) throw ParseError(static_cast<int>(i) + 1, "blank line inside a single level");
  return detail::parse_rows(lines, 1);
}

/// Parses a file of one or more levels separated by single blank lines.
inline std::vector<MazeLevel> parse_levels(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::vector<MazeLevel> levels;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (lines[i].empty()) throw ParseError(static_cast<int>(i) + 1, "unexpected blank line");
    const std::size_t begin = i;
    while (i < lines.size() && !lines[i].empty()) ++i;
    levels.push_back(detail::parse_rows(std::span(lines).subspan(begin, i - begin), static_cast<int>(begin) + 1));
    if (i < lines.size()) {
      ++i;  // separator
      if (i == lines.size()) throw ParseError(static_cast<int>(i), "trailing blank line");
    }
  }
  if (levels.empty()) throw ParseError(1, "no levels");
  return levels;
}

inline std::string format_level(const MazeLevel& level) {
  std::string out;
  out.reserve(static_cast<std::size_t>((level.width + 1) * level.height));
  for (int y = 0; y < level.height; ++y) {
    for (int x = 0; x < level.width; ++x) {
      const Cell c{x, y};
      if (c == level.agent_pos)
        out += detail::kAgentGlyphs[static_cast<int>(level.agent_dir)];
      else if (c == level.goal_pos)
        out += 'G';
      else
        out += level.wall(c) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

inline std::string format_levels(std::span<const MazeLevel> levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0) out += '\n';
    out += format_level(levels[i]);
  }
  return out;
}

}  // namespace ued::maze
