#pragma once

#include <array>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgsc {

using StateId = std::uint32_t;

enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::size_t kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kActions{Action::Up, Action::Down, Action::Left,
                                                          Action::Right};

constexpr std::size_t index(Action a) noexcept { return static_cast<std::size_t>(a); }

constexpr std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

enum class CellKind : std::uint8_t { Start, Hallway, Junction, Terminal, Wall, Doorway };

struct Cell {
  int row = 0;
  int col = 0;
  CellKind kind = CellKind::Hallway;
};

/// Static description of a gridworld. Non-wall cells are states, numbered in
/// row-major reading order. Walls are kept only for rendering.
class GridSpec {
 public:
  /// Builds a grid from rows of characters:
  ///   S start, . hallway, J junction, D doorway, T terminal/goal, # wall.
  /// Goals are the terminal cells in reading order (at most two are used). A
  /// single terminal serves as both goals, giving a stationary task.
  static GridSpec from_layout(std::string name, const std::vector<std::string>& rows) {
    GridSpec g;
    g.name_ = std::move(name);
    g.rows_ = static_cast<int>(rows.size());
    g.cols_ = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    g.id_at_.assign(static_cast<std::size_t>(g.rows_ * g.cols_), kNoState);
    bool have_start = false;
    for (int r = 0; r < g.rows_; ++r) {
      if (static_cast<int>(rows[r].size()) != g.cols_)
        throw std::invalid_argument("GridSpec: ragged layout in " + g.name_);
      for (int c = 0; c < g.cols_; ++c) {
        const char ch = rows[r][c];
        CellKind kind{};
        switch (ch) {
          case 'S': kind = CellKind::Start; break;
          case '.': kind = CellKind::Hallway; break;
          case 'J': kind = CellKind::Junction; break;
          case 'D': kind = CellKind::Doorway; break;
          case 'T': kind = CellKind::Terminal; break;
          case '#': kind = CellKind::Wall; break;
          default: throw std::invalid_argument(std::string("GridSpec: unknown cell '") + ch + "'");
        }
        if (kind == CellKind::Wall) continue;
        const auto id = static_cast<StateId>(g.cells_.size());
        g.cells_.push_back({r, c, kind});
        g.id_at_[static_cast<std::size_t>(r * g.cols_ + c)] = id;
        if (kind == CellKind::Start) {
          if (have_start) throw std::invalid_argument("GridSpec: more than one start cell");
          have_start = true;
          g.start_id_ = id;
        }
        if (kind == CellKind::Terminal) g.terminal_ids_.push_back(id);
      }
    }
    if (!have_start) throw std::invalid_argument("GridSpec: no start cell");
    if (g.terminal_ids_.empty()) throw std::invalid_argument("GridSpec: no terminal cell");
    g.goal_ids_ = {g.terminal_ids_.front(), g.terminal_ids_[g.terminal_ids_.size() > 1 ? 1 : 0]};

    g.is_terminal_.assign(g.cells_.size(), false);
    for (StateId t : g.terminal_ids_) g.is_terminal_[t] = true;
    for (StateId s = 0; s < g.cells_.size(); ++s)
      if (!g.is_terminal_[s]) g.non_terminal_ids_.push_back(s);

    g.adjacency_.resize(g.cells_.size());
    for (StateId s = 0; s < g.cells_.size(); ++s) {
      for (Action a : kActions) {
        static constexpr std::array<int, 4> dr{-1, 1, 0, 0};
        static constexpr std::array<int, 4> dc{0, 0, -1, 1};
        const int nr = g.cells_[s].row + dr[index(a)];
        const int nc = g.cells_[s].col + dc[index(a)];
        const StateId next = g.id_at(nr, nc);
        g.adjacency_[s][index(a)] = next == kNoState ? s : next;
      }
    }
    g.check_reachable();
    return g;
  }

  static constexpr StateId kNoState = ~StateId{0};

  const std::string& name() const noexcept { return name_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t num_states() const noexcept { return cells_.size(); }
  const Cell& cell(StateId s) const { return cells_.at(s); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// State id at (row, col), or kNoState for walls and off-grid positions.
  StateId id_at(int row, int col) const noexcept {
    if (row < 0 || col < 0 || row >= rows_ || col >= cols_) return kNoState;
    return id_at_[static_cast<std::size_t>(row * cols_ + col)];
  }

  StateId next(StateId s, Action a) const { return adjacency_.at(s)[index(a)]; }

  /// Distinct cells reachable in one move, excluding `s` itself.
  std::vector<StateId> neighbours(StateId s) const {
    std::vector<StateId> out;
    for (Action a : kActions) {
      const StateId n = next(s, a);
      if (n == s) continue;
      bool seen = false;
      for (StateId o : out) seen = seen || o == n;
      if (!seen) out.push_back(n);
    }
    return out;
  }

  StateId start_id() const noexcept { return start_id_; }
  const std::vector<StateId>& terminal_ids() const noexcept { return terminal_ids_; }
  const std::array<StateId, 2>& goal_ids() const noexcept { return goal_ids_; }
  const std::vector<StateId>& non_terminal_ids() const noexcept { return non_terminal_ids_; }
  bool is_terminal(StateId s) const { return is_terminal_.at(s); }

 private:
  void check_reachable() const {
    std::vector<bool> seen(cells_.size(), false);
    std::queue<StateId> frontier;
    frontier.push(start_id_);
    seen[start_id_] = true;
    while (!frontier.empty()) {
      const StateId s = frontier.front();
      frontier.pop();
      if (is_terminal_[s]) continue;
      for (Action a : kActions) {
        const StateId n = next(s, a);
        if (!seen[n]) {
          seen[n] = true;
          frontier.push(n);
        }
      }
    }
    for (StateId s = 0; s < cells_.size(); ++s)
      if (!seen[s])
        throw std::invalid_argument("GridSpec: cell (" + std::to_string(cells_[s].row) + "," +
                                    std::to_string(cells_[s].col) + ") unreachable from start");
  }

  std::string name_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Cell> cells_;
  std::vector<StateId> id_at_;
  std::vector<std::array<StateId, kNumActions>> adjacency_;
  std::vector<StateId> terminal_ids_;
  std::vector<StateId> non_terminal_ids_;
  std::vector<bool> is_terminal_;
  std::array<StateId, 2> goal_ids_{};
  StateId start_id_ = 0;
};

/// T-shaped maze: a five-cell vertical hallway (start at the bottom, junction
/// at the top) opening onto a horizontal hallway with three cells on each
/// side of the junction and a terminal at each end.
inline GridSpec make_tmaze() {
  return GridSpec::from_layout("tmaze", {
                                            "T...J...T",
                                            "####.####",
                                            "####.####",
                                            "####.####",
                                            "####S####",
                                        });
}

/// Two 5x5 rooms joined by a doorway in the middle row of the dividing wall.
/// Goals sit in the top-right and bottom-right corners of the right room.
inline GridSpec make_tworooms() {
  return GridSpec::from_layout("tworooms", {
                                               ".....#....T",
                                               ".....#.....",
                                               ".....D.....",
                                               ".....#.....",
                                               "S....#....T",
                                           });
}

inline bool is_tmaze(const GridSpec& g) { return g.name() == "tmaze"; }

// TMaze regions. The junction belongs to the vertical hallway: its value does
// not depend on which goal is active.

inline std::vector<StateId> tmaze_vertical_ids(const GridSpec& g) {
  std::vector<StateId> out;
  for (StateId s : g.non_terminal_ids())
    if (g.cell(s).row > 0 || g.cell(s).kind == CellKind::Junction) out.push_back(s);
  return out;
}

inline std::vector<StateId> tmaze_horizontal_ids(const GridSpec& g) {
  std::vector<StateId> out;
  for (StateId s : g.non_terminal_ids())
    if (g.cell(s).row == 0 && g.cell(s).kind != CellKind::Junction) out.push_back(s);
  return out;
}

/// Non-terminal states with a terminal among their neighbours.
inline std::vector<StateId> goal_adjacent_ids(const GridSpec& g) {
  std::vector<StateId> out;
  for (StateId s : g.non_terminal_ids()) {
    for (StateId n : g.neighbours(s)) {
      if (g.is_terminal(n)) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

/// ASCII map. `marker` (if set) is drawn as '@'; the active goal as 'G'.
inline std::string render_ascii(const GridSpec& g, StateId marker = GridSpec::kNoState,
                                int active_goal = -1) {
  std::string out;
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const StateId s = g.id_at(r, c);
      char ch = '#';
      if (s != GridSpec::kNoState) {
        switch (g.cell(s).kind) {
          case CellKind::Start: ch = 'S'; break;
          case CellKind::Hallway: ch = '.'; break;
          case CellKind::Junction: ch = 'J'; break;
          case CellKind::Doorway: ch = 'D'; break;
          case CellKind::Terminal: ch = 'T'; break;
          case CellKind::Wall: ch = '#'; break;
        }
        if (active_goal >= 0 && s == g.goal_ids()[static_cast<std::size_t>(active_goal)]) ch = 'G';
        if (s == marker) ch = '@';
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mgsc
