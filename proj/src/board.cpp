#include "battleship/board.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

namespace battleship {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

const std::string kWaterName = "Water";

}  // namespace

std::optional<cell_t> GameConfig::color_code(const std::string& name) const {
  if (name == kWaterName) return kWaterCell;
  for (std::size_t i = 0; i < ships.size(); ++i) {
    if (ships[i].id == name) return static_cast<cell_t>(i + 1);
  }
  return std::nullopt;
}

const std::string& GameConfig::color_name(cell_t code) const {
  if (code == kWaterCell) return kWaterName;
  return ships.at(static_cast<std::size_t>(code) - 1).id;
}

void GameConfig::validate() const {
  if (rows < 1 || cols < 1) throw BoardError("board dimensions must be positive");
  if (ships.empty()) throw BoardError("config must declare at least one ship");
  for (const auto& ship : ships) {
    if (ship.id.empty()) throw BoardError("ship id must be non-empty");
    char sym = ship.symbol();
    if (sym == 'H' || sym == 'W')
      throw BoardError("ship symbol '" + std::string(1, sym) +
                       "' collides with the hidden/water symbols");
    if (ship.lengths.empty())
      throw BoardError("ship " + ship.id + " has no admissible lengths");
    for (int len : ship.lengths) {
      if (len < 2 || len > std::max(rows, cols))
        throw BoardError("ship " + ship.id + " has out-of-range length " +
                         std::to_string(len));
    }
    if (!std::is_sorted(ship.lengths.begin(), ship.lengths.end()))
      throw BoardError("ship " + ship.id + " lengths must be ascending");
  }
  for (std::size_t i = 0; i < ships.size(); ++i) {
    for (std::size_t j = i + 1; j < ships.size(); ++j) {
      if (ships[i].id == ships[j].id)
        throw BoardError("duplicate ship id " + ships[i].id);
      if (ships[i].symbol() == ships[j].symbol())
        throw BoardError("ships " + ships[i].id + " and " + ships[j].id +
                         " share the grid symbol '" +
                         std::string(1, ships[i].symbol()) + "'");
    }
  }
}

ConfigPtr make_config(GameConfig cfg) {
  cfg.validate();
  return std::make_shared<const GameConfig>(std::move(cfg));
}

ConfigPtr default_config() {
  static const ConfigPtr cfg = make_config(GameConfig{
      6,
      6,
      {{"Red", {2, 3, 4}}, {"Blue", {2, 3, 4}}, {"Purple", {2, 3, 4}}},
      false});
  return cfg;
}

int PartialBoard::revealed_count() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(),
                    [](cell_t c) { return c != kHiddenCell; }));
}

FullBoard materialize(const ConfigPtr& config,
                      const std::vector<ShipPlacement>& placements) {
  if (placements.size() != config->ships.size())
    throw BoardError("placement count does not match ship count");
  FullBoard full;
  full.config = config;
  full.cells.assign(static_cast<std::size_t>(config->cell_count()), kWaterCell);
  full.placements = placements;
  for (std::size_t s = 0; s < placements.size(); ++s) {
    const ShipPlacement& p = placements[s];
    for (int k = 0; k < p.length; ++k) {
      Coord c = p.tile(k);
      if (!config->in_bounds(c))
        throw BoardError("placement for " + config->ships[s].id +
                         " leaves the board");
      cell_t& cell = full.cells[static_cast<std::size_t>(config->index(c))];
      if (cell != kWaterCell)
        throw BoardError("placements overlap at " + c.label());
      cell = static_cast<cell_t>(s + 1);
    }
  }
  return full;
}

bool is_consistent(const FullBoard& full, const PartialBoard& partial) {
  for (std::size_t i = 0; i < partial.cells.size(); ++i) {
    cell_t seen = partial.cells[i];
    if (seen != kHiddenCell && full.cells[i] != seen) return false;
  }
  return true;
}

namespace {

std::string render_grid_impl(const GameConfig& cfg,
                             const std::vector<cell_t>& cells) {
  if (cfg.rows > 9 || cfg.cols > 26)
    throw BoardError("board too large to render as a grid");
  std::string out = " ";
  for (int c = 0; c < cfg.cols; ++c) {
    out += ' ';
    out += static_cast<char>('A' + c);
  }
  out += '\n';
  for (int r = 0; r < cfg.rows; ++r) {
    out += static_cast<char>('1' + r);
    for (int c = 0; c < cfg.cols; ++c) {
      cell_t cell = cells[static_cast<std::size_t>(r * cfg.cols + c)];
      char sym;
      if (cell == kHiddenCell)
        sym = 'H';
      else if (cell == kWaterCell)
        sym = 'W';
      else
        sym = cfg.ships[static_cast<std::size_t>(cell) - 1].symbol();
      out += ' ';
      out += sym;
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_grid(const PartialBoard& board) {
  return render_grid_impl(*board.config, board.cells);
}

std::string render_grid(const FullBoard& board) {
  return render_grid_impl(*board.config, board.cells);
}

std::string render_textual(const PartialBoard& board) {
  std::string out;
  const GameConfig& cfg = *board.config;
  for (int i = 0; i < cfg.cell_count(); ++i) {
    cell_t cell = board.cells[static_cast<std::size_t>(i)];
    if (cell == kHiddenCell) continue;
    Coord c = cfg.coord(i);
    out += std::to_string(c.row);
    out += '-';
    out += static_cast<char>('A' + c.col - 1);
    if (cell == kWaterCell) {
      out += " is a water tile.\n";
    } else {
      out += " is a ";
      out += lower(cfg.color_name(cell));
      out += " ship tile.\n";
    }
  }
  return out;
}

PartialBoard parse_board(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw BoardError(std::string("board file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw BoardError("board file must be a JSON object");

  GameConfig cfg;
  try {
    cfg.rows = doc.at("rows").get<int>();
    cfg.cols = doc.at("cols").get<int>();
    for (const auto& ship : doc.at("ships")) {
      ShipSpec spec;
      spec.id = ship.at("id").get<std::string>();
      spec.lengths = ship.at("lengths").get<std::vector<int>>();
      cfg.ships.push_back(std::move(spec));
    }
    cfg.distinct_lengths = doc.value("distinct_lengths", false);
  } catch (const nlohmann::json::exception& e) {
    throw BoardError(std::string("bad board file structure: ") + e.what());
  }

  PartialBoard board;
  board.config = make_config(std::move(cfg));
  const GameConfig& c = *board.config;

  if (!doc.contains("grid") || !doc["grid"].is_array())
    throw BoardError("board file is missing the grid array");
  const auto& grid = doc["grid"];
  if (static_cast<int>(grid.size()) != c.rows)
    throw BoardError("grid has " + std::to_string(grid.size()) +
                     " rows, config declares " + std::to_string(c.rows));
  board.cells.reserve(static_cast<std::size_t>(c.cell_count()));
  for (int r = 0; r < c.rows; ++r) {
    if (!grid[static_cast<std::size_t>(r)].is_string())
      throw BoardError("grid rows must be strings");
    const std::string row = grid[static_cast<std::size_t>(r)].get<std::string>();
    if (static_cast<int>(row.size()) != c.cols)
      throw BoardError("grid row " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " symbols, expected " +
                       std::to_string(c.cols));
    for (char sym : row) {
      if (sym == 'H') {
        board.cells.push_back(kHiddenCell);
        continue;
      }
      if (sym == 'W') {
        board.cells.push_back(kWaterCell);
        continue;
      }
      cell_t code = kHiddenCell;
      for (std::size_t s = 0; s < c.ships.size(); ++s) {
        if (c.ships[s].symbol() == sym) {
          code = static_cast<cell_t>(s + 1);
          break;
        }
      }
      if (code == kHiddenCell)
        throw BoardError("unknown grid symbol '" + std::string(1, sym) +
                         "' in row " + std::to_string(r + 1));
      board.cells.push_back(code);
    }
  }
  return board;
}

std::string board_to_json(const PartialBoard& board) {
  const GameConfig& cfg = *board.config;
  nlohmann::json doc;
  doc["rows"] = cfg.rows;
  doc["cols"] = cfg.cols;
  doc["ships"] = nlohmann::json::array();
  for (const auto& ship : cfg.ships)
    doc["ships"].push_back({{"id", ship.id}, {"lengths", ship.lengths}});
  if (cfg.distinct_lengths) doc["distinct_lengths"] = true;
  std::vector<std::string> rows;
  for (int r = 0; r < cfg.rows; ++r) {
    std::string row;
    for (int c = 0; c < cfg.cols; ++c) {
      cell_t cell = board.cells[static_cast<std::size_t>(r * cfg.cols + c)];
      if (cell == kHiddenCell)
        row += 'H';
      else if (cell == kWaterCell)
        row += 'W';
      else
        row += cfg.ships[static_cast<std::size_t>(cell) - 1].symbol();
    }
    rows.push_back(std::move(row));
  }
  doc["grid"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace battleship
