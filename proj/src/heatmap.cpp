#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "morl/error.hpp"
#include "morl/experiments.hpp"

namespace morl {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void csv_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "heatmap CSV line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) csv_error(line, "bad number \"" + std::string(text) + "\"");
  return value;
}

std::uint64_t parse_count(std::string_view text, std::size_t line) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) csv_error(line, "bad count \"" + std::string(text) + "\"");
  return value;
}

std::size_t index_of(std::vector<double>& axis, double value) {
  auto it = std::find(axis.begin(), axis.end(), value);
  if (it != axis.end()) return static_cast<std::size_t>(it - axis.begin());
  axis.push_back(value);
  return axis.size() - 1;
}

}  // namespace

HeatmapFormat heatmap_format_from_string(std::string_view name) {
  if (name == "csv") return HeatmapFormat::Csv;
  if (name == "svg") return HeatmapFormat::Svg;
  fail(ErrorCode::InvalidArgument, "unknown heatmap format \"" + std::string(name) + "\" (expected csv or svg)");
}

std::string heatmap_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "strategy,alpha,epsilon";
  for (std::size_t p = 0; p < result.n_policies; ++p) out << ",policy" << p;
  out << '\n';
  for (const auto& grid : result.grids) {
    for (std::size_t ai = 0; ai < result.alphas.size(); ++ai) {
      for (std::size_t ei = 0; ei < result.epsilons.size(); ++ei) {
        out << to_string(grid.strategy) << ',' << format_double(result.alphas[ai]) << ','
            << format_double(result.epsilons[ei]);
        for (auto count : grid.cells[ai * result.epsilons.size() + ei]) out << ',' << count;
        out << '\n';
      }
    }
  }
  return out.str();
}

SweepResult parse_heatmap_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) csv_error(1, "missing header");

  const auto header = split(lines[0], ',');
  if (header.size() < 4 || header[0] != "strategy" || header[1] != "alpha" || header[2] != "epsilon") {
    csv_error(1, "header must start with strategy,alpha,epsilon,policy0");
  }
  SweepResult result;
  result.n_policies = header.size() - 3;
  for (std::size_t p = 0; p < result.n_policies; ++p) {
    if (header[3 + p] != "policy" + std::to_string(p)) csv_error(1, "expected column policy" + std::to_string(p));
  }

  struct Row {
    TieBreak strategy;
    std::size_t ai, ei;
    PolicyHistogram counts;
  };
  std::vector<Row> rows;
  std::vector<TieBreak> strategies;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = split(lines[i], ',');
    if (fields.size() != header.size()) csv_error(line_no, "wrong number of fields");
    Row row;
    try {
      row.strategy = tie_break_from_string(fields[0]);
    } catch (const Error&) {
      csv_error(line_no, "unknown strategy \"" + std::string(fields[0]) + "\"");
    }
    row.ai = index_of(result.alphas, parse_real(fields[1], line_no));
    row.ei = index_of(result.epsilons, parse_real(fields[2], line_no));
    for (std::size_t p = 0; p < result.n_policies; ++p) row.counts.push_back(parse_count(fields[3 + p], line_no));
    if (std::find(strategies.begin(), strategies.end(), row.strategy) == strategies.end()) {
      strategies.push_back(row.strategy);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) csv_error(2, "no data rows");

  const std::size_t n_cells = result.alphas.size() * result.epsilons.size();
  for (TieBreak s : strategies) result.grids.push_back({s, std::vector<PolicyHistogram>(n_cells)});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    auto& grid = *std::find_if(result.grids.begin(), result.grids.end(),
                               [&](const StrategyGrid& g) { return g.strategy == row.strategy; });
    auto& cell = grid.cells[row.ai * result.epsilons.size() + row.ei];
    if (!cell.empty()) csv_error(i + 2, "duplicate cell");
    cell = row.counts;
    std::uint64_t sum = 0;
    for (auto c : row.counts) sum += c;
    if (i == 0) result.trials_per_cell = sum;
    if (sum != result.trials_per_cell) csv_error(i + 2, "cell counts do not sum to the trial count of the first row");
  }
  for (const auto& grid : result.grids) {
    for (const auto& cell : grid.cells) {
      if (cell.empty()) csv_error(lines.size(), "grid is incomplete");
    }
  }
  return result;
}

std::string heatmap_svg(const SweepResult& result) {
  constexpr int kCell = 28;
  constexpr int kMarginLeft = 56;
  constexpr int kMarginTop = 48;
  constexpr int kPanelGap = 36;
  const int panel_w = kCell * static_cast<int>(result.epsilons.size());
  const int panel_h = kCell * static_cast<int>(result.alphas.size());
  const int n_cols = static_cast<int>(result.n_policies);
  const int n_rows = static_cast<int>(result.grids.size());
  const int width = kMarginLeft + n_cols * (panel_w + kPanelGap + kMarginLeft);
  const int height = kMarginTop + n_rows * (panel_h + kPanelGap + kMarginTop);
  const double trials = result.trials_per_cell == 0 ? 1.0 : static_cast<double>(result.trials_per_cell);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  for (int r = 0; r < n_rows; ++r) {
    const auto& grid = result.grids[r];
    for (int c = 0; c < n_cols; ++c) {
      const int x0 = kMarginLeft + c * (panel_w + kPanelGap + kMarginLeft);
      const int y0 = kMarginTop + r * (panel_h + kPanelGap + kMarginTop);
      svg << "<g id=\"" << to_string(grid.strategy) << "-policy" << c << "\">\n";
      svg << "<text x=\"" << x0 << "\" y=\"" << (y0 - 22) << "\" font-size=\"12\">" << to_string(grid.strategy)
          << ": policy " << c << "</text>\n";
      for (std::size_t ei = 0; ei < result.epsilons.size(); ++ei) {
        svg << "<text x=\"" << (x0 + static_cast<int>(ei) * kCell + kCell / 2) << "\" y=\"" << (y0 - 6)
            << "\" text-anchor=\"middle\">" << format_double(result.epsilons[ei]) << "</text>\n";
      }
      for (std::size_t ai = 0; ai < result.alphas.size(); ++ai) {
        const int y = y0 + static_cast<int>(ai) * kCell;
        svg << "<text x=\"" << (x0 - 6) << "\" y=\"" << (y + kCell / 2 + 3) << "\" text-anchor=\"end\">"
            << format_double(result.alphas[ai]) << "</text>\n";
        for (std::size_t ei = 0; ei < result.epsilons.size(); ++ei) {
          const auto count = grid.cells[ai * result.epsilons.size() + ei][static_cast<std::size_t>(c)];
          const int x = x0 + static_cast<int>(ei) * kCell;
          svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
              << "\" fill=\"#1f4e9c\" fill-opacity=\"" << format_double(static_cast<double>(count) / trials)
              << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
          svg << "<text x=\"" << (x + kCell / 2) << "\" y=\"" << (y + kCell / 2 + 3)
              << "\" text-anchor=\"middle\" fill=\"#000\">" << count << "</text>\n";
        }
      }
      svg << "<text x=\"" << (x0 + panel_w / 2) << "\" y=\"" << (y0 + panel_h + 16)
          << "\" text-anchor=\"middle\">ε</text>\n";
      svg << "<text x=\"" << (x0 - 40) << "\" y=\"" << (y0 + panel_h / 2) << "\" text-anchor=\"middle\">α</text>\n";
      svg << "</g>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_heatmap(const SweepResult& result, HeatmapFormat format, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + destination.string());
  out << (format == HeatmapFormat::Csv ? heatmap_csv(result) : heatmap_svg(result));
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing " + destination.string());
}

}  // namespace morl
