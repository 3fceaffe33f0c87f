#pragma once

// Sample containers, CSV ingestion and the compiled-in fixture datasets.
//
// CSV dialect: comma separated, first row is a header, '.' decimal point.
// Fields may be wrapped in double quotes ("" escapes a quote). Blank lines
// are skipped.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "tentative/error.hpp"

namespace tentative {

class Sample {
 public:
  explicit Sample(std::vector<double> values, std::optional<std::string> label = std::nullopt)
      : values_(std::move(values)), label_(std::move(label)) {
    if (values_.empty()) throw Error("sample is empty");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i])) throw Error("sample value " + std::to_string(i) + " is not finite");
  }

  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::optional<std::string>& label() const noexcept { return label_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }
  [[nodiscard]] double mean() const noexcept { return sum() / static_cast<double>(values_.size()); }

 private:
  std::vector<double> values_;
  std::optional<std::string> label_;
};

struct GroupedRow {
  double value;
  std::size_t group;  // 0 or 1

  friend bool operator==(const GroupedRow&, const GroupedRow&) = default;
};

/// Observations tagged with one of exactly two group names. Group 0 is the
/// group that appears first; differences are always group 0 minus group 1.
class GroupedSample {
 public:
  GroupedSample(std::vector<GroupedRow> rows, std::array<std::string, 2> names)
      : rows_(std::move(rows)), names_(std::move(names)) {
    if (rows_.empty()) throw Error("grouped sample is empty");
    if (names_[0] == names_[1]) throw Error("group names must be distinct");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!std::isfinite(rows_[i].value)) throw Error("row " + std::to_string(i) + " value is not finite");
      if (rows_[i].group > 1) throw Error("row " + std::to_string(i) + " has a group index other than 0 or 1");
      ++counts_[rows_[i].group];
    }
    if (counts_[0] == 0 || counts_[1] == 0) throw Error("each group needs at least one row");
  }

  /// Builds from parallel value/label columns; group order is first appearance.
  static GroupedSample from_labels(const std::vector<double>& values, const std::vector<std::string>& labels) {
    if (values.size() != labels.size()) throw Error("value and label columns differ in length");
    std::vector<std::string> names;
    std::vector<GroupedRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      auto it = std::find(names.begin(), names.end(), labels[i]);
      if (it == names.end()) {
        names.push_back(labels[i]);
        it = names.end() - 1;
      }
      rows.push_back({values[i], static_cast<std::size_t>(it - names.begin())});
    }
    if (names.size() != 2)
      throw Error("expected exactly two groups, found " + std::to_string(names.size()));
    return GroupedSample(std::move(rows), {names[0], names[1]});
  }

  /// Group 0 rows followed by group 1 rows.
  static GroupedSample from_groups(const std::vector<double>& first, const std::vector<double>& second,
                                   std::array<std::string, 2> names) {
    std::vector<GroupedRow> rows;
    for (double v : first) rows.push_back({v, 0});
    for (double v : second) rows.push_back({v, 1});
    return GroupedSample(std::move(rows), std::move(names));
  }

  [[nodiscard]] const std::vector<GroupedRow>& rows() const noexcept { return rows_; }
  [[nodiscard]] const std::array<std::string, 2>& names() const noexcept { return names_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] std::size_t count(std::size_t group) const { return counts_.at(group); }

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.value);
    return out;
  }

  [[nodiscard]] std::vector<double> group_values(std::size_t group) const {
    std::vector<double> out;
    for (const auto& r : rows_)
      if (r.group == group) out.push_back(r.value);
    return out;
  }

  [[nodiscard]] double mean(std::size_t group) const {
    double s = 0;
    for (const auto& r : rows_)
      if (r.group == group) s += r.value;
    return s / static_cast<double>(counts_.at(group));
  }

  [[nodiscard]] double difference() const { return mean(0) - mean(1); }

  /// Same rows with the group names (and therefore the sign convention) swapped.
  [[nodiscard]] GroupedSample relabeled() const {
    std::vector<GroupedRow> rows = rows_;
    for (auto& r : rows) r.group = 1 - r.group;
    return GroupedSample(std::move(rows), {names_[1], names_[0]});
  }

 private:
  std::vector<GroupedRow> rows_;
  std::array<std::string, 2> names_;
  std::array<std::size_t, 2> counts_{0, 0};
};

/// Paired observations (x_i, y_i), e.g. height and intelligence.
class PairedSample {
 public:
  PairedSample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw Error("paired columns differ in length");
    if (x_.empty()) throw Error("paired sample is empty");
    for (std::size_t i = 0; i < x_.size(); ++i)
      if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
        throw Error("pair " + std::to_string(i) + " is not finite");
  }

  [[nodiscard]] const std::vector<double>& x() const noexcept { return x_; }
  [[nodiscard]] const std::vector<double>& y() const noexcept { return y_; }
  [[nodiscard]] std::size_t size() const noexcept { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// A finite population of 0/1 indicators (e.g. votes for one candidate).
class PopulationVector {
 public:
  explicit PopulationVector(std::vector<std::uint8_t> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("population is empty");
    for (auto e : entries_)
      if (e > 1) throw Error("population entries must be 0 or 1");
  }

  static PopulationVector from_counts(std::size_t ones, std::size_t zeros) {
    std::vector<std::uint8_t> entries(ones, 1);
    entries.insert(entries.end(), zeros, 0);
    return PopulationVector(std::move(entries));
  }

  [[nodiscard]] const std::vector<std::uint8_t>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t ones() const noexcept {
    return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), std::uint8_t{1}));
  }
  [[nodiscard]] double proportion() const noexcept {
    return static_cast<double>(ones()) / static_cast<double>(entries_.size());
  }

 private:
  std::vector<std::uint8_t> entries_;
};

// ---------------------------------------------------------------------------
// CSV

namespace csv {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

inline std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("CSV has no column named '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }

  /// Column parsed as reals; errors name the 1-based data row.
  [[nodiscard]] std::vector<double> numbers(std::size_t col) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string_view cell = col < rows[i].size() ? std::string_view(rows[i][col]) : std::string_view();
      auto v = parse_number(cell);
      if (!v)
        throw Error("CSV data row " + std::to_string(i + 1) + ": cannot parse '" + std::string(cell) +
                    "' as a number in column '" + header[col] + "'");
      out.push_back(*v);
    }
    return out;
  }

  [[nodiscard]] std::vector<std::string> texts(std::size_t col) const {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (col >= rows[i].size() || rows[i][col].empty())
        throw Error("CSV data row " + std::to_string(i + 1) + ": empty cell in column '" + header[col] + "'");
      out.push_back(rows[i][col]);
    }
    return out;
  }
};

inline Table parse(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      t.header = split_line(line);
      have_header = true;
    } else {
      t.rows.push_back(split_line(line));
    }
  }
  if (!have_header) throw Error("CSV is empty");
  if (t.rows.empty()) throw Error("CSV has a header but no data rows");
  return t;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse(in);
}

}  // namespace csv

using LoadedData = std::variant<Sample, GroupedSample>;

inline LoadedData load_csv(std::istream& in, std::string_view value_column,
                           std::optional<std::string_view> group_column = std::nullopt) {
  const csv::Table t = csv::parse(in);
  std::vector<double> values = t.numbers(t.column(value_column));
  if (!group_column) return Sample(std::move(values), std::string(value_column));
  return GroupedSample::from_labels(values, t.texts(t.column(*group_column)));
}

inline LoadedData load_csv(const std::string& path, std::string_view value_column,
                           std::optional<std::string_view> group_column = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_csv(in, value_column, group_column);
}

inline PairedSample load_paired_csv(const std::string& path, std::string_view x_column, std::string_view y_column) {
  const csv::Table t = csv::read_file(path);
  return PairedSample(t.numbers(t.column(x_column)), t.numbers(t.column(y_column)));
}

namespace detail {
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string format_real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}
}  // namespace detail

/// Shortest round-trip decimal representation, so reloading is exact.
inline void write_csv(std::ostream& out, const Sample& s) {
  out << detail::csv_quote(s.label().value_or("value")) << '\n';
  for (double v : s.values()) out << detail::format_real(v) << '\n';
}

inline void write_csv(std::ostream& out, const GroupedSample& g, std::string_view value_column = "value",
                      std::string_view group_column = "group") {
  out << value_column << ',' << group_column << '\n';
  for (const auto& r : g.rows()) out << detail::format_real(r.value) << ',' << detail::csv_quote(g.names()[r.group]) << '\n';
}

// ---------------------------------------------------------------------------
// Fixtures

struct Fixture {
  std::string name;
  std::string description;
  std::variant<Sample, GroupedSample, PopulationVector> payload;
};

/// The published example datasets, compiled in.
inline const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = [] {
    std::vector<Fixture> f;
    f.push_back({"veg9", "wellbeing scores of 9 vegetarians (mean 60)",
                 Sample({74, 65, 57, 78, 54, 47, 38, 34, 93}, "wellbeing")});
    f.push_back({"skewed9", "wellbeing scores of 9 self-selected vegetarians (mean 85)",
                 Sample({96, 100, 35, 95, 97, 99, 50, 95, 98}, "wellbeing")});
    f.push_back({"veg6", "six wellbeing scores tagged Vegetarian/Omnivore",
                 GroupedSample::from_labels({74, 65, 69, 37, 57, 26},
                                            {"Vegetarian", "Vegetarian", "Omnivore", "Omnivore", "Vegetarian",
                                             "Omnivore"})});
    f.push_back({"poll500", "electorate of 500: 300 votes for the candidate (1), 200 others (0)",
                 PopulationVector::from_counts(300, 200)});
    return f;
  }();
  return all;
}

inline const Fixture& find_fixture(std::string_view name) {
  for (const auto& f : fixtures())
    if (f.name == name) return f;
  std::string known;
  for (const auto& f : fixtures()) known += (known.empty() ? "" : ", ") + f.name;
  throw Error("unknown fixture '" + std::string(name) + "' (known: " + known + ")");
}

/// Canonical CSV text of a fixture; used for digests and `fixtures --name`.
inline std::string fixture_csv(const Fixture& f) {
  std::ostringstream out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PopulationVector>) {
          out << "vote\n";
          for (auto e : p.entries()) out << static_cast<int>(e) << '\n';
        } else {
          write_csv(out, p);
        }
      },
      f.payload);
  return out.str();
}

}  // namespace tentative
