#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace digestlab {

enum class Polarity { positive, negative };

std::string_view to_string(Polarity p);

struct ObservedItem {
  std::string id;
  std::string text;
  std::string pair_id;
  Polarity polarity = Polarity::positive;
};

// Ordered list of observed variables. Every pair_id owns exactly two items
// of opposite polarity, so the item count is always even.
class Instrument {
 public:
  Instrument() = default;
  // Validates ids and pairing; throws InputError on violation.
  explicit Instrument(std::vector<ObservedItem> items);

  const std::vector<ObservedItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::optional<std::size_t> index_of(std::string_view id) const;

  struct Pair {
    std::string pair_id;
    std::size_t first;   // index of the positive item
    std::size_t second;  // index of the negative item
  };
  // Pairs in order of first appearance.
  std::vector<Pair> pairs() const;

 private:
  std::vector<ObservedItem> items_;
};

Instrument parse_instrument(std::string_view json_text);
Instrument load_instrument(const std::filesystem::path& path);

// The 22-item instrument (11 opposite pairs) compiled into the library.
const Instrument& bundled_instrument();
std::string_view bundled_instrument_json();

// Respondents x items grid of 6-point Likert codes (1..6), with missing cells.
class ResponseMatrix {
 public:
  static constexpr int kMinCode = 1;
  static constexpr int kMaxCode = 6;

  ResponseMatrix() = default;
  explicit ResponseMatrix(std::vector<std::string> item_ids);

  // Throws InputError if the row length is wrong or a value is outside 1..6.
  void add_row(const std::vector<std::optional<int>>& row);

  const std::vector<std::string>& item_ids() const { return item_ids_; }
  std::size_t items() const { return item_ids_.size(); }
  std::size_t rows() const { return rows_; }

  std::optional<int> at(std::size_t row, std::size_t item) const {
    const auto v = cells_[row * item_ids_.size() + item];
    if (v == 0) return std::nullopt;
    return static_cast<int>(v);
  }

  // Column values with missing cells as NaN.
  std::vector<double> column(std::size_t item) const;

  friend bool operator==(const ResponseMatrix&, const ResponseMatrix&) = default;

 private:
  std::vector<std::string> item_ids_;
  std::size_t rows_ = 0;
  std::vector<std::uint8_t> cells_;  // row-major, 0 = missing
};

// CSV: header of item ids, one row per respondent, empty cell = missing.
// When an instrument is given the header must be a permutation of its ids and
// the returned columns follow the instrument's order.
ResponseMatrix parse_responses(std::istream& in, const Instrument* instrument = nullptr);
ResponseMatrix load_responses(const std::filesystem::path& path,
                              const Instrument* instrument = nullptr);
void write_responses(std::ostream& out, const ResponseMatrix& responses);

struct PairStat {
  std::string pair_id;
  std::string first;
  std::string second;
  std::size_t n = 0;  // jointly observed rows
  std::optional<double> r;
  std::optional<double> deviation;  // r - (-1)
  std::string error;                // set when r could not be computed
};

// Pearson correlation of each opposite pair; a pair without enough usable
// data carries an error message instead of aborting the whole call.
std::vector<PairStat> pair_asymmetry(const ResponseMatrix& responses,
                                     const Instrument& instrument);

}  // namespace digestlab
