#include "digestlab/instrument.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "digestlab/corr.hpp"
#include "digestlab/error.hpp"

namespace digestlab {

std::string_view to_string(Polarity p) {
  return p == Polarity::positive ? "positive" : "negative";
}

Instrument::Instrument(std::vector<ObservedItem> items) : items_(std::move(items)) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items_) {
    if (item.id.empty()) throw InputError("instrument: item with empty id");
    if (!seen.insert(item.id).second) {
      throw InputError("instrument: duplicate item id '" + item.id + "'");
    }
  }
  if (items_.size() % 2 != 0) {
    throw InputError("instrument: odd item count " + std::to_string(items_.size()) +
                     " (items come in opposite pairs)");
  }
  std::map<std::string, std::vector<const ObservedItem*>> by_pair;
  for (const auto& item : items_) by_pair[item.pair_id].push_back(&item);
  for (const auto& [pair_id, members] : by_pair) {
    if (members.size() != 2) {
      throw InputError("instrument: pair '" + pair_id + "' has " + std::to_string(members.size()) +
                       " items, expected 2");
    }
    if (members[0]->polarity == members[1]->polarity) {
      throw InputError("instrument: pair '" + pair_id + "' has two " +
                       std::string(to_string(members[0]->polarity)) + " items");
    }
  }
}

std::optional<std::size_t> Instrument::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<Instrument::Pair> Instrument::pairs() const {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const auto& pid = items_[i].pair_id;
    auto it = std::find_if(out.begin(), out.end(), [&](const Pair& p) { return p.pair_id == pid; });
    if (it == out.end()) {
      out.push_back({pid, i, i});
      it = std::prev(out.end());
    }
    if (items_[i].polarity == Polarity::positive) {
      it->first = i;
    } else {
      it->second = i;
    }
  }
  return out;
}

Instrument parse_instrument(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("instrument: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
    throw InputError("instrument: expected an object with an 'items' array");
  }
  std::vector<ObservedItem> items;
  std::size_t index = 0;
  for (const auto& entry : doc["items"]) {
    const auto where = "instrument: item #" + std::to_string(index + 1);
    if (!entry.is_object()) throw InputError(where + " is not an object");
    for (const char* key : {"id", "pair_id", "polarity"}) {
      if (!entry.contains(key) || !entry[key].is_string()) {
        throw InputError(where + " lacks string field '" + key + "'");
      }
    }
    ObservedItem item;
    item.id = entry["id"].get<std::string>();
    item.text = entry.value("text", "");
    item.pair_id = entry["pair_id"].get<std::string>();
    const auto polarity = entry["polarity"].get<std::string>();
    if (polarity == "positive") {
      item.polarity = Polarity::positive;
    } else if (polarity == "negative") {
      item.polarity = Polarity::negative;
    } else {
      throw InputError(where + " has unknown polarity '" + polarity + "'");
    }
    items.push_back(std::move(item));
    ++index;
  }
  return Instrument(std::move(items));
}

Instrument load_instrument(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open instrument file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instrument(buf.str());
}

const Instrument& bundled_instrument() {
  static const Instrument instrument = parse_instrument(bundled_instrument_json());
  return instrument;
}

// ---------------------------------------------------------------------------

ResponseMatrix::ResponseMatrix(std::vector<std::string> item_ids) : item_ids_(std::move(item_ids)) {}

void ResponseMatrix::add_row(const std::vector<std::optional<int>>& row) {
  if (row.size() != item_ids_.size()) {
    throw InputError("responses: row " + std::to_string(rows_ + 1) + " has " +
                     std::to_string(row.size()) + " values, expected " +
                     std::to_string(item_ids_.size()));
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] && (*row[j] < kMinCode || *row[j] > kMaxCode)) {
      throw InputError("responses: row " + std::to_string(rows_ + 1) + ", item '" + item_ids_[j] +
                       "': value " + std::to_string(*row[j]) + " outside 1..6");
    }
  }
  for (const auto& v : row) cells_.push_back(v ? static_cast<std::uint8_t>(*v) : 0);
  ++rows_;
}

std::vector<double> ResponseMatrix::column(std::size_t item) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto v = at(r, item);
    out[r] = v ? static_cast<double>(*v) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

namespace {

std::optional<int> parse_code(const std::string& field, std::size_t row, const std::string& item) {
  if (field.empty()) return std::nullopt;
  int value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    // Accept integral decimals such as "4.0".
    double d = 0.0;
    auto [dptr, dec] = std::from_chars(first, last, d);
    if (dec != std::errc{} || dptr != last || d != std::floor(d) || std::abs(d) > 1e6) {
      throw InputError("responses: row " + std::to_string(row) + ", item '" + item +
                       "': non-integer value '" + field + "'");
    }
    value = static_cast<int>(d);
  }
  if (value < ResponseMatrix::kMinCode || value > ResponseMatrix::kMaxCode) {
    throw InputError("responses: row " + std::to_string(row) + ", item '" + item + "': value " +
                     field + " outside 1..6");
  }
  return value;
}

}  // namespace

ResponseMatrix parse_responses(std::istream& in, const Instrument* instrument) {
  std::string line;
  if (!csv::read_line(in, line)) throw InputError("responses: empty file");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = csv::split(line);

  std::unordered_set<std::string> seen;
  for (const auto& id : header) {
    if (id.empty()) throw InputError("responses: empty column name in header");
    if (!seen.insert(id).second) throw InputError("responses: duplicate column '" + id + "'");
  }

  // column_of[j] = CSV column holding output item j
  std::vector<std::size_t> column_of(header.size());
  std::vector<std::string> ids = header;
  if (instrument != nullptr) {
    for (const auto& id : header) {
      if (!instrument->index_of(id)) {
        throw InputError("responses: unknown column '" + id + "' (not in instrument)");
      }
    }
    ids.clear();
    for (const auto& item : instrument->items()) {
      auto it = std::find(header.begin(), header.end(), item.id);
      if (it == header.end()) {
        throw InputError("responses: header is missing instrument item '" + item.id + "'");
      }
      column_of[ids.size()] = static_cast<std::size_t>(it - header.begin());
      ids.push_back(item.id);
    }
  } else {
    for (std::size_t j = 0; j < header.size(); ++j) column_of[j] = j;
  }

  ResponseMatrix out(ids);
  std::size_t row = 0;
  std::vector<std::optional<int>> values(ids.size());
  while (csv::read_line(in, line)) {
    if (csv::is_blank(line)) continue;
    ++row;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw InputError("responses: row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      values[j] = parse_code(fields[column_of[j]], row, ids[j]);
    }
    out.add_row(values);
  }
  return out;
}

ResponseMatrix load_responses(const std::filesystem::path& path, const Instrument* instrument) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open responses file " + path.string());
  return parse_responses(in, instrument);
}

void write_responses(std::ostream& out, const ResponseMatrix& responses) {
  const auto& ids = responses.item_ids();
  for (std::size_t j = 0; j < ids.size(); ++j) out << (j ? "," : "") << ids[j];
  out << '\n';
  for (std::size_t r = 0; r < responses.rows(); ++r) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (j) out << ',';
      if (const auto v = responses.at(r, j)) out << *v;
    }
    out << '\n';
  }
}

std::vector<PairStat> pair_asymmetry(const ResponseMatrix& responses, const Instrument& instrument) {
  std::vector<PairStat> out;
  for (const auto& pair : instrument.pairs()) {
    PairStat stat;
    stat.pair_id = pair.pair_id;
    stat.first = instrument.items()[pair.first].id;
    stat.second = instrument.items()[pair.second].id;

    auto find = [&](const std::string& id) -> std::optional<std::size_t> {
      const auto& ids = responses.item_ids();
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) return std::nullopt;
      return static_cast<std::size_t>(it - ids.begin());
    };
    const auto a = find(stat.first);
    const auto b = find(stat.second);
    if (!a || !b) {
      stat.error = "pair item missing from responses";
      out.push_back(std::move(stat));
      continue;
    }
    const auto x = responses.column(*a);
    const auto y = responses.column(*b);
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (!std::isnan(x[r]) && !std::isnan(y[r])) ++stat.n;
    }
    try {
      const double r = pearson_pair(x, y);
      stat.r = r;
      stat.deviation = r + 1.0;
    } catch (const InputError& e) {
      stat.error = e.what();
    }
    out.push_back(std::move(stat));
  }
  return out;
}

}  // namespace digestlab
