// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ecgbench/config.hpp"
#include "ecgbench/error.hpp"

namespace ecgbench::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(RecordFormat f) {
  switch (f) {
    case RecordFormat::f32le: return "f32le";
    case RecordFormat::csv: return "csv";
    case RecordFormat::wfdb: return "wfdb";
  }
  return "unknown";
}

std::optional<RecordFormat> parse_record_format(std::string_view name) {
  for (auto f : {RecordFormat::f32le, RecordFormat::csv, RecordFormat::wfdb}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<std::string> DatasetIndex::subjects() const {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (out.empty() || out.back() != r.subject_id) out.push_back(r.subject_id);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

std::optional<long> parse_date_days(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

struct Entry {
  RecordMeta meta;
  std::optional<long> date_days;
  bool has_day = false;
  bool has_index = false;
  std::size_t order = 0;
};

std::string entry_where(std::size_t i) { return "records[" + std::to_string(i) + "]"; }

Entry parse_entry(const json& e, std::size_t i, const fs::path& base_dir) {
  const std::string where = entry_where(i);
  require(e.is_object(), ErrorCode::SchemaError, where + " must be an object");
  static const std::set<std::string> known{"subject", "session", "day", "date", "record_index",
                                           "path", "format", "fs", "channel"};
  for (const auto& [key, value] : e.items()) {
    require(known.count(key) > 0, ErrorCode::SchemaError, where + ": unknown field '" + key + "'");
  }
  auto string_field = [&](const char* key) {
    require(e.contains(key) && e[key].is_string() && !e[key].get<std::string>().empty(), ErrorCode::SchemaError,
            where + "." + key + " must be a non-empty string");
    return e[key].get<std::string>();
  };

  Entry out;
  out.order = i;
  out.meta.subject_id = string_field("subject");
  out.meta.session_id = string_field("session");
  const std::string path = string_field("path");
  out.meta.path = fs::path(path).is_absolute() ? fs::path(path) : base_dir / path;
  const auto format = parse_record_format(string_field("format"));
  require(format.has_value(), ErrorCode::SchemaError, where + ".format must be f32le, csv or wfdb");
  out.meta.format = *format;

  require(!(e.contains("day") && e.contains("date")), ErrorCode::SchemaError, where + ": give day or date, not both");
  if (e.contains("day")) {
    require(is_non_negative_integer(e["day"]), ErrorCode::SchemaError, where + ".day must be a non-negative integer");
    out.meta.day_index = e["day"].get<unsigned>();
    out.has_day = true;
  }
  if (e.contains("date")) {
    require(e["date"].is_string(), ErrorCode::SchemaError, where + ".date must be a YYYY-MM-DD string");
    out.date_days = parse_date_days(e["date"].get<std::string>());
    require(out.date_days.has_value(), ErrorCode::SchemaError, where + ".date must be a valid YYYY-MM-DD date");
  }
  if (e.contains("record_index")) {
    require(is_non_negative_integer(e["record_index"]), ErrorCode::SchemaError,
            where + ".record_index must be a non-negative integer");
    out.meta.record_index = e["record_index"].get<unsigned>();
    out.has_index = true;
  }
  if (e.contains("fs")) {
    require(e["fs"].is_number() && e["fs"].get<double>() > 0.0 && std::isfinite(e["fs"].get<double>()),
            ErrorCode::SchemaError, where + ".fs must be a positive number");
    require(out.meta.format != RecordFormat::wfdb, ErrorCode::SchemaError,
            where + ": wfdb records take fs from their header");
    out.meta.fs = e["fs"].get<double>();
  } else {
    require(out.meta.format == RecordFormat::wfdb, ErrorCode::SchemaError, where + ".fs is required for raw formats");
  }
  if (e.contains("channel")) {
    require(is_non_negative_integer(e["channel"]), ErrorCode::SchemaError, where + ".channel must be a non-negative integer");
    out.meta.channel = e["channel"].get<std::size_t>();
  }
  return out;
}

}  // namespace

DatasetIndex parse_manifest(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("manifest is not valid JSON: ") + e.what());
  }
  require(doc.is_object() && doc.contains("records") && doc["records"].is_array(), ErrorCode::SchemaError,
          "manifest must be an object with a 'records' array");
  for (const auto& [key, value] : doc.items()) {
    require(key == "records" || key == "name" || key == "description", ErrorCode::SchemaError,
            "manifest: unknown field '" + key + "'");
  }

  std::vector<Entry> entries;
  for (std::size_t i = 0; i < doc["records"].size(); ++i) entries.push_back(parse_entry(doc["records"][i], i, base_dir));

  // Dates become days since each subject's first date; a subject must use one temporal convention.
  std::map<std::string, long> first_date;
  std::map<std::string, int> convention;  // 0 none, 1 day, 2 date
  for (const auto& e : entries) {
    const int c = e.date_days ? 2 : (e.has_day ? 1 : 0);
    auto [it, inserted] = convention.emplace(e.meta.subject_id, c);
    require(inserted || it->second == c, ErrorCode::SchemaError,
            "subject '" + e.meta.subject_id + "' mixes day, date and undated records");
    if (e.date_days) {
      auto [d, fresh] = first_date.emplace(e.meta.subject_id, *e.date_days);
      if (!fresh) d->second = std::min(d->second, *e.date_days);
    }
  }
  for (auto& e : entries) {
    if (e.date_days) e.meta.day_index = static_cast<unsigned>(*e.date_days - first_date.at(e.meta.subject_id));
  }

  // Missing record indices follow declaration order within (subject, day).
  std::map<std::pair<std::string, unsigned>, unsigned> next_index;
  std::map<std::pair<std::string, unsigned>, bool> explicit_index;
  for (const auto& e : entries) {
    auto [it, inserted] = explicit_index.emplace(std::pair{e.meta.subject_id, e.meta.day_index}, e.has_index);
    require(inserted || it->second == e.has_index, ErrorCode::SchemaError,
            "subject '" + e.meta.subject_id + "' mixes records with and without record_index on one day");
  }
  for (auto& e : entries) {
    if (!e.has_index) e.meta.record_index = next_index[{e.meta.subject_id, e.meta.day_index}]++;
  }

  std::set<std::tuple<std::string, std::string, unsigned, unsigned>> keys;
  std::set<fs::path> paths;
  for (const auto& e : entries) {
    const auto& m = e.meta;
    require(keys.emplace(m.subject_id, m.session_id, m.day_index, m.record_index).second,
            ErrorCode::DuplicateRecordKey,
            "duplicate record (" + m.subject_id + ", " + m.session_id + ", day " + std::to_string(m.day_index) +
                ", #" + std::to_string(m.record_index) + ")");
    require(paths.insert(m.path.lexically_normal()).second, ErrorCode::DuplicateRecordKey,
            "path '" + m.path.string() + "' listed twice");
  }

  DatasetIndex index;
  for (auto& e : entries) index.records.push_back(std::move(e.meta));
  std::sort(index.records.begin(), index.records.end(), [](const RecordMeta& a, const RecordMeta& b) {
    return std::tie(a.subject_id, a.day_index, a.record_index, a.session_id, a.path) <
           std::tie(b.subject_id, b.day_index, b.record_index, b.session_id, b.path);
  });
  return index;
}

DatasetIndex load_manifest(const fs::path& path) {
  return parse_manifest(read_text(path), path.parent_path());
}

json manifest_json(const DatasetIndex& index, const fs::path& base_dir) {
  const fs::path base = (base_dir / "_").parent_path();  // drops a trailing separator
  json records = json::array();
  for (const auto& r : index.records) {
    json e = {{"subject", r.subject_id},
              {"session", r.session_id},
              {"day", r.day_index},
              {"record_index", r.record_index},
              {"path", r.path.lexically_relative(base).generic_string()},
              {"format", to_string(r.format)}};
    if (r.fs) e["fs"] = *r.fs;
    if (r.channel) e["channel"] = *r.channel;
    records.push_back(e);
  }
  return {{"records", records}};
}

// ---------------------------------------------------------------------------
// WFDB header

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::MalformedHeaderLine, "line " + std::to_string(line_no) + ": " + what);
}

void parse_record_line(const std::vector<std::string>& tok, std::size_t line_no, WfdbHeader& h) {
  if (tok.size() < 2) bad_line(line_no, "record line needs a name and a signal count");
  if (tok[0].find('/') != std::string::npos) bad_line(line_no, "multi-segment records are not supported");
  h.record_name = tok[0];
  const auto nsig = parse_number<std::size_t>(tok[1]);
  if (!nsig || *nsig == 0) bad_line(line_no, "signal count must be a positive integer");
  h.n_signals = *nsig;
  if (tok.size() >= 3) {
    // fs[/counter_freq[(base_counter)]]; only the sampling frequency is used.
    const std::string fs_tok = tok[2].substr(0, tok[2].find('/'));
    const auto fs = parse_number<double>(fs_tok);
    if (!fs || !(*fs > 0.0)) bad_line(line_no, "sampling frequency must be positive");
    h.fs = *fs;
  }
  if (tok.size() >= 4) {
    const auto n = parse_number<std::size_t>(tok[3]);
    if (!n) bad_line(line_no, "sample count must be a non-negative integer");
    h.n_samples = *n;
  }
}

WfdbSignal parse_signal_line(const std::vector<std::string>& tok, std::size_t line_no) {
  if (tok.size() < 2) bad_line(line_no, "signal line needs a file name and a format");
  WfdbSignal s;
  s.filename = tok[0];
  const std::string& fmt = tok[1];
  if (fmt.find_first_of("x:+") != std::string::npos) {
    bad_line(line_no, "frame multipliers, skews and byte offsets are not supported ('" + fmt + "')");
  }
  const auto format = parse_number<int>(fmt);
  if (!format) bad_line(line_no, "format must be an integer");
  require(*format == 212 || *format == 16, ErrorCode::UnsupportedFormat,
          "WFDB format " + std::to_string(*format) + " (only 212 and 16 are supported)");
  s.format = *format;

  std::optional<double> baseline;
  if (tok.size() >= 3) {
    // gain[(baseline)][/units]
    std::string g = tok[2];
    if (auto slash = g.find('/'); slash != std::string::npos) {
      s.units = g.substr(slash + 1);
      g = g.substr(0, slash);
    }
    if (auto open = g.find('('); open != std::string::npos) {
      const auto close = g.find(')', open);
      if (close == std::string::npos || close != g.size() - 1) bad_line(line_no, "unbalanced baseline parentheses");
      const auto b = parse_number<long>(std::string_view(g).substr(open + 1, close - open - 1));
      if (!b) bad_line(line_no, "baseline must be an integer");
      baseline = static_cast<double>(*b);
      g = g.substr(0, open);
    }
    const auto gain = parse_number<double>(g);
    if (!gain) bad_line(line_no, "gain must be a number");
    if (*gain != 0.0) s.adc_gain = *gain;
  }
  if (tok.size() >= 4) {
    const auto res = parse_number<int>(tok[3]);
    if (!res) bad_line(line_no, "ADC resolution must be an integer");
    s.adc_resolution = *res;
  }
  if (tok.size() >= 5) {
    const auto zero = parse_number<int>(tok[4]);
    if (!zero) bad_line(line_no, "ADC zero must be an integer");
    s.adc_zero = *zero;
  }
  s.baseline = baseline.value_or(static_cast<double>(s.adc_zero));
  // Fields 6-8 (initial value, checksum, block size) are skipped; the rest is the description.
  for (std::size_t i = 8; i < tok.size(); ++i) {
    if (!s.description.empty()) s.description += ' ';
    s.description += tok[i];
  }
  return s;
}

}  // namespace

WfdbHeader parse_wfdb_header(std::string_view text) {
  WfdbHeader h;
  bool have_record = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tok = split_ws(line);
    if (!have_record) {
      parse_record_line(tok, line_no, h);
      have_record = true;
    } else if (h.signals.size() < h.n_signals) {
      h.signals.push_back(parse_signal_line(tok, line_no));
    } else {
      bad_line(line_no, "more signal lines than the record line declares");
    }
  }
  require(have_record, ErrorCode::MalformedHeaderLine, "header has no record line");
  require(h.signals.size() == h.n_signals, ErrorCode::MalformedHeaderLine,
          "record line declares " + std::to_string(h.n_signals) + " signals, found " +
              std::to_string(h.signals.size()));
  return h;
}

// ---------------------------------------------------------------------------
// WFDB samples

namespace {

std::int32_t signext12(std::uint32_t v) {
  v &= 0xFFF;
  return (v & 0x800) ? static_cast<std::int32_t>(v) - 0x1000 : static_cast<std::int32_t>(v);
}

}  // namespace

AdcSamples decode_wfdb_samples(std::span<const std::uint8_t> bytes, int format, std::size_t n_signals) {
  require(n_signals >= 1, ErrorCode::InvalidArgument, "need at least one signal");
  std::vector<std::int32_t> flat;
  if (format == 212) {
    require(bytes.size() % 3 != 1, ErrorCode::TruncatedData, "format 212 data ends inside a sample");
    flat.reserve(bytes.size() / 3 * 2 + 1);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
      const std::uint32_t b0 = bytes[i], b1 = bytes[i + 1], b2 = bytes[i + 2];
      flat.push_back(signext12(((b1 & 0x0F) << 8) | b0));
      flat.push_back(signext12(((b1 & 0xF0) << 4) | b2));
    }
    if (i + 2 == bytes.size()) flat.push_back(signext12(((bytes[i + 1] & 0x0Fu) << 8) | bytes[i]));
  } else if (format == 16) {
    require(bytes.size() % (2 * n_signals) == 0, ErrorCode::TruncatedData,
            "format 16 data is not a whole number of frames");
    flat.reserve(bytes.size() / 2);
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
      flat.push_back(static_cast<std::int16_t>(static_cast<std::uint16_t>(bytes[i] | (bytes[i + 1] << 8))));
    }
  } else {
    fail(ErrorCode::UnsupportedFormat, "WFDB format " + std::to_string(format));
  }
  require(flat.size() % n_signals == 0, ErrorCode::TruncatedData,
          std::to_string(flat.size()) + " samples do not split over " + std::to_string(n_signals) + " signals");

  AdcSamples out(n_signals);
  const std::size_t frames = flat.size() / n_signals;
  for (auto& s : out) s.reserve(frames);
  for (std::size_t i = 0; i < flat.size(); ++i) out[i % n_signals].push_back(flat[i]);
  return out;
}

std::vector<std::uint8_t> encode_wfdb_samples(const AdcSamples& signals, int format) {
  require(!signals.empty(), ErrorCode::InvalidArgument, "no signals to encode");
  const std::size_t frames = signals.front().size();
  for (const auto& s : signals) require(s.size() == frames, ErrorCode::InvalidArgument, "signals differ in length");
  std::vector<std::int32_t> flat;
  flat.reserve(frames * signals.size());
  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& s : signals) flat.push_back(s[f]);
  }

  std::vector<std::uint8_t> out;
  if (format == 212) {
    for (auto v : flat) {
      require(v >= -2048 && v <= 2047, ErrorCode::InvalidArgument, "value outside the 12-bit range");
    }
    for (std::size_t i = 0; i < flat.size(); i += 2) {
      const auto a = static_cast<std::uint32_t>(flat[i]) & 0xFFF;
      if (i + 1 == flat.size()) {
        out.push_back(static_cast<std::uint8_t>(a & 0xFF));
        out.push_back(static_cast<std::uint8_t>(a >> 8));
        break;
      }
      const auto b = static_cast<std::uint32_t>(flat[i + 1]) & 0xFFF;
      out.push_back(static_cast<std::uint8_t>(a & 0xFF));
      out.push_back(static_cast<std::uint8_t>(((a >> 8) & 0x0F) | ((b >> 4) & 0xF0)));
      out.push_back(static_cast<std::uint8_t>(b & 0xFF));
    }
  } else if (format == 16) {
    for (auto v : flat) {
      require(v >= -32768 && v <= 32767, ErrorCode::InvalidArgument, "value outside the 16-bit range");
      const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
      out.push_back(static_cast<std::uint8_t>(u & 0xFF));
      out.push_back(static_cast<std::uint8_t>(u >> 8));
    }
  } else {
    fail(ErrorCode::UnsupportedFormat, "WFDB format " + std::to_string(format));
  }
  return out;
}

Signal adc_to_physical(std::span<const std::int32_t> adc, double gain, double baseline) {
  require(gain != 0.0, ErrorCode::ZeroGain, "ADC gain is zero");
  Signal out(adc.size());
  for (std::size_t i = 0; i < adc.size(); ++i) out[i] = (static_cast<double>(adc[i]) - baseline) / gain;
  return out;
}

// ---------------------------------------------------------------------------
// Files

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), ErrorCode::IoError, "read failed for '" + path.string() + "'");
  return out;
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void write_text(const fs::path& path, std::string_view text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

Signal read_f32le(const fs::path& path) {
  const auto bytes = read_bytes(path);
  require(!bytes.empty() && bytes.size() % 4 == 0, ErrorCode::FormatMismatch,
          "'" + path.string() + "' is not a non-empty array of 32-bit floats");
  Signal out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) | (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    const float f = std::bit_cast<float>(u);
    require(std::isfinite(f), ErrorCode::FormatMismatch, "'" + path.string() + "' holds a non-finite sample");
    out[i] = f;
  }
  return out;
}

void write_f32le(const fs::path& path, std::span<const double> samples) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(samples.size() * 4);
  for (double v : samples) {
    const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
  }
  write_bytes(path, bytes);
}

Signal read_csv_signal(const fs::path& path) {
  const std::string text = read_text(path);
  Signal out;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    const auto v = parse_number<double>(std::string_view(line).substr(b, e - b + 1));
    require(v.has_value() && std::isfinite(*v), ErrorCode::FormatMismatch,
            "'" + path.string() + "' line " + std::to_string(line_no) + " is not a number");
    out.push_back(*v);
  }
  require(!out.empty(), ErrorCode::FormatMismatch, "'" + path.string() + "' holds no samples");
  return out;
}

namespace {

Recording load_wfdb(const RecordMeta& meta) {
  fs::path hea = meta.path;
  if (hea.extension() != ".hea") hea += ".hea";
  const WfdbHeader h = parse_wfdb_header(read_text(hea));

  Recording rec;
  rec.provenance = meta.provenance();
  rec.fs = h.fs;
  rec.channels.resize(h.n_signals);

  // Signals sharing a file are interleaved in it, in header order.
  std::vector<std::string> files;
  for (const auto& s : h.signals) {
    if (std::find(files.begin(), files.end(), s.filename) == files.end()) files.push_back(s.filename);
  }
  for (const auto& file : files) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < h.signals.size(); ++i) {
      if (h.signals[i].filename == file) members.push_back(i);
    }
    const int format = h.signals[members.front()].format;
    for (auto i : members) {
      require(h.signals[i].format == format, ErrorCode::FormatMismatch, "signals in '" + file + "' mix formats");
    }
    const auto bytes = read_bytes(hea.parent_path() / file);
    auto adc = decode_wfdb_samples(bytes, format, members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      auto& samples = adc[k];
      if (h.n_samples > 0) {
        require(samples.size() >= h.n_samples, ErrorCode::TruncatedData,
                "'" + file + "' holds " + std::to_string(samples.size()) + " samples per signal, header says " +
                    std::to_string(h.n_samples));
        samples.resize(h.n_samples);
      }
      const auto& sig = h.signals[members[k]];
      rec.channels[members[k]] = adc_to_physical(samples, sig.adc_gain, sig.baseline);
    }
  }
  return rec;
}

}  // namespace

Recording load_record(const RecordMeta& meta) {
  Recording rec;
  switch (meta.format) {
    case RecordFormat::wfdb:
      rec = load_wfdb(meta);
      break;
    case RecordFormat::f32le:
    case RecordFormat::csv:
      require(meta.fs.has_value() && *meta.fs > 0.0, ErrorCode::FormatMismatch, "raw record without a sampling rate");
      rec.provenance = meta.provenance();
      rec.fs = *meta.fs;
      rec.channels.push_back(meta.format == RecordFormat::f32le ? read_f32le(meta.path) : read_csv_signal(meta.path));
      break;
  }
  if (meta.channel) {
    require(*meta.channel < rec.channels.size(), ErrorCode::FormatMismatch,
            "channel " + std::to_string(*meta.channel) + " requested from a record with " +
                std::to_string(rec.channels.size()) + " channels");
    rec.channels = {std::move(rec.channels[*meta.channel])};
  }
  require(rec.length() > 0, ErrorCode::FormatMismatch, "'" + meta.path.string() + "' holds no samples");
  validate_recording(rec);
  return rec;
}

std::vector<Recording> load_dataset_serial(const DatasetIndex& index) {
  std::vector<Recording> out;
  out.reserve(index.records.size());
  for (const auto& m : index.records) out.push_back(load_record(m));
  return out;
}

std::vector<Recording> load_dataset(const DatasetIndex& index) {
  std::vector<Recording> out(index.records.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = load_record(index.records[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) return load_dataset_serial(index);
  return out;
}

}  // namespace ecgbench::ingest
