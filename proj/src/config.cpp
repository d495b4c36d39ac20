#include "classd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "classd/error.hpp"

namespace classd {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> words;
  std::string rest;  // text after the first word, trimmed
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Line line{number, {}, {}};
    std::istringstream words(raw);
    for (std::string w; words >> w;) line.words.push_back(w);
    if (line.words.empty()) continue;
    const auto first = raw.find(line.words.front());
    line.rest = trim(std::string_view(raw).substr(first + line.words.front().size()));
    lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
  throw ParseError("line " + std::to_string(line.number) + ": " + what);
}

std::uint64_t parse_count(const Line& line, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::pair<std::string, std::string> split_pair(const Line& line, const std::string& word) {
  const auto eq = word.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == word.size()) {
    fail(line, "expected key=value, got '" + word + "'");
  }
  return {word.substr(0, eq), word.substr(eq + 1)};
}

std::int64_t fixed_at(const Line& line, std::string_view text, int decimals) {
  try {
    return parse_fixed(text, decimals);
  } catch (const ParseError& e) {
    fail(line, e.what());
  }
}

}  // namespace

std::int64_t parse_fixed(std::string_view text, int decimals) {
  const std::string s(text);
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::int64_t whole = 0, frac = 0;
  int frac_digits = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.' && !dot) {
      dot = true;
    } else if (c >= '0' && c <= '9') {
      digits = true;
      if (dot) {
        if (++frac_digits > decimals) {
          throw ParseError("'" + s + "' has more than " + std::to_string(decimals) +
                           " decimal places");
        }
        frac = frac * 10 + (c - '0');
      } else {
        if (whole > (INT64_MAX / 10) / 1'000'000'000) throw ParseError("'" + s + "' too large");
        whole = whole * 10 + (c - '0');
      }
    } else {
      throw ParseError("'" + s + "' is not a decimal number");
    }
  }
  if (!digits) throw ParseError("'" + s + "' is not a decimal number");
  for (int d = frac_digits; d < decimals; ++d) frac *= 10;
  std::int64_t scale = 1;
  for (int d = 0; d < decimals; ++d) scale *= 10;
  const std::int64_t v = whole * scale + frac;
  return neg ? -v : v;
}

std::vector<ProcessingElement> parse_pe_library(std::string_view text) {
  std::vector<ProcessingElement> lib;
  std::optional<ProcessingElement> cur;
  std::size_t start = 0;

  for (const Line& line : tokenize(text)) {
    const std::string& key = line.words[0];
    if (key == "pe") {
      if (cur) fail(line, "'pe' inside an unterminated block");
      if (line.words.size() != 2) fail(line, "expected 'pe <name>'");
      cur.emplace();
      cur->name = line.words[1];
      start = line.number;
      continue;
    }
    if (!cur) fail(line, "'" + key + "' outside a pe block");

    if (key == "end") {
      if (cur->freq_hz == 0) fail(line, "PE " + cur->name + " has no freq_mhz");
      for (const auto& other : lib) {
        if (other.name == cur->name) fail(line, "duplicate PE " + cur->name);
      }
      try {
        cur->validate();
      } catch (const Error& e) {
        fail(line, e.what());
      }
      lib.push_back(std::move(*cur));
      cur.reset();
    } else if (key == "description") {
      cur->description = line.rest;
    } else if (key == "category") {
      const auto c = parse_pe_category(line.rest);
      if (!c) fail(line, "unknown category '" + line.rest + "'");
      cur->category = *c;
    } else if (key == "cost") {
      if (line.words.size() != 2) fail(line, "expected 'cost <US$>'");
      cur->cost_cents = fixed_at(line, line.words[1], 2);
    } else if (key == "freq_mhz") {
      if (line.words.size() != 2) fail(line, "expected 'freq_mhz <MHz>'");
      const std::int64_t hz = fixed_at(line, line.words[1], 6);
      if (hz <= 0) fail(line, "frequency must be positive");
      cur->freq_hz = static_cast<std::uint64_t>(hz);
    } else if (key == "weights") {
      for (std::size_t i = 1; i < line.words.size(); ++i) {
        const auto [k, v] = split_pair(line, line.words[i]);
        const std::uint64_t w = parse_count(line, v);
        if (w < 1 || w > UINT32_MAX) fail(line, "weight must be in [1, 2^32)");
        if (k == "all") {
          for (auto& slot : cur->weights) slot = static_cast<std::uint32_t>(w);
          continue;
        }
        const auto kind = parse_op_kind(k);
        if (!kind) fail(line, "unknown operation kind '" + k + "'");
        cur->weights[index(*kind)] = static_cast<std::uint32_t>(w);
      }
    } else if (key == "code_size") {
      for (std::size_t i = 1; i < line.words.size(); ++i) {
        const auto [k, v] = split_pair(line, line.words[i]);
        try {
          cur->code_size[index(parse_behavior(k))] = parse_count(line, v);
        } catch (const UnknownBehavior& e) {
          fail(line, e.what());
        }
      }
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (cur) throw ParseError("PE block starting at line " + std::to_string(start) + " lacks 'end'");
  return lib;
}

std::vector<ProcessingElement> load_pe_library(const std::filesystem::path& path) {
  return parse_pe_library(read_text(path));
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::vector<dse::BehaviorEstimate> rows;
  std::vector<std::optional<std::uint64_t>> sizes;
  std::size_t with_cost = 0;

  for (const Line& line : tokenize(text)) {
    const std::string& key = line.words[0];
    auto single = [&]() -> const std::string& {
      if (line.words.size() != 2) fail(line, "expected '" + key + " <value>'");
      return line.words[1];
    };
    if (key == "deadline_ms") {
      sc.cost_model.deadline = fixed_at(line, single(), 3);
      if (sc.cost_model.deadline <= 0) fail(line, "deadline must be positive");
    } else if (key == "sw_fixed_cost") {
      sc.cost_model.sw_fixed_cost = fixed_at(line, single(), 2);
    } else if (key == "hw_total_cost") {
      sc.cost_model.hw_total_cost = fixed_at(line, single(), 2);
    } else if (key == "behavior") {
      if (line.words.size() < 2) fail(line, "expected 'behavior <name> key=value...'");
      dse::BehaviorEstimate row;
      row.name = line.words[1];
      bool has_hw = false, has_sw = false, has_cost = false;
      std::optional<std::uint64_t> size;
      for (std::size_t i = 2; i < line.words.size(); ++i) {
        const auto [k, v] = split_pair(line, line.words[i]);
        if (k == "t_hw") {
          row.t_hw = fixed_at(line, v, 3);
          has_hw = true;
        } else if (k == "t_sw") {
          row.t_sw = fixed_at(line, v, 3);
          has_sw = true;
        } else if (k == "hw_cost") {
          row.hw_cost_share = fixed_at(line, v, 2);
          has_cost = true;
        } else if (k == "code_size") {
          size = parse_count(line, v);
        } else {
          fail(line, "unknown behavior field '" + k + "'");
        }
      }
      if (!has_hw || !has_sw) fail(line, "behavior " + row.name + " needs t_hw and t_sw");
      with_cost += has_cost ? 1 : 0;
      rows.push_back(std::move(row));
      sizes.push_back(size);
    } else if (key == "cycles") {
      if (line.words.size() != 3) fail(line, "expected 'cycles <pe> <count>'");
      sc.cycles.emplace_back(line.words[1], parse_count(line, line.words[2]));
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (with_cost == 0 && !rows.empty()) {
    std::vector<std::uint64_t> plain;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!sizes[i]) {
        throw ParseError("behavior " + rows[i].name + " has neither hw_cost nor code_size");
      }
      plain.push_back(*sizes[i]);
    }
    const auto shares = dse::hw_cost_share(plain, sc.cost_model.hw_total_cost);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].hw_cost_share = shares[i];
  } else if (with_cost != rows.size()) {
    throw ParseError("either every behavior row gives hw_cost or none does");
  }
  try {
    sc.table = dse::EstimateTable(std::move(rows));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text(path));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace classd
