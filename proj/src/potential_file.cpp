#include "hessgeo/potential_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hessgeo/parser.hpp"

namespace hessgeo {

namespace {

struct Field {
  std::string value;
  int line = 0;
  int column = 0;  // of the first value character
};

std::string_view trim(std::string_view s, int* skipped = nullptr) {
  std::size_t a = 0;
  while (a < s.size() && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  std::size_t b = s.size();
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  if (skipped) *skipped = static_cast<int>(a);
  return s.substr(a, b - a);
}

// Splits on commas and whitespace, remembering each token's column.
std::vector<std::pair<std::string_view, int>> tokens(const Field& f) {
  std::vector<std::pair<std::string_view, int>> out;
  const std::string_view s = f.value;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ',' || s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ',' && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start), f.column + static_cast<int>(start));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(int line, int column, const std::string& message) const {
    throw FileError(origin_, line, column, message);
  }

  double number(std::string_view token, int line, int column) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(line, column, "expected a number, found '" + std::string(token) + "'");
    }
    return v;
  }

  long long integer(const Field& f, long long lo) const {
    const std::string_view s = f.value;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < lo) {
      fail(f.line, f.column, "expected an integer >= " + std::to_string(lo) + ", found '" + f.value + "'");
    }
    return v;
  }

  Expression expression(const Field& f, std::span<const std::string> vars) const {
    try {
      return parse(f.value, vars);
    } catch (const ParseError& e) {
      fail(f.line, f.column + static_cast<int>(e.offset()), e.detail());
    }
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

}  // namespace

PotentialFile parse_potential_file(std::string_view text, std::string origin) {
  const Reader reader(origin);
  std::optional<Field> name, dimension, variables, potential, count, seed, box;
  std::vector<Field> domain, points;

  int line_no = 0;
  std::size_t pos = 0;
  for (bool more = true; more;) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    more = end < text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    int lead = 0;
    if (trim(line, &lead).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) reader.fail(line_no, lead + 1, "expected 'key: value'");
    const std::string key(trim(line.substr(0, colon)));
    int skipped = 0;
    const std::string_view value = trim(line.substr(colon + 1), &skipped);
    Field f{std::string(value), line_no, static_cast<int>(colon) + 2 + skipped};
    if (value.empty()) reader.fail(line_no, f.column, "missing value for '" + key + "'");

    auto once = [&](std::optional<Field>& slot) {
      if (slot) reader.fail(line_no, lead + 1, "duplicate key '" + key + "'");
      slot = f;
    };
    if (key == "name") {
      once(name);
    } else if (key == "dimension") {
      once(dimension);
    } else if (key == "variables") {
      once(variables);
    } else if (key == "potential") {
      once(potential);
    } else if (key == "domain") {
      domain.push_back(f);
    } else if (key == "point") {
      points.push_back(f);
    } else if (key == "box") {
      once(box);
    } else if (key == "count") {
      once(count);
    } else if (key == "seed") {
      once(seed);
    } else {
      reader.fail(line_no, lead + 1, "unknown key '" + key + "'");
    }
  }

  // end-of-file errors point at the last line; a final newline does not open another one
  const int last = (!text.empty() && text.back() == '\n') ? std::max(1, line_no - 1) : std::max(1, line_no);
  if (!variables) reader.fail(last, 1, "missing 'variables'");
  if (!potential) reader.fail(last, 1, "missing 'potential'");

  PotentialFile file;
  file.origin = origin;
  file.name = name ? name->value : std::string("unnamed");
  for (const auto& [tok, col] : tokens(*variables)) file.variables.emplace_back(tok);
  if (file.variables.empty()) reader.fail(variables->line, variables->column, "no variables listed");
  if (dimension) {
    const auto n = reader.integer(*dimension, 1);
    if (n != static_cast<long long>(file.variables.size())) {
      reader.fail(dimension->line, dimension->column,
                  "dimension " + std::to_string(n) + " does not match " + std::to_string(file.variables.size()) +
                      " variables");
    }
  }
  const int n = static_cast<int>(file.variables.size());

  const Expression f = reader.expression(*potential, file.variables);
  std::vector<Expression> dom;
  for (const auto& d : domain) {
    dom.push_back(reader.expression(d, file.variables));
    file.domain.push_back(d.value);
  }
  file.potential = potential->value;
  try {
    PotentialChart check(file.name, file.variables, f, dom);
  } catch (const Error& e) {
    reader.fail(variables->line, variables->column, e.what());
  }
  const PotentialChart chart = file.chart();

  for (const auto& pf : points) {
    const auto toks = tokens(pf);
    if (static_cast<int>(toks.size()) != n) {
      reader.fail(pf.line, pf.column, "point needs " + std::to_string(n) + " coordinates");
    }
    Point p(n);
    for (int i = 0; i < n; ++i) {
      const auto& [tok, col] = toks[static_cast<std::size_t>(i)];
      p(i) = reader.number(tok, pf.line, col);
    }
    if (!chart.admissible(p)) reader.fail(pf.line, pf.column, "point is outside the domain");
    file.points.push_back(p);
  }

  if (box) {
    const auto toks = tokens(*box);
    if (static_cast<int>(toks.size()) != 2 * n) {
      reader.fail(box->line, box->column, "box needs lo hi for each of " + std::to_string(n) + " coordinates");
    }
    Box b;
    for (int i = 0; i < n; ++i) {
      const auto& [lo_tok, lo_col] = toks[static_cast<std::size_t>(2 * i)];
      const auto& [hi_tok, hi_col] = toks[static_cast<std::size_t>(2 * i + 1)];
      b.lower.push_back(reader.number(lo_tok, box->line, lo_col));
      b.upper.push_back(reader.number(hi_tok, box->line, hi_col));
      if (!(b.lower.back() < b.upper.back())) reader.fail(box->line, lo_col, "box needs lo < hi");
    }
    file.box = std::move(b);
  }
  if (count) file.count = static_cast<int>(reader.integer(*count, 1));
  if (seed) file.seed = static_cast<std::uint64_t>(reader.integer(*seed, 0));
  if (file.points.empty() && !file.box) reader.fail(last, 1, "give explicit 'point' lines or a 'box'");
  return file;
}

PotentialFile load_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError(path, 0, 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_potential_file(buf.str(), path);
}

PotentialChart PotentialFile::chart() const {
  return PotentialChart::from_source(name, variables, potential, domain);
}

std::vector<Point> PotentialFile::samples(std::optional<int> count_override,
                                          std::optional<std::uint64_t> seed_override) const {
  if (!points.empty() && !count_override) return points;
  if (!box) {
    if (!points.empty()) return points;
    throw Error(origin + ": no sampling box");
  }
  std::mt19937_64 rng(seed_override.value_or(seed));
  return sample_admissible(chart(), *box, count_override.value_or(count), rng);
}

}  // namespace hessgeo
