#include "ppc/scenario_io.hpp"

#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace ppc {

namespace {

struct Value {
  enum class Kind { number, boolean, string, array };
  Kind kind = Kind::number;
  double num = 0.0;
  bool flag = false;
  std::string str;
  std::vector<Value> items;
  int line = 0;
};

[[noreturn]] void fail(const std::string& label, int line, const std::string& msg) {
  std::ostringstream os;
  os << label << ":" << line << ": " << msg;
  throw ParseError(os.str());
}

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
};

Value parse_value(Cursor& c, const std::string& label, int line);

Value parse_array(Cursor& c, const std::string& label, int line) {
  Value v;
  v.kind = Value::Kind::array;
  v.line = line;
  ++c.pos;  // '['
  c.skip_spaces();
  if (!c.done() && c.peek() == ']') {
    ++c.pos;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(c, label, line));
    c.skip_spaces();
    if (c.done()) fail(label, line, "unterminated array");
    if (c.peek() == ',') {
      ++c.pos;
      c.skip_spaces();
      continue;
    }
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    fail(label, line, "expected ',' or ']' in array");
  }
}

Value parse_value(Cursor& c, const std::string& label, int line) {
  c.skip_spaces();
  if (c.done()) fail(label, line, "missing value");
  const char ch = c.peek();
  Value v;
  v.line = line;
  if (ch == '[') return parse_array(c, label, line);
  if (ch == '"') {
    v.kind = Value::Kind::string;
    ++c.pos;
    while (!c.done() && c.peek() != '"') v.str += c.text[c.pos++];
    if (c.done()) fail(label, line, "unterminated string");
    ++c.pos;
    return v;
  }
  std::size_t start = c.pos;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != ' ' &&
         c.peek() != '\t') {
    ++c.pos;
  }
  const std::string token = c.text.substr(start, c.pos - start);
  if (token == "true" || token == "false") {
    v.kind = Value::Kind::boolean;
    v.flag = token == "true";
    return v;
  }
  try {
    std::size_t used = 0;
    v.num = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
  } catch (const std::exception&) {
    fail(label, line, "cannot parse value '" + token + "'");
  }
  return v;
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Dotted table path; quoted segments pass through verbatim.
std::string parse_table_path(const std::string& inner, const std::string& label,
                             int line) {
  std::string path;
  std::size_t i = 0;
  while (i < inner.size()) {
    if (inner[i] == '"') {
      std::size_t close = inner.find('"', i + 1);
      if (close == std::string::npos) fail(label, line, "unterminated quoted key");
      path += inner.substr(i + 1, close - i - 1);
      i = close + 1;
    } else {
      while (i < inner.size() && inner[i] != '.') path += inner[i++];
    }
    if (i < inner.size()) {
      if (inner[i] != '.') fail(label, line, "malformed table header");
      path += '.';
      ++i;
    }
  }
  if (path.empty()) fail(label, line, "empty table header");
  return path;
}

struct Document {
  std::map<std::string, Value> entries;  // full dotted path -> value
  std::string label;
  mutable std::set<std::string> consumed;

  const Value* find(const std::string& path) const {
    auto it = entries.find(path);
    if (it == entries.end()) return nullptr;
    consumed.insert(path);
    return &it->second;
  }

  const Value& require(const std::string& path) const {
    const Value* v = find(path);
    if (!v) throw ParseError(label + ": missing required key '" + path + "'");
    return *v;
  }

  double number(const std::string& path) const {
    const Value& v = require(path);
    if (v.kind != Value::Kind::number) {
      fail(label, v.line, "key '" + path + "' must be a number");
    }
    return v.num;
  }

  long integer(const std::string& path) const {
    const double d = number(path);
    if (d != std::floor(d)) {
      fail(label, entries.at(path).line, "key '" + path + "' must be an integer");
    }
    return static_cast<long>(d);
  }

  void reject_unconsumed() const {
    for (const auto& [path, value] : entries) {
      if (!consumed.contains(path)) {
        fail(label, value.line, "unknown key '" + path + "'");
      }
    }
  }
};

Document parse_document(const std::string& text, const std::string& label) {
  Document doc;
  doc.label = label;
  std::istringstream in(text);
  std::string raw;
  std::string table;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(label, line_no, "malformed table header");
      table = parse_table_path(trim(line.substr(1, line.size() - 2)), label, line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(label, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(label, line_no, "empty key");
    const std::string value_text = trim(line.substr(eq + 1));
    Cursor c{value_text, 0};
    Value v = parse_value(c, label, line_no);
    c.skip_spaces();
    if (!c.done()) fail(label, line_no, "trailing characters after value");
    v.line = line_no;
    const std::string path = table.empty() ? key : table + "." + key;
    if (doc.entries.contains(path)) {
      fail(label, line_no, "duplicate key '" + path + "'");
    }
    doc.entries.emplace(path, std::move(v));
  }
  return doc;
}

Eigen::VectorXd number_vector(const Document& doc, const std::string& path) {
  const Value& v = doc.require(path);
  if (v.kind != Value::Kind::array) {
    fail(doc.label, v.line, "key '" + path + "' must be an array");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.items.size()));
  for (std::size_t i = 0; i < v.items.size(); ++i) {
    if (v.items[i].kind != Value::Kind::number) {
      fail(doc.label, v.line, "key '" + path + "' must contain numbers only");
    }
    out[static_cast<Eigen::Index>(i)] = v.items[i].num;
  }
  return out;
}

PerformanceFunction funnel_from(const Document& doc, const std::string& table) {
  try {
    return PerformanceFunction::make(doc.number(table + ".rho0"),
                                     doc.number(table + ".rho_inf"),
                                     doc.number(table + ".decay"));
  } catch (const StructuralError& e) {
    throw ParseError(doc.label + ": [" + table + "] " + e.what());
  }
}

FunnelSpec funnel_spec_from(const Document& doc, const std::string& table) {
  FunnelSpec spec;
  spec.base = funnel_from(doc, table);
  const std::string prefix = table + ".edges.";
  std::set<std::string> edge_keys;
  for (const auto& [path, value] : doc.entries) {
    if (path.starts_with(prefix)) {
      const std::size_t dot = path.find('.', prefix.size());
      if (dot == std::string::npos) {
        fail(doc.label, value.line, "malformed per-edge funnel key '" + path + "'");
      }
      edge_keys.insert(path.substr(prefix.size(), dot - prefix.size()));
    }
  }
  for (const auto& key : edge_keys) {
    int i = 0, j = 0;
    if (std::sscanf(key.c_str(), "%d-%d", &i, &j) != 2 || i <= 0 || j <= 0) {
      throw ParseError(doc.label + ": [" + table + ".edges] edge key '" + key +
                       "' must look like \"1-2\"");
    }
    if (i > j) std::swap(i, j);
    spec.overrides[{i, j}] = funnel_from(doc, prefix + key);
  }
  return spec;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& label) {
  const Document doc = parse_document(text, label);
  Scenario sc;

  sc.n_agents = static_cast<int>(doc.integer("agents.count"));
  sc.initial.t = 0.0;
  sc.initial.x = number_vector(doc, "agents.x0");
  sc.initial.v = number_vector(doc, "agents.v0");
  if (sc.initial.x.size() != sc.n_agents || sc.initial.v.size() != sc.n_agents) {
    throw ParseError(label + ": [agents] x0/v0 length must equal count");
  }

  sc.funnels_y = funnel_spec_from(doc, "funnels.position");
  sc.funnels_z = funnel_spec_from(doc, "funnels.velocity");

  try {
    sc.gains = GainSet::make(doc.number("gains.h1"), doc.number("gains.h2"),
                             doc.number("gains.h3"), doc.number("gains.h4"),
                             doc.number("gains.h5"), doc.number("gains.h6"),
                             doc.number("gains.phi"), doc.number("gains.a2"),
                             doc.number("gains.a3"), doc.number("gains.a4"));
  } catch (const ValidationError& e) {
    throw ParseError(label + ": [gains] " + e.what());
  }

  // Graph catalog.
  std::map<std::string, Graph> graphs;
  const std::string gprefix = "schedule.graphs.";
  for (const auto& [path, value] : doc.entries) {
    if (!path.starts_with(gprefix)) continue;
    const std::size_t dot = path.find('.', gprefix.size());
    if (dot == std::string::npos || path.substr(dot + 1) != "edges") continue;
    const std::string id = path.substr(gprefix.size(), dot - gprefix.size());
    const Value* v = doc.find(path);
    std::vector<Edge> edges;
    if (v->kind != Value::Kind::array) {
      fail(label, v->line, "graph '" + id + "' edges must be an array");
    }
    for (const auto& pair : v->items) {
      if (pair.kind != Value::Kind::array || pair.items.size() != 2 ||
          pair.items[0].kind != Value::Kind::number ||
          pair.items[1].kind != Value::Kind::number) {
        fail(label, v->line, "graph '" + id + "' edges must be [i, j] pairs");
      }
      edges.emplace_back(static_cast<int>(pair.items[0].num),
                         static_cast<int>(pair.items[1].num));
    }
    try {
      graphs.emplace(id, Graph::make(sc.n_agents, std::move(edges)));
    } catch (const StructuralError& e) {
      throw ParseError(label + ": [schedule.graphs." + id + "] " + e.what());
    }
  }

  const Value& segs = doc.require("schedule.segments");
  if (segs.kind != Value::Kind::array) {
    fail(label, segs.line, "schedule.segments must be an array");
  }
  std::vector<Segment> segments;
  for (const auto& item : segs.items) {
    if (item.kind != Value::Kind::array || item.items.size() != 2 ||
        item.items[0].kind != Value::Kind::string ||
        item.items[1].kind != Value::Kind::number) {
      fail(label, segs.line, "each segment must be [\"graph_id\", duration]");
    }
    segments.push_back({item.items[0].str, item.items[1].num});
  }
  const Value& cyc = doc.require("schedule.cyclic");
  if (cyc.kind != Value::Kind::boolean) {
    fail(label, cyc.line, "schedule.cyclic must be a boolean");
  }
  try {
    sc.schedule = SwitchingSchedule::make(
        std::move(segments), std::move(graphs), cyc.flag,
        doc.number("schedule.dwell_min"), doc.number("schedule.window_max"));
  } catch (const StructuralError& e) {
    throw ParseError(label + ": [schedule] " + e.what());
  }

  sc.t_end = doc.number("integration.t_end");
  sc.dt = doc.number("integration.dt");
  sc.monitor.sample_stride = static_cast<int>(doc.integer("integration.sample_stride"));
  if (doc.find("integration.guard")) {
    sc.monitor.guard = doc.number("integration.guard");
  }

  if (const Value* csv = doc.find("output.csv")) {
    if (csv->kind != Value::Kind::string) {
      fail(label, csv->line, "output.csv must be a string");
    }
    sc.csv_path = csv->str;
  }

  doc.reject_unconsumed();

  try {
    sc.validate();
    // Assumption-3 pre-check for the first active graph.
    check_feasibility(sc, sc.initial,
                      sc.schedule.graph(sc.schedule.segments[0].graph_id));
  } catch (const StructuralError& e) {
    throw ParseError(label + ": " + e.what());
  }
  // An InfeasibleActivation from the pre-check propagates as-is: the file is
  // well-formed, the start state is not.
  return sc;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

}  // namespace ppc
