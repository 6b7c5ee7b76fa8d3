#include "coda/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "coda/csv.hpp"
#include "coda/errors.hpp"

namespace coda {

namespace fs = std::filesystem;

std::string_view command_name(Command command) noexcept {
  switch (command) {
    case Command::simulate:
      return "simulate";
    case Command::sweep:
      return "sweep";
    case Command::gallery:
      return "gallery";
    case Command::clusters:
      return "clusters";
    case Command::classify:
      return "classify";
  }
  return "simulate";
}

void RunConfig::set_seed(std::uint64_t value) noexcept {
  seed = value;
  graph.seed = value;
  initial.seed = value;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Keys of one section, consumed as they are read so leftovers can be reported.
class Section {
 public:
  Section() = default;
  explicit Section(std::string name) : name_(std::move(name)) {}

  void add(std::string key, std::string value, std::size_t line) {
    if (values_.count(key)) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'" + where());
    }
    values_.emplace(std::move(key), std::move(value));
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'" + where());
    std::string v = std::move(it->second);
    values_.erase(it);
    return v;
  }

  double take_double(const std::string& key) {
    const std::string v = take(key);
    try {
      return csv::parse_double(v);
    } catch (const ConfigError&) {
      throw ConfigError("key '" + key + "'" + where() + " expects a number, got '" + v + "'");
    }
  }

  std::uint64_t take_uint(const std::string& key) {
    const std::string v = take(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ConfigError("key '" + key + "'" + where() + " expects a nonnegative integer, got '" +
                        v + "'");
    }
    return out;
  }

  bool take_bool(const std::string& key) {
    const std::string v = take(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "'" + where() + " expects true or false, got '" + v + "'");
  }

  void finish() const {
    if (!values_.empty()) {
      throw ConfigError("unknown or inapplicable key '" + values_.begin()->first + "'" + where());
    }
  }

 private:
  std::string where() const { return name_.empty() ? "" : " in [" + name_ + "]"; }

  std::string name_;
  std::map<std::string, std::string> values_;
};

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    try {
      out.push_back(csv::parse_double(item));
    } catch (const ConfigError&) {
      throw ConfigError("key '" + key + "' has a non-numeric entry '" + std::string(item) + "'");
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text, "grid");
  std::vector<double> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(csv::parse_double(trim(rest.substr(0, colon))));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 3) throw ConfigError("grid range must read start:stop:step");
  return arithmetic_grid(parts[0], parts[1], parts[2]);
}

fs::path resolve(const std::string& raw, const fs::path& base_dir) {
  fs::path p(raw);
  if (p.is_relative()) p = base_dir.empty() ? fs::absolute(p) : fs::absolute(base_dir / p);
  p = p.lexically_normal();
  if (!p.has_filename() && p.has_relative_path()) p = p.parent_path();  // "dir/." -> "dir"
  return p;
}

fs::path resolve_existing(const std::string& raw, const fs::path& base_dir, const char* what) {
  fs::path p = resolve(raw, base_dir);
  if (!fs::is_regular_file(p)) {
    throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
  }
  return p;
}

Command parse_command(const std::string& v) {
  for (Command c : {Command::simulate, Command::sweep, Command::gallery, Command::clusters,
                    Command::classify}) {
    if (v == command_name(c)) return c;
  }
  throw ConfigError("unknown command '" + v + "'");
}

bool uses_model(Command c) { return c != Command::classify; }
bool uses_run_length(Command c) { return c == Command::simulate || c == Command::clusters; }
bool uses_sweep(Command c) { return c == Command::sweep || c == Command::gallery; }

std::string_view graph_kind_name(GraphSpec::Kind kind) {
  switch (kind) {
    case GraphSpec::Kind::complete:
      return "complete";
    case GraphSpec::Kind::lattice:
      return "lattice";
    case GraphSpec::Kind::random:
      return "random";
    case GraphSpec::Kind::edge_list:
      return "file";
  }
  return "complete";
}

std::string_view initial_kind_name(InitialSpec::Kind kind) {
  switch (kind) {
    case InitialSpec::Kind::fs:
      return "fs";
    case InitialSpec::Kind::random:
      return "random";
    case InitialSpec::Kind::explicit_values:
      return "file";
  }
  return "fs";
}

std::size_t known_agent_count(const GraphSpec& g) {
  switch (g.kind) {
    case GraphSpec::Kind::complete:
    case GraphSpec::Kind::random:
      return g.size;
    case GraphSpec::Kind::lattice:
      return g.size * g.size;
    case GraphSpec::Kind::edge_list:
      return 0;
  }
  return 0;
}

void read_classify_options(Section& s, ClassifyOptions& options) {
  if (s.has("tol")) options.tol = s.take_double("tol");
  if (s.has("max_period")) options.max_period = s.take_uint("max_period");
}

}  // namespace

std::vector<double> read_opinion_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open opinion file '" + path.string() + "'");
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    out.push_back(csv::parse_double(body));
  }
  return out;
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  Section top;
  std::map<std::string, Section> sections;
  Section* current = &top;

  static const std::set<std::string> known_sections = {
      "graph", "params", "initial", "simulate", "clusters", "sweep", "gallery", "classify"};

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!known_sections.count(name)) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + name + "]");
      }
      if (sections.count(name)) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + name + "]");
      }
      current = &sections.emplace(name, Section(name)).first->second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    current->add(std::string(key), std::string(trim(line.substr(eq + 1))), line_no);
  }

  RunConfig c;
  c.command = parse_command(top.take("command"));
  c.set_seed(top.has("seed") ? top.take_uint("seed") : 0);
  c.output_dir = resolve(top.has("output") ? top.take("output") : ".", base_dir);
  top.finish();

  auto take_section = [&](const std::string& name) -> Section {
    auto it = sections.find(name);
    if (it == sections.end()) {
      throw ConfigError("command '" + std::string(command_name(c.command)) + "' needs a [" + name +
                        "] section");
    }
    Section s = std::move(it->second);
    sections.erase(it);
    return s;
  };

  if (uses_model(c.command)) {
    Section g = take_section("graph");
    const std::string kind = g.take("kind");
    if (kind == "complete") {
      c.graph.kind = GraphSpec::Kind::complete;
      c.graph.size = g.take_uint("n");
    } else if (kind == "lattice") {
      c.graph.kind = GraphSpec::Kind::lattice;
      c.graph.size = g.take_uint("side");
    } else if (kind == "random") {
      c.graph.kind = GraphSpec::Kind::random;
      c.graph.size = g.take_uint("n");
      c.graph.edge_prob = g.take_double("edge_prob");
    } else if (kind == "file") {
      c.graph.kind = GraphSpec::Kind::edge_list;
      c.graph.path = resolve_existing(g.take("path"), base_dir, "edge list");
    } else {
      throw ConfigError("unknown graph kind '" + kind + "' (complete|lattice|random|file)");
    }
    g.finish();

    Section p = take_section("params");
    c.params.beta = p.take_double("beta");
    c.params.gamma = p.take_double("gamma");
    c.params.e_min = p.take_double("e_min");
    c.params.e_max = p.take_double("e_max");
    c.params.p_bar = p.take_double("p_bar");
    p.finish();

    Section init = take_section("initial");
    const std::string ikind = init.take("kind");
    if (ikind == "fs") {
      c.initial.kind = InitialSpec::Kind::fs;
      c.initial.theta0 = init.take_double("theta0");
    } else if (ikind == "random") {
      c.initial.kind = InitialSpec::Kind::random;
    } else if (ikind == "file") {
      c.initial.kind = InitialSpec::Kind::explicit_values;
      c.initial_path = resolve_existing(init.take("path"), base_dir, "opinion file");
      c.initial.opinions = read_opinion_file(c.initial_path);
    } else {
      throw ConfigError("unknown initial kind '" + ikind + "' (fs|random|file)");
    }
    c.initial.p0 = init.take_double("p0");
    if (init.has("allow_extreme")) c.initial.allow_extreme = init.take_bool("allow_extreme");
    init.finish();
  }

  const std::string own(command_name(c.command));
  if (uses_run_length(c.command)) {
    Section s = take_section(own);
    c.steps = s.take_uint("steps");
    if (s.has("stride")) c.stride = s.take_uint("stride");
    s.finish();
  } else if (c.command == Command::sweep) {
    Section s = take_section(own);
    if (s.has("param")) {
      const std::string name = s.take("param");
      if (name == "beta") {
        c.swept = SweptParam::beta;
      } else if (name == "gamma") {
        c.swept = SweptParam::gamma;
      } else if (name == "p_bar") {
        c.swept = SweptParam::p_bar;
      } else {
        throw ConfigError("unknown sweep param '" + name + "' (beta|gamma|p_bar)");
      }
    }
    c.grid = parse_grid(s.take("grid"));
    if (s.has("transient")) c.transient = s.take_uint("transient");
    if (s.has("tail")) c.tail = s.take_uint("tail");
    read_classify_options(s, c.classify);
    s.finish();
  } else if (c.command == Command::gallery) {
    Section s = take_section(own);
    c.grid = parse_list(s.take("betas"), "betas");
    if (s.has("transient")) c.transient = s.take_uint("transient");
    if (s.has("tail")) c.tail = s.take_uint("tail");
    read_classify_options(s, c.classify);
    s.finish();
  } else {
    Section s = take_section(own);
    c.input = resolve_existing(s.take("input"), base_dir, "trajectory input");
    if (s.has("skip")) c.skip = s.take_uint("skip");
    read_classify_options(s, c.classify);
    s.finish();
  }

  if (!sections.empty()) {
    throw ConfigError("section [" + sections.begin()->first + "] does not apply to command '" +
                      own + "'");
  }

  validate_config(c);
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), fs::absolute(path).parent_path());
}

void validate_config(const RunConfig& c) {
  if (c.classify.max_period < 1) throw ConfigError("max_period must be at least 1");
  if (!(c.classify.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.command == Command::classify) return;

  try {
    c.params.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[params] ") + e.what());
  }

  switch (c.graph.kind) {
    case GraphSpec::Kind::complete:
    case GraphSpec::Kind::random:
      if (c.graph.size < 2) throw ConfigError("[graph] n must be at least 2");
      break;
    case GraphSpec::Kind::lattice:
      if (c.graph.size < 2) throw ConfigError("[graph] side must be at least 2");
      break;
    case GraphSpec::Kind::edge_list:
      break;
  }
  if (c.graph.kind == GraphSpec::Kind::random &&
      !(c.graph.edge_prob > 0.0 && c.graph.edge_prob <= 1.0)) {
    throw ConfigError("[graph] edge_prob must lie in (0,1]");
  }

  if (c.initial.kind == InitialSpec::Kind::fs) {
    const double t = c.initial.theta0;
    const bool interior = t > -1.0 && t < 1.0 && t != 0.0;
    const bool extreme = (t == -1.0 || t == 1.0) && c.initial.allow_extreme;
    if (!interior && !extreme) throw ConfigError("[initial] theta0 must lie in (-1,1) and be nonzero");
  }
  if (!std::isfinite(c.initial.p0)) throw ConfigError("[initial] p0 must be finite");
  if (c.command != Command::sweep || c.swept != SweptParam::p_bar) {
    if (c.initial.p0 == c.params.p_bar) throw ConfigError("[initial] p0 must differ from p_bar");
  }
  if (c.initial.kind == InitialSpec::Kind::explicit_values) {
    const std::size_t n = known_agent_count(c.graph);
    if (n != 0 && c.initial.opinions.size() != n) {
      throw ConfigError("[initial] opinion file has " + std::to_string(c.initial.opinions.size()) +
                        " values for " + std::to_string(n) + " agents");
    }
  }

  if (uses_run_length(c.command)) {
    if (c.stride == 0) throw ConfigError("stride must be positive");
    if (c.steps % c.stride != 0) throw ConfigError("steps must be a multiple of stride");
  }
  if (uses_sweep(c.command)) {
    if (c.command == Command::gallery && c.grid.empty()) {
      throw ConfigError("[gallery] betas must list at least one value");
    }
    make_sweep_spec(c).validate();
  }
}

SweepSpec make_sweep_spec(const RunConfig& c) {
  SweepSpec spec;
  spec.base_params = c.params;
  spec.swept = c.command == Command::gallery ? SweptParam::beta : c.swept;
  spec.grid = c.grid;
  if (c.command == Command::gallery) std::sort(spec.grid.begin(), spec.grid.end());
  spec.initial = c.initial;
  spec.graph = c.graph;
  spec.transient = c.transient;
  spec.tail = c.tail;
  spec.classify = c.classify;
  return spec;
}

std::string render_config(const RunConfig& c) {
  std::string out;
  auto kv = [&](std::string_view key, std::string_view value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  auto kv_double = [&](std::string_view key, double value) { kv(key, csv::format_double(value)); };
  auto kv_uint = [&](std::string_view key, std::uint64_t value) { kv(key, std::to_string(value)); };
  auto list = [](const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ',';
      s += csv::format_double(values[i]);
    }
    return s;
  };
  auto classify_keys = [&] {
    kv_double("tol", c.classify.tol);
    kv_uint("max_period", c.classify.max_period);
  };

  out += "# coda run manifest\n";
  kv("command", command_name(c.command));
  kv_uint("seed", c.seed);
  kv("output", c.output_dir.string());

  if (uses_model(c.command)) {
    out += "\n[graph]\n";
    kv("kind", graph_kind_name(c.graph.kind));
    switch (c.graph.kind) {
      case GraphSpec::Kind::complete:
        kv_uint("n", c.graph.size);
        break;
      case GraphSpec::Kind::lattice:
        kv_uint("side", c.graph.size);
        break;
      case GraphSpec::Kind::random:
        kv_uint("n", c.graph.size);
        kv_double("edge_prob", c.graph.edge_prob);
        break;
      case GraphSpec::Kind::edge_list:
        kv("path", c.graph.path.string());
        break;
    }

    out += "\n[params]\n";
    kv_double("beta", c.params.beta);
    kv_double("gamma", c.params.gamma);
    kv_double("e_min", c.params.e_min);
    kv_double("e_max", c.params.e_max);
    kv_double("p_bar", c.params.p_bar);

    out += "\n[initial]\n";
    kv("kind", initial_kind_name(c.initial.kind));
    if (c.initial.kind == InitialSpec::Kind::fs) kv_double("theta0", c.initial.theta0);
    if (c.initial.kind == InitialSpec::Kind::explicit_values) kv("path", c.initial_path.string());
    kv_double("p0", c.initial.p0);
    kv("allow_extreme", c.initial.allow_extreme ? "true" : "false");
  }

  out += "\n[";
  out += command_name(c.command);
  out += "]\n";
  switch (c.command) {
    case Command::simulate:
    case Command::clusters:
      kv_uint("steps", c.steps);
      kv_uint("stride", c.stride);
      break;
    case Command::sweep:
      kv("param", param_name(c.swept));
      kv("grid", list(c.grid));
      kv_uint("transient", c.transient);
      kv_uint("tail", c.tail);
      classify_keys();
      break;
    case Command::gallery:
      kv("betas", list(c.grid));
      kv_uint("transient", c.transient);
      kv_uint("tail", c.tail);
      classify_keys();
      break;
    case Command::classify:
      kv("input", c.input.string());
      kv_uint("skip", c.skip);
      classify_keys();
      break;
  }
  return out;
}

}  // namespace coda
