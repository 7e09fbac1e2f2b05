#include "odsim/cli/scenario_file.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "odsim/error.hpp"
#include "odsim/text.hpp"

namespace odsim::cli {

namespace {

std::vector<std::string_view> preset_args(std::string_view term, std::string_view& name) {
  const auto open = term.find('(');
  if (open == std::string_view::npos) {
    name = text::trim(term);
    return {};
  }
  if (term.back() != ')') throw ConfigError("malformed preset '" + std::string(term) + "'");
  name = text::trim(term.substr(0, open));
  std::vector<std::string_view> args;
  for (auto a : text::split_fields(term.substr(open + 1, term.size() - open - 2), ',')) args.push_back(text::trim(a));
  if (args.size() == 1 && args[0].empty()) args.clear();
  return args;
}

void expect_args(std::string_view name, const std::vector<std::string_view>& args, std::size_t n) {
  if (args.size() != n) {
    throw ConfigError("preset " + std::string(name) + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
  }
}

std::string resolve(const std::filesystem::path& base, std::string_view value) {
  if (base.empty() || value.empty()) return std::string(value);
  const std::filesystem::path p{std::string(value)};
  return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

void set_with_paths(Scenario& s, std::string_view key, std::string_view value, const std::filesystem::path& base) {
  if (key == "preset") {
    apply_preset(s, value);
  } else if ((key == "trace" || key == "loss_file") || (key == "map" && value != "reference")) {
    apply_setting(s, key, resolve(base, text::trim(value)));
  } else {
    apply_setting(s, key, value);
  }
}

struct Line {
  std::size_t number;
  std::string_view key;
  std::string_view value;
};

/// Splits a `key = value` document; the first entry must be the schema line.
std::vector<Line> read_lines(std::istream& in, const std::string& source, std::string_view schema,
                             std::vector<std::string>& storage) {
  std::string raw;
  while (std::getline(in, raw)) storage.push_back(raw);
  std::vector<Line> out;
  bool have_schema = false;
  for (std::size_t i = 0; i < storage.size(); ++i) {
    std::string_view body = storage[i];
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = text::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, i + 1, "expected 'key = value'");
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    if (!have_schema) {
      if (key != "schema" || value != schema) {
        throw ParseError(source, i + 1, "first line must be 'schema = " + std::string(schema) + "'");
      }
      have_schema = true;
      continue;
    }
    if (key == "schema") throw ParseError(source, i + 1, "schema given twice");
    out.push_back({i + 1, key, value});
  }
  if (!have_schema) throw ParseError(source, storage.size(), "missing 'schema = " + std::string(schema) + "' line");
  return out;
}

}  // namespace

void apply_preset(Scenario& s, std::string_view expr) {
  const auto terms = text::split(expr, "+");
  if (terms.empty()) throw ConfigError("empty preset");
  for (auto raw : terms) {
    const auto term = text::trim(raw);
    std::string_view name;
    const auto args = preset_args(term, name);
    if (name == "reference") {
      expect_args(name, args, 0);
      s = Scenario{};
    } else if (name == "delayed") {
      expect_args(name, args, 1);
      apply_setting(s, "P.period", args[0]);
    } else if (name == "floor" || name == "walk") {
      expect_args(name, args, 1);
      apply_setting(s, "P.context", std::string(name) + "(" + std::string(args[0]) + ")");
    } else if (name == "elevators") {
      expect_args(name, args, 2);
      apply_setting(s, "elevator.stop", args[0]);
      apply_setting(s, "E.population", args[1]);
    } else {
      throw ConfigError("unknown preset: " + std::string(name));
    }
  }
}

Scenario parse_scenario(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  std::vector<std::string> storage;
  Scenario s;
  for (const Line& l : read_lines(in, source, kScenarioSchema, storage)) {
    try {
      set_with_paths(s, l.key, l.value, base_dir);
    } catch (const ConfigError& e) {
      throw ParseError(source, l.number, e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  return parse_scenario(in, path.string(), path.parent_path());
}

void apply_overrides(Scenario& s, const std::vector<std::string>& overrides, const std::filesystem::path& base_dir) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    const std::string_view sv = o;
    set_with_paths(s, text::trim(sv.substr(0, eq)), text::trim(sv.substr(eq + 1)), base_dir);
  }
}

SweepSpec parse_sweep(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  std::vector<std::string> storage;
  SweepSpec spec;
  bool have_base = false;
  bool have_values = false;
  std::vector<std::pair<std::size_t, std::string>> sets;
  for (const Line& l : read_lines(in, source, kSweepSchema, storage)) {
    if (l.key == "base") {
      try {
        spec.base = l.value == "reference" ? Scenario{} : load_scenario(resolve(base_dir, l.value));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(source, l.number, e.what());
      }
      have_base = true;
    } else if (l.key == "axis") {
      spec.axis = std::string(l.value);
    } else if (l.key == "values") {
      for (auto v : text::split(l.value, " \t")) spec.values.emplace_back(v);
      have_values = true;
    } else if (l.key == "seeds") {
      for (auto v : text::split(l.value, " \t,")) {
        const auto n = text::parse_int<std::uint64_t>(v);
        if (!n) throw ParseError(source, l.number, "invalid seed '" + std::string(v) + "'");
        spec.seeds.push_back(*n);
      }
    } else if (l.key == "set") {
      sets.emplace_back(l.number, std::string(l.value));
    } else {
      throw ParseError(source, l.number, "unknown key: " + std::string(l.key));
    }
  }
  if (!have_base) spec.base = Scenario{};
  for (const auto& [line, o] : sets) {
    try {
      apply_overrides(spec.base, {o}, base_dir);
    } catch (const ConfigError& e) {
      throw ParseError(source, line, e.what());
    }
  }
  if (spec.axis.empty()) throw ConfigError("sweep has no axis");
  if (!have_values || spec.values.empty()) throw ConfigError("sweep axis " + spec.axis + " has no values");
  if (spec.seeds.empty()) spec.seeds.push_back(spec.base.seed);
  const auto keys = setting_keys();
  if (spec.axis != "preset" && std::find(keys.begin(), keys.end(), spec.axis) == keys.end()) {
    throw ConfigError("unknown key: " + spec.axis);
  }
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sweep file " + path.string());
  return parse_sweep(in, path.string(), path.parent_path());
}

}  // namespace odsim::cli
