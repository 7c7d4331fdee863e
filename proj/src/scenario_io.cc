// Copyright 2026 The CRMS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crms/scenario_io.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "crms/errors.h"
#include "text_util.h"

namespace crms {
namespace {

struct Field {
  std::string value;
  int line = 0;
};

struct Block {
  std::string kind;
  int line = 0;
  std::map<std::string, Field> fields;
};

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> kKeys = {
      {"server", {"cpu_total", "mem_total", "p_idle", "p_full"}},
      {"weights", {"alpha", "beta"}},
      {"app",
       {"name", "kappa1", "kappa2", "kappa3", "latency_unit", "r_min", "r_max",
        "lambda", "x_mean"}},
  };
  return kKeys;
}

class BlockReader {
 public:
  BlockReader(const Block& block, const std::string& source)
      : block_(block), source_(source) {}

  const Field& require(const std::string& key) const {
    const auto it = block_.fields.find(key);
    if (it == block_.fields.end()) {
      throw ParseError(source_, block_.line,
                       block_.kind + ": missing field '" + key + "'");
    }
    return it->second;
  }

  bool has(const std::string& key) const { return block_.fields.count(key) > 0; }

  double number(const std::string& key) const {
    const Field& f = require(key);
    const auto v = text::parse_double(f.value);
    if (!v || !std::isfinite(*v)) {
      throw ParseError(source_, f.line,
                       block_.kind + "." + key + ": expected a number, got '" +
                           f.value + "'");
    }
    return *v;
  }

  // MB by default; accepts MB / GB suffixes.
  double megabytes(const std::string& key) const {
    const Field& f = require(key);
    std::string_view v = text::trim(f.value);
    double scale = 1.0;
    const auto ends_with = [&](std::string_view suffix) {
      if (v.size() < suffix.size()) return false;
      std::string tail(v.substr(v.size() - suffix.size()));
      for (auto& c : tail) c = static_cast<char>(std::toupper(c));
      return tail == suffix;
    };
    if (ends_with("GB")) {
      scale = 1024.0;
      v.remove_suffix(2);
    } else if (ends_with("MB")) {
      v.remove_suffix(2);
    }
    const auto d = text::parse_double(v);
    if (!d || !std::isfinite(*d)) {
      throw ParseError(source_, f.line,
                       block_.kind + "." + key + ": expected a memory size, got '" +
                           f.value + "'");
    }
    return *d * scale;
  }

  const std::string& source() const { return source_; }

 private:
  const Block& block_;
  const std::string& source_;
};

std::vector<Block> read_blocks(std::istream& in, const std::string& source) {
  std::vector<Block> blocks;
  std::optional<Block> current;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = line;
    if (const auto hash = t.find('#'); hash != std::string_view::npos) {
      t = t.substr(0, hash);
    }
    t = text::trim(t);
    if (t.empty()) continue;
    if (!current) {
      if (t.back() != '{') {
        throw ParseError(source, line_no, "expected '<block> {'");
      }
      const std::string kind(text::trim(t.substr(0, t.size() - 1)));
      if (!allowed_keys().count(kind)) {
        throw ParseError(source, line_no, "unknown block '" + kind + "'");
      }
      current = Block{kind, line_no, {}};
      continue;
    }
    if (t == "}") {
      blocks.push_back(std::move(*current));
      current.reset();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected 'key = value' in " + current->kind);
    }
    const std::string key(text::trim(t.substr(0, eq)));
    const std::string value(text::trim(t.substr(eq + 1)));
    if (!allowed_keys().at(current->kind).count(key)) {
      throw ParseError(source, line_no,
                       current->kind + ": unknown field '" + key + "'");
    }
    if (current->fields.count(key)) {
      throw ParseError(source, line_no, current->kind + ": duplicate field '" + key + "'");
    }
    if (value.empty()) {
      throw ParseError(source, line_no, current->kind + "." + key + ": empty value");
    }
    current->fields[key] = {value, line_no};
  }
  if (current) {
    throw ParseError(source, current->line, "unterminated block '" + current->kind + "'");
  }
  return blocks;
}

std::string fmt(double v) { return text::format_double(v, 17); }

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source) {
  const std::vector<Block> blocks = read_blocks(in, source);
  Scenario s;
  bool have_server = false, have_weights = false;
  for (const Block& b : blocks) {
    const BlockReader r(b, source);
    if (b.kind == "server") {
      if (have_server) throw ParseError(source, b.line, "duplicate server block");
      have_server = true;
      s.server.cpu_total = r.number("cpu_total");
      s.server.mem_total = r.megabytes("mem_total");
      s.server.p_idle = r.number("p_idle");
      s.server.p_full = r.number("p_full");
      try {
        s.server.validate();
      } catch (const InputError& e) {
        throw ParseError(source, b.line, std::string("server: ") + e.what());
      }
    } else if (b.kind == "weights") {
      if (have_weights) throw ParseError(source, b.line, "duplicate weights block");
      have_weights = true;
      s.weights.alpha = r.number("alpha");
      s.weights.beta = r.number("beta");
      try {
        s.weights.validate();
      } catch (const InputError& e) {
        throw ParseError(source, b.line, std::string("weights: ") + e.what());
      }
    } else {
      AppProfile app;
      app.name = r.require("name").value;
      app.latency.kappa1 = r.number("kappa1");
      app.latency.kappa2 = r.number("kappa2");
      app.latency.kappa3 = r.number("kappa3");
      if (r.has("latency_unit")) {
        const Field& f = r.require("latency_unit");
        if (f.value == "s") {
          app.unit = LatencyUnit::kSeconds;
        } else if (f.value == "ms") {
          app.unit = LatencyUnit::kMilliseconds;
        } else {
          throw ParseError(source, f.line,
                           "app.latency_unit: expected 's' or 'ms', got '" + f.value + "'");
        }
      }
      app.r_min = r.megabytes("r_min");
      app.r_max = r.megabytes("r_max");
      app.arrival_rate = r.number("lambda");
      app.mean_images = r.number("x_mean");
      try {
        app.validate();
      } catch (const Error& e) {
        throw ParseError(source, b.line, std::string("app: ") + e.what());
      }
      if (s.index_of(app.name) >= 0) {
        throw ParseError(source, b.line, "duplicate app name '" + app.name + "'");
      }
      s.apps.push_back(std::move(app));
    }
  }
  if (!have_server) throw ParseError(source, 0, "missing server block");
  if (!have_weights) throw ParseError(source, 0, "missing weights block");
  if (s.apps.empty()) throw ParseError(source, 0, "no app blocks");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

void write_scenario(std::ostream& out, const Scenario& s) {
  out << "server {\n"
      << "  cpu_total = " << fmt(s.server.cpu_total) << "\n"
      << "  mem_total = " << fmt(s.server.mem_total) << "\n"
      << "  p_idle = " << fmt(s.server.p_idle) << "\n"
      << "  p_full = " << fmt(s.server.p_full) << "\n"
      << "}\n"
      << "weights {\n"
      << "  alpha = " << fmt(s.weights.alpha) << "\n"
      << "  beta = " << fmt(s.weights.beta) << "\n"
      << "}\n";
  for (const AppProfile& a : s.apps) {
    out << "app {\n"
        << "  name = " << a.name << "\n"
        << "  kappa1 = " << fmt(a.latency.kappa1) << "\n"
        << "  kappa2 = " << fmt(a.latency.kappa2) << "\n"
        << "  kappa3 = " << fmt(a.latency.kappa3) << "\n"
        << "  latency_unit = " << (a.unit == LatencyUnit::kMilliseconds ? "ms" : "s")
        << "\n"
        << "  r_min = " << fmt(a.r_min) << "\n"
        << "  r_max = " << fmt(a.r_max) << "\n"
        << "  lambda = " << fmt(a.arrival_rate) << "\n"
        << "  x_mean = " << fmt(a.mean_images) << "\n"
        << "}\n";
  }
}

void write_plan_csv(std::ostream& out, const Allocation& alloc,
                    bool stability_column) {
  out << kPlanHeader << (stability_column ? ",stable" : "") << '\n';
  for (const AppOutcome& a : alloc.apps) {
    out << a.name << ',' << a.config.n_containers << ',' << fmt(a.config.r_cpu) << ','
        << fmt(a.config.r_mem) << ',' << text::format_double(a.mu) << ','
        << text::format_double(a.rho) << ',' << text::format_double(a.w_s) << ','
        << text::format_double(a.delta_power) << ','
        << text::format_double(a.utility_share);
    if (stability_column) out << ',' << (a.stable ? "true" : "false");
    out << '\n';
  }
}

std::vector<PlanRow> read_plan_csv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  std::vector<PlanRow> rows;
  int col_app = -1, col_n = -1, col_cpu = -1, col_mem = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = text::trim(line);
    if (t.empty()) continue;
    const auto fields = text::split(t, ',');
    if (header.empty()) {
      header = fields;
      for (std::size_t i = 0; i < header.size(); ++i) {
        const int idx = static_cast<int>(i);
        if (header[i] == "app") col_app = idx;
        if (header[i] == "N") col_n = idx;
        if (header[i] == "r_cpu") col_cpu = idx;
        if (header[i] == "r_mem_mb") col_mem = idx;
      }
      if (col_app < 0 || col_n < 0 || col_cpu < 0 || col_mem < 0) {
        throw ParseError(source, line_no,
                         "plan header must contain app, N, r_cpu and r_mem_mb");
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(source, line_no, "expected " + std::to_string(header.size()) +
                                            " fields, got " +
                                            std::to_string(fields.size()));
    }
    PlanRow row;
    row.app = fields[col_app];
    const auto n = text::parse_int(fields[col_n]);
    const auto cpu = text::parse_double(fields[col_cpu]);
    const auto mem = text::parse_double(fields[col_mem]);
    if (!n || *n < 0) throw ParseError(source, line_no, "field 'N' must be a count");
    if (!cpu) throw ParseError(source, line_no, "field 'r_cpu' must be a number");
    if (!mem) throw ParseError(source, line_no, "field 'r_mem_mb' must be a number");
    row.config = {static_cast<int>(*n), *cpu, *mem};
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(source, line_no, "empty plan file");
  return rows;
}

std::vector<ClusterConfig> match_plan(const std::vector<PlanRow>& rows,
                                      const Scenario& scenario) {
  if (rows.empty()) throw InputError("plan has no rows");
  if (rows.size() != scenario.apps.size()) {
    throw InputError("plan has " + std::to_string(rows.size()) + " rows, scenario has " +
                     std::to_string(scenario.apps.size()) + " apps");
  }
  std::vector<ClusterConfig> configs(scenario.apps.size());
  std::vector<bool> seen(scenario.apps.size(), false);
  for (const PlanRow& row : rows) {
    const int idx = scenario.index_of(row.app);
    if (idx < 0) throw InputError("plan names unknown app '" + row.app + "'");
    if (seen[idx]) throw InputError("plan lists app '" + row.app + "' twice");
    seen[idx] = true;
    configs[idx] = row.config;
  }
  return configs;
}

}  // namespace crms
