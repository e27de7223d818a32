#include "spinbayes/config.hpp"

#include "spinbayes/error.hpp"
#include "spinbayes/io.hpp"

#include <toml.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

namespace spinbayes {

namespace fs = std::filesystem;

std::string to_string(Command c) {
  switch (c) {
    case Command::phase: return "phase";
    case Command::sweep: return "sweep";
    case Command::gravimetry: return "gravimetry";
    case Command::clock: return "clock";
    case Command::fringe: return "fringe";
    case Command::noise_check: return "noise-check";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::phase, Command::sweep, Command::gravimetry, Command::clock,
                    Command::fringe, Command::noise_check}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown subcommand '" + s + "'");
}

namespace {

std::vector<double> default_sweep_values(SweepKind k) {
  if (k == SweepKind::alpha_error) return {-0.1, -0.05, -0.02, 0.0, 0.02, 0.05, 0.1};
  return {-0.4, -0.2, 0.0, 0.2, 0.4};
}

// Keys each subcommand reads; everything else is rejected.
struct Schema {
  std::set<std::string> top;
  std::map<std::string, std::set<std::string>> tables;
};

Schema schema_for(Command c) {
  const std::set<std::string> noise{"p_d", "sigma_w", "sigma_f", "sigma_r"};
  const std::set<std::string> full_state{"N", "family", "xi", "xi_db", "s", "chi_t", "alpha", "C"};
  const std::set<std::string> plain_state{"N", "C"};
  Schema s;
  s.top = {"seed", "trials", "threads"};
  switch (c) {
    case Command::phase:
      s.tables = {{"state", full_state},
                  {"noise", noise},
                  {"likelihood", {"mode", "qpn", "grid", "depolarization"}},
                  {"phase", {"true_phi", "steps"}}};
      break;
    case Command::sweep:
      s.tables = {{"state", plain_state},
                  {"noise", noise},
                  {"likelihood", {"mode", "qpn", "grid", "depolarization"}},
                  {"phase", {"true_phi", "steps"}},
                  {"sweep", {"kind", "values"}}};
      break;
    case Command::gravimetry:
      s.tables = {{"state", full_state},
                  {"noise", noise},
                  {"likelihood", {"mode", "qpn", "grid"}},
                  {"gravimetry", {"true_g", "g_prior", "k_eff", "T_max", "a", "M_a", "M"}}};
      break;
    case Command::clock:
      s.tables = {{"state", full_state},
                  {"noise", noise},
                  {"likelihood", {"grid"}},
                  {"clock", {"cycles", "T_max", "a", "M_a", "M", "carrier_hz", "dead_time",
                             "compare_coherent"}}};
      break;
    case Command::fringe:
      s.tables = {{"state", plain_state},
                  {"noise", noise},
                  {"likelihood", {"grid"}},
                  {"fringe", {"true_g", "g_center", "k_eff", "T", "points", "shots", "xis", "bayes"}}};
      break;
    case Command::noise_check:
      s.top = {"seed", "threads"};
      s.tables = {{"noise_check", {"n", "sigma"}}};
      break;
  }
  return s;
}

ConfigError key_error(const std::string& key, const std::string& msg, const toml::node* n = nullptr) {
  if (n) {
    const auto& b = n->source().begin;
    return ConfigError(key + ": " + msg, key, static_cast<int>(b.line), static_cast<int>(b.column));
  }
  return ConfigError(key + ": " + msg, key);
}

class Section {
public:
  Section(const toml::table* t, std::string name) : table_(t), name_(std::move(name)) {}

  std::optional<double> number(std::string_view key) const {
    const toml::node* n = find(key);
    if (!n) return std::nullopt;
    if (const auto v = n->value_exact<double>()) return check_finite(key, *v, n);
    if (const auto v = n->value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw key_error(path(key), "expected a number", n);
  }

  std::optional<std::int64_t> integer(std::string_view key, std::int64_t lo, std::int64_t hi) const {
    const toml::node* n = find(key);
    if (!n) return std::nullopt;
    const auto v = n->value_exact<std::int64_t>();
    if (!v) throw key_error(path(key), "expected an integer", n);
    if (*v < lo || *v > hi) {
      throw key_error(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", n);
    }
    return *v;
  }

  std::optional<bool> boolean(std::string_view key) const {
    const toml::node* n = find(key);
    if (!n) return std::nullopt;
    const auto v = n->value_exact<bool>();
    if (!v) throw key_error(path(key), "expected true or false", n);
    return *v;
  }

  std::optional<std::string> text(std::string_view key) const {
    const toml::node* n = find(key);
    if (!n) return std::nullopt;
    const auto v = n->value_exact<std::string>();
    if (!v) throw key_error(path(key), "expected a string", n);
    return *v;
  }

  std::optional<std::vector<double>> numbers(std::string_view key) const {
    const toml::node* n = find(key);
    if (!n) return std::nullopt;
    const toml::array* arr = n->as_array();
    if (!arr) throw key_error(path(key), "expected an array of numbers", n);
    std::vector<double> out;
    for (const toml::node& e : *arr) {
      if (const auto v = e.value_exact<double>()) out.push_back(check_finite(key, *v, &e));
      else if (const auto i = e.value_exact<std::int64_t>()) out.push_back(static_cast<double>(*i));
      else throw key_error(path(key), "expected an array of numbers", &e);
    }
    return out;
  }

  const toml::node* node(std::string_view key) const { return table_ ? table_->get(key) : nullptr; }
  std::string path(std::string_view key) const {
    return name_.empty() ? std::string(key) : name_ + "." + std::string(key);
  }

private:
  const toml::node* find(std::string_view key) const { return table_ ? table_->get(key) : nullptr; }

  double check_finite(std::string_view key, double v, const toml::node* n) const {
    if (!std::isfinite(v)) throw key_error(path(key), "must be finite", n);
    return v;
  }

  const toml::table* table_;
  std::string name_;
};

void check_keys(const toml::table& root, const Schema& schema, Command c) {
  for (auto&& [k, v] : root) {
    const std::string key(k.str());
    if (schema.top.count(key)) {
      if (v.is_table()) throw key_error(key, "expected a value, found a table", &v);
      continue;
    }
    const auto it = schema.tables.find(key);
    if (it == schema.tables.end()) {
      throw key_error(key, "unknown key for subcommand " + to_string(c), &v);
    }
    const toml::table* t = v.as_table();
    if (!t) throw key_error(key, "expected a table", &v);
    for (auto&& [sk, sv] : *t) {
      if (!it->second.count(std::string(sk.str()))) {
        throw key_error(key + "." + std::string(sk.str()), "unknown key for subcommand " + to_string(c), &sv);
      }
    }
  }
}

void read_state(const Section& s, StateSection& st, Command c) {
  if (const auto n = s.integer("N", 2, 100000000)) st.n = static_cast<int>(*n);
  if (const auto v = s.number("C")) st.contrast = *v;
  const auto xi = s.number("xi");
  const auto xi_db = s.number("xi_db");
  const auto sw = s.number("s");
  const auto chi_t = s.number("chi_t");
  const auto alpha = s.number("alpha");
  const auto family = s.text("family");
  const int given = (xi ? 1 : 0) + (xi_db ? 1 : 0) + (sw ? 1 : 0) + (chi_t ? 1 : 0);
  if (given > 1) throw key_error(s.path("xi"), "give at most one of xi, xi_db, s, chi_t", s.node("xi"));
  if (alpha && !chi_t) throw key_error(s.path("alpha"), "alpha needs chi_t", s.node("alpha"));
  if (given == 1 || (family && *family == "coherent")) {
    st.xi = xi;
    st.xi_db = xi_db;
    st.s = sw;
    st.chi_t = chi_t;
    st.alpha = alpha;
  }
  if (sw) st.family = "ansatz";
  else if (chi_t) st.family = "oat";
  else if (!st.xi && !st.xi_db) st.family = "coherent";
  else if (st.family.empty() || st.family == "coherent") st.family = c == Command::phase ? "ansatz" : "oat";

  if (family) {
    const std::string& f = *family;
    if (f != "ansatz" && f != "oat" && f != "coherent") {
      throw key_error(s.path("family"), "must be ansatz, oat or coherent", s.node("family"));
    }
    const bool squeezed = st.xi || st.xi_db || st.s || st.chi_t;
    if ((f == "coherent" && squeezed) || (f != "coherent" && !squeezed) ||
        (sw && f != "ansatz") || (chi_t && f != "oat")) {
      throw key_error(s.path("family"), "family '" + f + "' conflicts with the squeezing keys",
                      s.node("family"));
    }
    st.family = f;
  }
}

void read_noise(const Section& s, NoiseSpec& n) {
  if (const auto v = s.number("p_d")) n.p_d = *v;
  if (const auto v = s.number("sigma_w")) n.sigma_w = *v;
  if (const auto v = s.number("sigma_f")) n.sigma_f = *v;
  if (const auto v = s.number("sigma_r")) n.sigma_r = *v;
}

void read_likelihood(const Section& s, LikelihoodSection& l) {
  if (const auto v = s.text("mode")) l.mode = *v;
  if (const auto v = s.text("qpn")) {
    try {
      l.qpn = qpn_form_from_string(*v);
    } catch (const DomainError& e) {
      throw key_error(s.path("qpn"), e.what(), s.node("qpn"));
    }
  }
  if (const auto v = s.integer("grid", 64, 1 << 22)) l.grid = static_cast<std::size_t>(*v);
  if (const auto v = s.text("depolarization")) {
    if (*v != "per_step" && *v != "per_trial") {
      throw key_error(s.path("depolarization"), "must be per_step or per_trial", s.node("depolarization"));
    }
    l.depolarization_per_step = *v == "per_step";
  }
}

constexpr std::int64_t kMaxSteps = 100000;

void read_body(const toml::table& root, RunConfig& cfg) {
  const Section top(&root, "");
  if (const toml::node* n = root.get("seed")) {
    if (const auto v = n->value_exact<std::int64_t>()) {
      if (*v < 0) throw key_error("seed", "must be >= 0", n);
      cfg.seed = static_cast<std::uint64_t>(*v);
    } else if (const auto str = n->value_exact<std::string>()) {
      std::uint64_t u = 0;
      std::istringstream is(*str);
      if (!(is >> u) || !is.eof()) throw key_error("seed", "expected an unsigned integer", n);
      cfg.seed = u;
    } else {
      throw key_error("seed", "expected an unsigned integer", n);
    }
  }
  if (const auto v = top.integer("trials", 1, 10000000)) cfg.trials = static_cast<int>(*v);
  if (const auto v = top.integer("threads", 0, 1024)) cfg.threads = static_cast<unsigned>(*v);

  const auto sub = [&](const char* name) { return Section(root[name].as_table(), name); };
  read_state(sub("state"), cfg.state, cfg.command);
  read_noise(sub("noise"), cfg.noise);
  read_likelihood(sub("likelihood"), cfg.likelihood);

  const Section ph = sub("phase");
  if (const auto v = ph.number("true_phi")) cfg.phase.true_phi = *v;
  if (const auto v = ph.integer("steps", 1, kMaxSteps)) cfg.phase.steps = static_cast<int>(*v);

  const Section sw = sub("sweep");
  if (const auto v = sw.text("kind")) {
    try {
      cfg.sweep.kind = sweep_kind_from_string(*v);
    } catch (const DomainError& e) {
      throw key_error("sweep.kind", e.what(), sw.node("kind"));
    }
    cfg.sweep.values = default_sweep_values(cfg.sweep.kind);
  }
  if (const auto v = sw.numbers("values")) cfg.sweep.values = *v;

  const Section gr = sub("gravimetry");
  auto& g = cfg.gravimetry;
  if (const auto v = gr.number("true_g")) g.true_g = *v;
  if (const auto v = gr.number("g_prior")) g.g_prior = *v;
  if (const auto v = gr.number("k_eff")) g.k_eff = *v;
  if (const auto v = gr.number("T_max")) g.t_max = *v;
  if (const auto v = gr.number("a")) g.a = *v;
  if (const auto v = gr.integer("M_a", 1, kMaxSteps)) g.ramp = static_cast<int>(*v);
  if (const auto v = gr.integer("M", 1, kMaxSteps)) g.steps = static_cast<int>(*v);
  if (const auto v = sub("likelihood").text("mode")) {
    if (cfg.command == Command::gravimetry) {
      if (*v != "ideal" && *v != "reshaped") {
        throw key_error("likelihood.mode", "must be ideal or reshaped", root["likelihood"]["mode"].node());
      }
      g.reshaped = *v == "reshaped";
    }
  }

  const Section cl = sub("clock");
  auto& c = cfg.clock;
  if (const auto v = cl.integer("cycles", 1, 100000000)) c.cycles = static_cast<int>(*v);
  if (const auto v = cl.number("T_max")) c.t_max = *v;
  if (const auto v = cl.number("a")) c.a = *v;
  if (const auto v = cl.integer("M_a", 1, kMaxSteps)) c.ramp = static_cast<int>(*v);
  if (const auto v = cl.integer("M", 1, kMaxSteps)) c.steps = static_cast<int>(*v);
  if (const auto v = cl.number("carrier_hz")) c.carrier_hz = *v;
  if (const auto v = cl.number("dead_time")) c.dead_time = *v;
  if (const auto v = cl.boolean("compare_coherent")) c.compare_coherent = *v;

  const Section fr = sub("fringe");
  auto& f = cfg.fringe;
  if (const auto v = fr.number("true_g")) f.true_g = *v;
  if (const auto v = fr.number("g_center")) f.g_center = *v;
  if (const auto v = fr.number("k_eff")) f.k_eff = *v;
  if (const auto v = fr.number("T")) f.t = *v;
  if (const auto v = fr.integer("points", 1, 1000000)) f.points = static_cast<int>(*v);
  if (const auto v = fr.integer("shots", 1, 1000000)) f.shots = static_cast<int>(*v);
  if (const auto v = fr.numbers("xis")) f.xis = *v;
  if (const auto v = fr.boolean("bayes")) f.bayes = *v;

  const Section nc = sub("noise_check");
  if (const auto v = nc.integer("n", 1, 1 << 26)) cfg.noise_check.n = static_cast<std::size_t>(*v);
  if (const auto v = nc.number("sigma")) cfg.noise_check.sigma = *v;
}

template <class F>
auto guarded(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(key + ": " + e.what(), key);
  }
}

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key + ": " + msg, key);
}

// Ordered blocks shared by the TOML and JSON writers.
using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;
struct Block {
  std::string name;
  std::vector<std::pair<std::string, Value>> entries;
};

std::vector<Block> to_blocks(const RunConfig& cfg) {
  const Schema schema = schema_for(cfg.command);
  const auto has = [&](const std::string& t, const std::string& k) {
    const auto it = schema.tables.find(t);
    return it != schema.tables.end() && it->second.count(k) > 0;
  };
  std::vector<Block> out;
  Block top{"", {}};
  if (cfg.seed) {
    if (*cfg.seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      top.entries.emplace_back("seed", static_cast<std::int64_t>(*cfg.seed));
    } else {
      top.entries.emplace_back("seed", std::to_string(*cfg.seed));
    }
  }
  if (schema.top.count("trials")) top.entries.emplace_back("trials", std::int64_t{cfg.trials});
  top.entries.emplace_back("threads", static_cast<std::int64_t>(cfg.threads));
  out.push_back(top);

  if (schema.tables.count("state")) {
    Block b{"state", {}};
    const StateSection& s = cfg.state;
    b.entries.emplace_back("N", std::int64_t{s.n});
    if (has("state", "family")) {
      b.entries.emplace_back("family", s.family);
      if (s.xi) b.entries.emplace_back("xi", *s.xi);
      if (s.xi_db) b.entries.emplace_back("xi_db", *s.xi_db);
      if (s.s) b.entries.emplace_back("s", *s.s);
      if (s.chi_t) b.entries.emplace_back("chi_t", *s.chi_t);
      if (s.alpha) b.entries.emplace_back("alpha", *s.alpha);
    }
    b.entries.emplace_back("C", s.contrast);
    out.push_back(b);
  }
  if (schema.tables.count("noise")) {
    out.push_back({"noise",
                   {{"p_d", cfg.noise.p_d},
                    {"sigma_w", cfg.noise.sigma_w},
                    {"sigma_f", cfg.noise.sigma_f},
                    {"sigma_r", cfg.noise.sigma_r}}});
  }
  if (schema.tables.count("likelihood")) {
    Block b{"likelihood", {}};
    const LikelihoodSection& l = cfg.likelihood;
    if (has("likelihood", "mode")) {
      b.entries.emplace_back("mode", cfg.command == Command::gravimetry
                                         ? std::string(cfg.gravimetry.reshaped ? "reshaped" : "ideal")
                                         : l.mode);
    }
    if (has("likelihood", "qpn")) b.entries.emplace_back("qpn", to_string(l.qpn));
    b.entries.emplace_back("grid", static_cast<std::int64_t>(l.grid));
    if (has("likelihood", "depolarization")) {
      b.entries.emplace_back("depolarization", std::string(l.depolarization_per_step ? "per_step" : "per_trial"));
    }
    out.push_back(b);
  }
  if (schema.tables.count("phase")) {
    Block b{"phase", {}};
    if (cfg.phase.true_phi) b.entries.emplace_back("true_phi", *cfg.phase.true_phi);
    b.entries.emplace_back("steps", std::int64_t{cfg.phase.steps});
    out.push_back(b);
  }
  if (schema.tables.count("sweep")) {
    out.push_back({"sweep", {{"kind", to_string(cfg.sweep.kind)}, {"values", cfg.sweep.values}}});
  }
  if (schema.tables.count("gravimetry")) {
    const GravimetrySection& g = cfg.gravimetry;
    Block b{"gravimetry", {}};
    if (g.true_g) b.entries.emplace_back("true_g", *g.true_g);
    if (g.g_prior) b.entries.emplace_back("g_prior", *g.g_prior);
    else if (g.true_g) b.entries.emplace_back("g_prior", *g.true_g);
    b.entries.emplace_back("k_eff", g.k_eff);
    b.entries.emplace_back("T_max", g.t_max);
    b.entries.emplace_back("a", g.a);
    b.entries.emplace_back("M_a", std::int64_t{g.ramp});
    b.entries.emplace_back("M", std::int64_t{g.steps});
    out.push_back(b);
  }
  if (schema.tables.count("clock")) {
    const ClockSection& c = cfg.clock;
    out.push_back({"clock",
                   {{"cycles", std::int64_t{c.cycles}},
                    {"T_max", c.t_max},
                    {"a", c.a},
                    {"M_a", std::int64_t{c.ramp}},
                    {"M", std::int64_t{c.steps}},
                    {"carrier_hz", c.carrier_hz},
                    {"dead_time", c.dead_time},
                    {"compare_coherent", c.compare_coherent}}});
  }
  if (schema.tables.count("fringe")) {
    const FringeSection& f = cfg.fringe;
    Block b{"fringe", {}};
    if (f.true_g) b.entries.emplace_back("true_g", *f.true_g);
    if (f.g_center) b.entries.emplace_back("g_center", *f.g_center);
    else if (f.true_g) b.entries.emplace_back("g_center", *f.true_g);
    b.entries.emplace_back("k_eff", f.k_eff);
    b.entries.emplace_back("T", f.t);
    b.entries.emplace_back("points", std::int64_t{f.points});
    b.entries.emplace_back("shots", std::int64_t{f.shots});
    b.entries.emplace_back("xis", f.xis);
    b.entries.emplace_back("bayes", f.bayes);
    out.push_back(b);
  }
  if (schema.tables.count("noise_check")) {
    out.push_back({"noise_check",
                   {{"n", static_cast<std::int64_t>(cfg.noise_check.n)}, {"sigma", cfg.noise_check.sigma}}});
  }
  return out;
}

std::string toml_double(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string toml_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

RunConfig default_config(Command c) {
  RunConfig cfg;
  cfg.command = c;
  switch (c) {
    case Command::phase:
      cfg.state.family = "coherent";
      break;
    case Command::sweep:
      cfg.state.family = "oat";
      cfg.sweep.values = default_sweep_values(cfg.sweep.kind);
      cfg.likelihood.mode = "ideal";
      break;
    case Command::gravimetry:
      cfg.state = {6000, "oat", 0.5, std::nullopt, std::nullopt, std::nullopt, std::nullopt, 0.98};
      cfg.likelihood.mode = "reshaped";
      break;
    case Command::clock:
      cfg.state = {30000, "oat", std::nullopt, -5.1, std::nullopt, std::nullopt, std::nullopt, 0.91};
      cfg.trials = 20;
      cfg.likelihood.grid = 1024;
      break;
    case Command::fringe:
      cfg.state.n = 6000;
      cfg.state.contrast = 0.98;
      cfg.state.family = "oat";
      cfg.trials = 50;
      cfg.likelihood.grid = 2048;
      break;
    case Command::noise_check:
      cfg.trials = 1;
      break;
  }
  return cfg;
}

RunConfig parse_config(Command c, const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const auto& b = e.source().begin;
    throw ConfigError(source + ": " + std::string(e.description()), {}, static_cast<int>(b.line),
                      static_cast<int>(b.column));
  }
  check_keys(root, schema_for(c), c);
  RunConfig cfg = default_config(c);
  read_body(root, cfg);
  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(Command c, const fs::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  if (path.extension() == ".json") {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    if (!m.is_object() || !m.contains("subcommand") || !m.contains("config_toml")) {
      throw ConfigError(path.string() + ": not a run manifest");
    }
    if (m["subcommand"] != to_string(c)) {
      throw ConfigError(path.string() + ": manifest was written by '" + m["subcommand"].get<std::string>() +
                        "', not '" + to_string(c) + "'");
    }
    return parse_config(c, m["config_toml"].get<std::string>(), path.string());
  }
  return parse_config(c, text, path.string());
}

SqueezedStateModel build_state(const StateSection& s) {
  return guarded("state", [&] {
    if (s.family == "coherent") return coherent_state(s.n, s.contrast);
    if (s.s) return ansatz_to_model({s.n, *s.s}, s.contrast);
    if (s.chi_t) {
      const double alpha = s.alpha ? *s.alpha : optimal_rotation_angle(s.n, *s.chi_t);
      return oat_model({s.n, *s.chi_t, alpha}, s.contrast);
    }
    const double xi = s.xi ? *s.xi : xi_from_db(*s.xi_db);
    if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("xi must lie in (0, 1]");
    return model_from_xi(s.n, xi, s.contrast, s.family == "ansatz" ? StateFamily::ansatz : StateFamily::oat);
  });
}

SessionConfig session_config(const RunConfig& cfg, bool reshaped) {
  SessionConfig s;
  s.state = cfg.command == Command::sweep ? coherent_state(cfg.state.n, cfg.state.contrast) : build_state(cfg.state);
  s.true_phi = cfg.phase.true_phi.value_or(0.0);
  s.steps = cfg.phase.steps;
  s.noise = cfg.noise;
  s.reshaped = reshaped;
  s.qpn = cfg.likelihood.qpn;
  s.depolarization_per_step = cfg.likelihood.depolarization_per_step;
  s.grid = cfg.likelihood.grid;
  return s;
}

GravimetryConfig gravimetry_config(const RunConfig& cfg) {
  const GravimetrySection& g = cfg.gravimetry;
  GravimetryConfig out;
  out.state = build_state(cfg.state);
  out.phase = PhaseModel::gravimetry(g.k_eff);
  out.schedule = guarded("gravimetry", [&] { return build_schedule(g.t_max, g.a, g.ramp, g.steps); });
  out.true_g = g.true_g.value_or(0.0);
  out.g_prior = g.g_prior.value_or(out.true_g);
  out.noise = cfg.noise;
  out.reshaped = g.reshaped;
  out.qpn = cfg.likelihood.qpn;
  out.grid = cfg.likelihood.grid;
  return out;
}

ClockConfig clock_config(const RunConfig& cfg) {
  const ClockSection& c = cfg.clock;
  ClockConfig out;
  out.state = build_state(cfg.state);
  out.schedule = guarded("clock", [&] { return build_schedule(c.t_max, c.a, c.ramp, c.steps); });
  out.noise = cfg.noise;
  out.cycles = c.cycles;
  out.carrier_hz = c.carrier_hz;
  out.dead_time = c.dead_time;
  out.grid = cfg.likelihood.grid;
  return out;
}

FringeConfig fringe_config(const RunConfig& cfg) {
  const FringeSection& f = cfg.fringe;
  FringeConfig out;
  out.n = cfg.state.n;
  out.contrast = cfg.state.contrast;
  out.k_eff = f.k_eff;
  out.t = f.t;
  out.true_g = f.true_g.value_or(0.0);
  out.g_center = f.g_center.value_or(out.true_g);
  out.points = f.points;
  out.shots = f.shots;
  out.noise = cfg.noise;
  out.grid = cfg.likelihood.grid;
  return out;
}

void validate(const RunConfig& cfg) {
  guarded("noise", [&] { validate(cfg.noise); return 0; });
  require(cfg.state.contrast > 0.0 && cfg.state.contrast <= 1.0, "state.C", "contrast must lie in (0, 1]");

  switch (cfg.command) {
    case Command::phase:
    case Command::sweep: {
      require(cfg.phase.true_phi.has_value(), "phase.true_phi", "required");
      require(std::abs(*cfg.phase.true_phi) <= std::numbers::pi, "phase.true_phi", "must lie in [-pi, pi]");
      require(cfg.trials >= 2, "trials", "need at least 2 trials for batch statistics");
      const std::string& m = cfg.likelihood.mode;
      if (cfg.command == Command::phase) {
        require(m == "ideal" || m == "reshaped" || m == "both", "likelihood.mode", "must be ideal, reshaped or both");
      } else {
        require(m == "ideal" || m == "reshaped", "likelihood.mode", "must be ideal or reshaped");
        require(!cfg.sweep.values.empty(), "sweep.values", "must not be empty");
        for (double v : cfg.sweep.values) {
          if (cfg.sweep.kind == SweepKind::t_error) require(v > -1.0, "sweep.values", "twist-time errors must exceed -1");
          guarded("sweep.values", [&] { return perturbed_oat(cfg.state.n, cfg.sweep.kind, v); });
        }
      }
      guarded("state", [&] { validate(session_config(cfg, false)); return 0; });
      break;
    }
    case Command::gravimetry: {
      const GravimetrySection& g = cfg.gravimetry;
      require(g.true_g.has_value(), "gravimetry.true_g", "required");
      require(g.a > 1.0, "gravimetry.a", "growth ratio must exceed 1");
      require(g.t_max > 0.0, "gravimetry.T_max", "must be > 0");
      require(g.k_eff > 0.0, "gravimetry.k_eff", "must be > 0");
      require(g.ramp <= g.steps, "gravimetry.M_a", "must not exceed M");
      require(cfg.trials >= 2, "trials", "need at least 2 trials for batch statistics");
      guarded("gravimetry", [&] { validate(gravimetry_config(cfg)); return 0; });
      break;
    }
    case Command::clock: {
      const ClockSection& c = cfg.clock;
      require(c.a > 1.0, "clock.a", "growth ratio must exceed 1");
      require(c.t_max > 0.0, "clock.T_max", "must be > 0");
      require(c.ramp <= c.steps, "clock.M_a", "must not exceed M");
      require(c.cycles >= 32, "clock.cycles", "must be >= 32");
      require(c.carrier_hz > 0.0, "clock.carrier_hz", "must be > 0");
      require(c.dead_time >= 0.0, "clock.dead_time", "must be >= 0");
      guarded("clock", [&] { validate(clock_config(cfg)); return 0; });
      break;
    }
    case Command::fringe: {
      const FringeSection& f = cfg.fringe;
      require(f.true_g.has_value(), "fringe.true_g", "required");
      require(f.k_eff > 0.0, "fringe.k_eff", "must be > 0");
      require(f.t > 0.0, "fringe.T", "must be > 0");
      require(f.points >= 4, "fringe.points", "need at least 4 points per fringe");
      require(cfg.trials >= 10, "trials", "need at least 10 trials per xi");
      require(!f.xis.empty(), "fringe.xis", "must not be empty");
      for (double xi : f.xis) {
        require(xi > 0.0 && xi <= 1.0, "fringe.xis", "values must lie in (0, 1]");
        guarded("fringe.xis", [&] {
          return model_from_xi(cfg.state.n, xi, cfg.state.contrast, StateFamily::oat);
        });
      }
      guarded("fringe", [&] { validate(fringe_config(cfg)); return 0; });
      break;
    }
    case Command::noise_check:
      require(cfg.noise_check.n >= 64, "noise_check.n", "must be >= 64");
      require(cfg.noise_check.sigma > 0.0, "noise_check.sigma", "must be > 0");
      break;
  }
}

std::string to_toml(const RunConfig& cfg) {
  std::string out = "# spinbayes " + to_string(cfg.command) + ", resolved\n";
  for (const Block& b : to_blocks(cfg)) {
    if (!b.name.empty()) out += "\n[" + b.name + "]\n";
    for (const auto& [k, v] : b.entries) {
      out += k + " = ";
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) out += x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) out += std::to_string(x);
            else if constexpr (std::is_same_v<T, double>) out += toml_double(x);
            else if constexpr (std::is_same_v<T, std::string>) out += toml_string(x);
            else {
              out += '[';
              for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + toml_double(x[i]);
              out += ']';
            }
          },
          v);
      out += '\n';
    }
  }
  return out;
}

std::string to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Block& b : to_blocks(cfg)) {
    nlohmann::ordered_json& dst = b.name.empty() ? j : j[b.name];
    if (!b.name.empty()) dst = nlohmann::ordered_json::object();
    for (const auto& [k, v] : b.entries) {
      std::visit([&](const auto& x) { dst[k] = x; }, v);
    }
  }
  return j.dump(2);
}

}  // namespace spinbayes
