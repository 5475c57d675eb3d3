#include "rtsched/config_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "rtsched/presets.h"

namespace rtsched {
namespace {

int LineOf(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void Fail(const YAML::Node& node, const std::string& field, const std::string& what) {
  throw ConfigError(fmt::format("{}: {}", field, what), LineOf(node), field);
}

YAML::Node Require(const YAML::Node& parent, const char* key, const std::string& path) {
  YAML::Node child = parent[key];
  if (!child) Fail(parent, path + key, "missing field");
  return child;
}

std::string Scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) Fail(node, field, "expected a scalar");
  return node.Scalar();
}

template <typename Int>
Int AsInteger(const YAML::Node& node, const std::string& field) {
  const std::string text = Scalar(node, field);
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) Fail(node, field, "expected an integer, got '" + text + "'");
  return value;
}

double AsDouble(const YAML::Node& node, const std::string& field) {
  const std::string text = Scalar(node, field);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) Fail(node, field, "expected a number, got '" + text + "'");
  return value;
}

bool AsBool(const YAML::Node& node, const std::string& field) {
  const std::string text = Scalar(node, field);
  if (text == "true") return true;
  if (text == "false") return false;
  Fail(node, field, "expected true or false");
}

Matrix AsMatrix(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) Fail(node, field, "expected a list of rows");
  Matrix m;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const YAML::Node row = node[i];
    const std::string row_field = fmt::format("{}[{}]", field, i);
    if (!row.IsSequence()) Fail(row, row_field, "expected a list");
    std::vector<double> values;
    for (std::size_t j = 0; j < row.size(); ++j) values.push_back(AsDouble(row[j], fmt::format("{}[{}]", row_field, j)));
    m.push_back(std::move(values));
  }
  return m;
}

ArrivalModel ParseArrival(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) Fail(node, field, "expected a mapping");
  const std::string type = Scalar(Require(node, "type", field + "."), field + ".type");
  if (type == "periodic") {
    PeriodicArrivals a;
    if (node["interval"]) a.interval = AsInteger<int>(node["interval"], field + ".interval");
    if (node["offset"]) a.offset = AsInteger<int>(node["offset"], field + ".offset");
    return a;
  }
  if (type == "markov") {
    MarkovArrivals a;
    const YAML::Node states = Require(node, "states", field + ".");
    if (!states.IsSequence()) Fail(states, field + ".states", "expected a list");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string sf = fmt::format("{}.states[{}]", field, i);
      MarkovArrivalState s;
      if (states[i]["label"]) s.label = Scalar(states[i]["label"], sf + ".label");
      s.arrival_probability = AsDouble(Require(states[i], "probability", sf + "."), sf + ".probability");
      a.states.push_back(std::move(s));
    }
    a.transition = AsMatrix(Require(node, "transition", field + "."), field + ".transition");
    return a;
  }
  Fail(node, field + ".type", "unknown arrival type '" + type + "'");
}

TransmissionMode ParseMode(const YAML::Node& node) {
  const std::string text = Scalar(node, "mode");
  if (text == "fixed-rate") return TransmissionMode::kFixedRate;
  if (text == "rate-adaptation") return TransmissionMode::kRateAdaptation;
  Fail(node, "mode", "expected fixed-rate or rate-adaptation");
}

void ApplyOverrides(const YAML::Node& root, SystemConfig& config) {
  if (root["name"]) config.name = Scalar(root["name"], "name");
  if (root["horizon_periods"]) config.horizon_periods = AsInteger<std::int64_t>(root["horizon_periods"], "horizon_periods");
  if (root["seed"]) config.seed = AsInteger<std::uint64_t>(root["seed"], "seed");
  if (root["nonrt_client"]) config.nonrt_client = AsBool(root["nonrt_client"], "nonrt_client");
}

SystemConfig ParseFull(const YAML::Node& root) {
  SystemConfig config;
  config.slots_per_period = AsInteger<int>(Require(root, "slots_per_period", ""), "slots_per_period");
  if (root["mode"]) config.mode = ParseMode(root["mode"]);
  ApplyOverrides(root, config);

  std::string channel_model = "static";
  const YAML::Node channel = root["channel"];
  if (channel) {
    if (!channel.IsMap()) Fail(channel, "channel", "expected a mapping");
    channel_model = Scalar(Require(channel, "model", "channel."), "channel.model");
  }

  const YAML::Node clients = Require(root, "clients", "");
  if (!clients.IsSequence()) Fail(clients, "clients", "expected a list");
  PerClientTwoStateChannel two_state;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const YAML::Node c = clients[i];
    const std::string prefix = fmt::format("clients[{}].", i);
    if (!c.IsMap()) Fail(c, prefix, "expected a mapping");
    ClientSpec spec;
    spec.id = AsInteger<int>(Require(c, "id", prefix), prefix + "id");
    const YAML::Node q = Require(c, "q", prefix);
    try {
      spec.q = Rational::Parse(Scalar(q, prefix + "q"));
    } catch (const std::exception& e) {
      Fail(q, prefix + "q", e.what());
    }
    spec.tau = AsInteger<int>(Require(c, "tau", prefix), prefix + "tau");
    spec.arrival = ParseArrival(Require(c, "arrival", prefix), prefix + "arrival");
    const YAML::Node values = Require(c, "channel", prefix);
    if (!values.IsSequence()) Fail(values, prefix + "channel", "expected a list of per-state values");
    for (std::size_t j = 0; j < values.size(); ++j) {
      spec.channel_values.push_back(AsDouble(values[j], fmt::format("{}channel[{}]", prefix, j)));
    }
    if (channel_model == "per-client-two-state") {
      const YAML::Node sojourn = Require(c, "sojourn", prefix);
      TwoStateSojourn s;
      s.mean_good_periods = AsDouble(Require(sojourn, "good", prefix + "sojourn."), prefix + "sojourn.good");
      s.mean_bad_periods = AsDouble(Require(sojourn, "bad", prefix + "sojourn."), prefix + "sojourn.bad");
      two_state.sojourns.push_back(s);
    }
    config.clients.push_back(std::move(spec));
  }

  if (channel_model == "static") {
    config.channel = StaticChannel{};
  } else if (channel_model == "per-client-two-state") {
    config.channel = std::move(two_state);
  } else if (channel_model == "global-markov") {
    GlobalMarkovChannel g;
    const YAML::Node states = Require(channel, "states", "channel.");
    if (!states.IsSequence()) Fail(states, "channel.states", "expected a list of labels");
    for (std::size_t i = 0; i < states.size(); ++i) g.labels.push_back(Scalar(states[i], "channel.states"));
    g.transition = AsMatrix(Require(channel, "transition", "channel."), "channel.transition");
    config.channel = std::move(g);
  } else {
    Fail(channel, "channel.model", "unknown channel model '" + channel_model + "'");
  }
  return config;
}

std::string Num(double v) { return fmt::format("{}", v); }

void EmitMatrix(YAML::Emitter& out, const Matrix& m) {
  out << YAML::BeginSeq;
  for (const auto& row : m) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : row) out << Num(v);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message),
      line_(line),
      field_(std::move(field)) {}

SystemConfig ParseConfig(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ConfigError("expected a mapping at top level", LineOf(root));

  SystemConfig config;
  if (root["preset"]) {
    const std::string name = Scalar(root["preset"], "preset");
    const double scale = root["scale"] ? AsDouble(root["scale"], "scale") : 1.0;
    try {
      config = BuildPreset(name, scale);
    } catch (const std::invalid_argument& e) {
      Fail(root["preset"], "preset", e.what());
    }
    ApplyOverrides(root, config);
  } else {
    config = ParseFull(root);
  }

  std::string errors;
  for (const Diagnostic& d : Validate(config)) {
    if (d.severity != Severity::kError) continue;
    if (!errors.empty()) errors += "; ";
    errors += d.ToString();
  }
  if (!errors.empty()) throw ConfigError("invalid config: " + errors);
  return config;
}

SystemConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

std::string EmitConfig(const SystemConfig& config) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << config.name;
  out << YAML::Key << "slots_per_period" << YAML::Value << config.slots_per_period;
  out << YAML::Key << "mode" << YAML::Value
      << (config.mode == TransmissionMode::kFixedRate ? "fixed-rate" : "rate-adaptation");
  out << YAML::Key << "horizon_periods" << YAML::Value << config.horizon_periods;
  out << YAML::Key << "seed" << YAML::Value << config.seed;
  out << YAML::Key << "nonrt_client" << YAML::Value << (config.nonrt_client ? "true" : "false");

  out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  const auto* two_state = std::get_if<PerClientTwoStateChannel>(&config.channel);
  if (std::holds_alternative<StaticChannel>(config.channel)) {
    out << YAML::Key << "model" << YAML::Value << "static";
  } else if (two_state) {
    out << YAML::Key << "model" << YAML::Value << "per-client-two-state";
  } else {
    const auto& g = std::get<GlobalMarkovChannel>(config.channel);
    out << YAML::Key << "model" << YAML::Value << "global-markov";
    out << YAML::Key << "states" << YAML::Value << YAML::Flow << g.labels;
    out << YAML::Key << "transition" << YAML::Value;
    EmitMatrix(out, g.transition);
  }
  out << YAML::EndMap;

  out << YAML::Key << "clients" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < config.clients.size(); ++i) {
    const ClientSpec& c = config.clients[i];
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << c.id;
    out << YAML::Key << "q" << YAML::Value << YAML::DoubleQuoted << c.q.ToString();
    out << YAML::Key << "tau" << YAML::Value << c.tau;
    out << YAML::Key << "arrival" << YAML::Value;
    if (const auto* p = std::get_if<PeriodicArrivals>(&c.arrival)) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value << "periodic" << YAML::Key
          << "interval" << YAML::Value << p->interval << YAML::Key << "offset" << YAML::Value << p->offset
          << YAML::EndMap;
    } else {
      const auto& m = std::get<MarkovArrivals>(c.arrival);
      out << YAML::BeginMap << YAML::Key << "type" << YAML::Value << "markov";
      out << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
      for (const auto& s : m.states) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << s.label << YAML::Key
            << "probability" << YAML::Value << Num(s.arrival_probability) << YAML::EndMap;
      }
      out << YAML::EndSeq << YAML::Key << "transition" << YAML::Value;
      EmitMatrix(out, m.transition);
      out << YAML::EndMap;
    }
    out << YAML::Key << "channel" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : c.channel_values) out << Num(v);
    out << YAML::EndSeq;
    if (two_state && i < two_state->sojourns.size()) {
      out << YAML::Key << "sojourn" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "good"
          << YAML::Value << Num(two_state->sojourns[i].mean_good_periods) << YAML::Key << "bad" << YAML::Value
          << Num(two_state->sojourns[i].mean_bad_periods) << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace rtsched
