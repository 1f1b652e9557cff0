#include "dualdi/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dualdi/error.hpp"
#include "dualdi/image_io.hpp"

namespace dualdi {

namespace {

constexpr const char* kMagic = "dualdi-model";
constexpr int kVersion = 1;

void append_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g\n", v);
  out += buf;
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::CorruptCheckpoint, what); }

std::string next_line(std::istringstream& in, const char* expect) {
  std::string line;
  if (!std::getline(in, line)) corrupt(std::string("truncated before ") + expect);
  return line;
}

// "<key> <int>" line.
long long keyed_count(std::istringstream& in, const std::string& key) {
  const std::string line = next_line(in, key.c_str());
  if (line.rfind(key + " ", 0) != 0) corrupt("expected '" + key + "', got '" + line + "'");
  try {
    std::size_t pos = 0;
    const std::string num = line.substr(key.size() + 1);
    const long long v = std::stoll(num, &pos);
    if (pos != num.size() || v < 0) corrupt("bad count in '" + line + "'");
    return v;
  } catch (const std::logic_error&) {
    corrupt("bad count in '" + line + "'");
  }
}

double parse_value(std::istringstream& in) {
  const std::string line = next_line(in, "value");
  char* end = nullptr;
  const double v = std::strtod(line.c_str(), &end);
  if (line.empty() || end != line.c_str() + line.size()) corrupt("bad value '" + line + "'");
  return v;
}

}  // namespace

std::string format_checkpoint(const ClassifierModel& model, const std::string& config_echo) {
  model.validate();
  std::string out = std::string(kMagic) + " " + std::to_string(kVersion) + "\n";
  out += "classes " + std::to_string(model.num_classes()) + "\n";
  for (const auto& name : model.class_names) out += name + "\n";
  out += "input_side " + std::to_string(model.input_side) + "\n";
  out += "channels " + std::to_string(model.channels) + "\n";
  std::string echo = config_echo;
  for (char& c : echo) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  out += "config " + echo + "\n";
  out += "weights " + std::to_string(model.weights.size()) + "\n";
  for (double w : model.weights) append_value(out, w);
  out += "bias " + std::to_string(model.bias.size()) + "\n";
  for (double b : model.bias) append_value(out, b);
  out += "input_mean " + std::to_string(model.input_mean.size()) + "\n";
  for (double v : model.input_mean) append_value(out, v);
  out += "input_std " + std::to_string(model.input_std.size()) + "\n";
  for (double v : model.input_std) append_value(out, v);
  out += "end\n";
  return out;
}

ClassifierModel parse_checkpoint(const std::string& text, std::string* config_echo) {
  std::istringstream in(text);
  const std::string magic = next_line(in, "header");
  if (magic != std::string(kMagic) + " " + std::to_string(kVersion)) {
    corrupt("unsupported header '" + magic + "'");
  }
  ClassifierModel m;
  const long long k = keyed_count(in, "classes");
  for (long long i = 0; i < k; ++i) m.class_names.push_back(next_line(in, "class name"));
  m.input_side = static_cast<int>(keyed_count(in, "input_side"));
  m.channels = static_cast<int>(keyed_count(in, "channels"));
  const std::string cfg_line = next_line(in, "config");
  if (cfg_line != "config" && cfg_line.rfind("config ", 0) != 0) corrupt("expected 'config', got '" + cfg_line + "'");
  if (config_echo) *config_echo = cfg_line.size() > 7 ? cfg_line.substr(7) : std::string{};
  const long long nw = keyed_count(in, "weights");
  if (static_cast<std::size_t>(nw) != static_cast<std::size_t>(k) * m.feature_dim()) {
    corrupt("weight count disagrees with K x D");
  }
  m.weights.reserve(static_cast<std::size_t>(nw));
  for (long long i = 0; i < nw; ++i) m.weights.push_back(parse_value(in));
  const long long nb = keyed_count(in, "bias");
  if (nb != k) corrupt("bias count disagrees with K");
  for (long long i = 0; i < nb; ++i) m.bias.push_back(parse_value(in));
  for (auto* vec : {&m.input_mean, &m.input_std}) {
    const long long nd = keyed_count(in, vec == &m.input_mean ? "input_mean" : "input_std");
    if (static_cast<std::size_t>(nd) != m.feature_dim()) corrupt("standardization size disagrees with D");
    for (long long i = 0; i < nd; ++i) vec->push_back(parse_value(in));
  }
  if (next_line(in, "end") != "end") corrupt("missing end marker");
  try {
    m.validate();
  } catch (const Error& e) {
    corrupt(e.what());
  }
  return m;
}

void save_checkpoint(const std::filesystem::path& path, const ClassifierModel& model,
                     const std::string& config_echo) {
  write_file_atomic(path, format_checkpoint(model, config_echo));
}

ClassifierModel load_checkpoint(const std::filesystem::path& path, std::string* config_echo) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, path.string() + ": cannot open checkpoint");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str(), config_echo);
}

}  // namespace dualdi
