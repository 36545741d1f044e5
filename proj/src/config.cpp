#include "wmlp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wmlp/csv.hpp"

namespace wmlp {

std::string to_string(InputMode mode) { return mode == InputMode::kFlat ? "flat" : "features"; }

InputMode parse_input_mode(const std::string& s) {
  if (s == "flat") return InputMode::kFlat;
  if (s == "features") return InputMode::kFeatures;
  throw std::invalid_argument("input_mode must be 'flat' or 'features', got '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "input_mode", "data",        "out",          "seed",       "learning_rate", "batch_size", "epochs",
      "hidden",     "l2",          "early_stop_patience",        "split_ratio",   "val_fraction", "skip_tuning",
      "tune_epochs", "da_pop",     "da_max_iter",  "lr_min",     "lr_max",        "hidden_min", "hidden_max"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "input_mode") {
    input_mode = parse_input_mode(v);
  } else if (key == "data") {
    data_root = v;
  } else if (key == "out") {
    out_dir = v;
  } else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw std::invalid_argument("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "learning_rate") {
    train.learning_rate = to_double(key, v);
  } else if (key == "batch_size") {
    train.batch_size = static_cast<int>(to_int(key, v));
  } else if (key == "epochs") {
    train.epochs = static_cast<int>(to_int(key, v));
  } else if (key == "hidden") {
    hidden = static_cast<int>(to_int(key, v));
  } else if (key == "l2") {
    train.l2 = to_double(key, v);
  } else if (key == "early_stop_patience") {
    if (v.empty() || v == "off" || v == "none" || v == "0") {
      train.early_stop_patience.reset();
    } else {
      train.early_stop_patience = static_cast<int>(to_int(key, v));
    }
  } else if (key == "split_ratio") {
    split_ratio = to_double(key, v);
  } else if (key == "val_fraction") {
    val_fraction = to_double(key, v);
  } else if (key == "skip_tuning") {
    skip_tuning = to_bool(key, v);
  } else if (key == "tune_epochs") {
    tune_epochs = static_cast<int>(to_int(key, v));
  } else if (key == "da_pop") {
    tuning.pop = static_cast<int>(to_int(key, v));
  } else if (key == "da_max_iter") {
    tuning.max_iter = static_cast<int>(to_int(key, v));
  } else if (key == "lr_min") {
    tuning.lb[0] = to_double(key, v);
  } else if (key == "lr_max") {
    tuning.ub[0] = to_double(key, v);
  } else if (key == "hidden_min") {
    tuning.lb[1] = to_double(key, v);
  } else if (key == "hidden_max") {
    tuning.ub[1] = to_double(key, v);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (!(train.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (train.batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
  if (train.epochs <= 0) throw std::invalid_argument("epochs must be positive");
  if (hidden <= 0) throw std::invalid_argument("hidden must be positive");
  if (train.l2 < 0.0) throw std::invalid_argument("l2 must be non-negative");
  if (train.early_stop_patience && *train.early_stop_patience <= 0) {
    throw std::invalid_argument("early_stop_patience must be positive");
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw std::invalid_argument("split_ratio must lie in (0, 1)");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw std::invalid_argument("val_fraction must lie in (0, 1)");
  if (tune_epochs <= 0) throw std::invalid_argument("tune_epochs must be positive");
  tuning.validate();
  if (tuning.lb[0] <= 0.0) throw std::invalid_argument("lr_min must be positive");
}

std::string RunConfig::dump() const {
  std::ostringstream out;
  out << "input_mode = " << to_string(input_mode) << '\n'
      << "data = " << data_root.string() << '\n'
      << "out = " << out_dir.string() << '\n'
      << "seed = " << seed << '\n'
      << "learning_rate = " << csv::num(train.learning_rate) << '\n'
      << "batch_size = " << train.batch_size << '\n'
      << "epochs = " << train.epochs << '\n'
      << "hidden = " << hidden << '\n'
      << "l2 = " << csv::num(train.l2) << '\n'
      << "early_stop_patience = " << (train.early_stop_patience ? std::to_string(*train.early_stop_patience) : "off") << '\n'
      << "split_ratio = " << csv::num(split_ratio) << '\n'
      << "val_fraction = " << csv::num(val_fraction) << '\n'
      << "skip_tuning = " << (skip_tuning ? "true" : "false") << '\n'
      << "tune_epochs = " << tune_epochs << '\n'
      << "da_pop = " << tuning.pop << '\n'
      << "da_max_iter = " << tuning.max_iter << '\n'
      << "lr_min = " << csv::num(tuning.lb[0]) << '\n'
      << "lr_max = " << csv::num(tuning.ub[0]) << '\n'
      << "hidden_min = " << csv::num(tuning.lb[1]) << '\n'
      << "hidden_max = " << csv::num(tuning.ub[1]) << '\n';
  return out.str();
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace wmlp
