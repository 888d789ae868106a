#include "ofd/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace ofd {
namespace {

using nlohmann::json;

nlohmann::ordered_json number(double x) {
  if (std::floor(x) == x && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
  return x;
}

double as_real(const json& j, const char* what, std::size_t line) {
  if (!j.is_number()) throw ParseError(line, std::string(what) + " must be a number");
  return j.get<double>();
}

InstanceHeader parse_header(const json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError(line, "header must be a JSON object");
  InstanceHeader h;
  if (!j.contains("n") || !j["n"].is_number_unsigned()) {
    throw ParseError(line, "header field \"n\" must be a positive integer");
  }
  h.n = j["n"].get<std::size_t>();
  if (!j.contains("agents") || !j["agents"].is_array()) {
    throw ParseError(line, "header field \"agents\" must be an array");
  }
  const std::string flavor = j.value("flavor", std::string("two_value"));
  if (flavor == "two_value") {
    h.flavor = Flavor::TwoValue;
  } else if (flavor == "interval") {
    h.flavor = Flavor::IntervalRestricted;
  } else {
    throw ParseError(line, "unknown flavor \"" + flavor + "\"");
  }
  if (j.contains("foresight")) {
    if (!j["foresight"].is_number_unsigned()) {
      throw ParseError(line, "\"foresight\" must be a nonnegative integer");
    }
    h.foresight = j["foresight"].get<std::size_t>();
  }
  for (const auto& a : j["agents"]) {
    if (!a.is_object() || !a.contains("alpha")) throw ParseError(line, "agent entry needs \"alpha\"");
    const double alpha = as_real(a["alpha"], "alpha", line);
    double beta = 1.0;
    if (a.contains("beta")) {
      beta = as_real(a["beta"], "beta", line);
    } else if (h.flavor == Flavor::TwoValue) {
      throw ParseError(line, "two-value agents need \"beta\"");
    }
    try {
      h.agents.push_back(AgentProfile::make(alpha, beta));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  }
  try {
    validate_header(h);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
  return h;
}

GoodEvent parse_good(const json& j, const InstanceHeader& h, std::size_t index, std::size_t line) {
  if (!j.is_object()) throw ParseError(line, "good must be a JSON object");
  GoodEvent e;
  e.index = index;
  if (j.contains("high")) {
    if (!j["high"].is_array()) throw ParseError(line, "\"high\" must be an array of booleans");
    HighLowMask mask;
    for (const auto& b : j["high"]) {
      if (!b.is_boolean()) throw ParseError(line, "\"high\" entries must be booleans");
      mask.push_back(b.get<bool>() ? 1 : 0);
    }
    e.values = std::move(mask);
  } else if (j.contains("values")) {
    if (!j["values"].is_array()) throw ParseError(line, "\"values\" must be an array of numbers");
    RealVector v;
    for (const auto& x : j["values"]) v.push_back(as_real(x, "value", line));
    e.values = std::move(v);
  } else {
    throw ParseError(line, "good needs \"high\" or \"values\"");
  }
  try {
    validate_event(h, e);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(line, ex.what());
  }
  return e;
}

}  // namespace

Instance read_instance(std::istream& in) {
  Instance inst;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
    if (!have_header) {
      inst.header = parse_header(j, line);
      have_header = true;
    } else {
      inst.goods.push_back(parse_good(j, inst.header, inst.goods.size() + 1, line));
    }
  }
  if (!have_header) throw ParseError(line + 1, "missing header line");
  return inst;
}

Instance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  using ojson = nlohmann::ordered_json;
  const auto& h = instance.header;
  ojson header;
  header["n"] = h.n;
  header["agents"] = ojson::array();
  for (const auto& a : h.agents) header["agents"].push_back({{"alpha", number(a.alpha)}, {"beta", number(a.beta)}});
  header["flavor"] = std::string(to_string(h.flavor));
  header["foresight"] = h.foresight;
  out << header.dump() << '\n';
  for (const auto& g : instance.goods) {
    ojson line;
    if (g.is_mask()) {
      ojson arr = ojson::array();
      for (auto b : g.mask()) arr.push_back(b != 0);
      line["high"] = std::move(arr);
    } else {
      ojson arr = ojson::array();
      for (double x : g.reals()) arr.push_back(number(x));
      line["values"] = std::move(arr);
    }
    out << line.dump() << '\n';
  }
}

void write_instance_file(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_instance(out, instance);
}

}  // namespace ofd
