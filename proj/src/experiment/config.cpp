#include "phi3/experiment/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phi3/errors.hpp"
#include "phi3/ground/hamiltonian.hpp"

namespace phi3::experiment {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::string number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + number(v[i]);
  return s;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto r = std::from_chars(first, t.data() + t.size(), out);
  return r.ec == std::errc{} && r.ptr == t.data() + t.size();
}

bool parse_bool(const std::string& text, bool& out) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return out = true, true;
  if (t == "false" || t == "0" || t == "no") return out = false, true;
  return false;
}

bool parse_list(const std::string& text, std::vector<double>& out) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x;
    if (!parse_number(item, x)) return false;
    v.push_back(x);
  }
  if (v.empty()) return false;
  out = std::move(v);
  return true;
}

// One binding per key: how to read it and what type it expects.
struct Binding {
  const char* type;
  std::function<bool(ExperimentConfig&, const std::string&)> read;
};

const std::map<std::string, Binding>& bindings() {
  using C = ExperimentConfig;
  auto real = [](double C::*m) {
    return Binding{"real", [m](C& c, const std::string& s) { return parse_number(s, c.*m); }};
  };
  auto integer = [](auto m) {
    return Binding{"integer", [m](C& c, const std::string& s) { return parse_number(s, c.*m); }};
  };
  auto boolean = [](bool ExperimentFlags::*m) {
    return Binding{"boolean", [m](C& c, const std::string& s) { return parse_bool(s, c.flags.*m); }};
  };
  auto reals = [](std::vector<double> C::*m) {
    return Binding{"list of reals", [m](C& c, const std::string& s) { return parse_list(s, c.*m); }};
  };
  static const std::map<std::string, Binding> b{
      {"command", {"command name", [](C& c, const std::string& s) { return c.command = trim(s), true; }}},
      {"seed", integer(&C::seed)},
      {"output_path", {"path", [](C& c, const std::string& s) { return c.output_path = trim(s), true; }}},
      {"lattice.L_list", reals(&C::L_list)},
      {"lattice.N_list", reals(&C::N_list)},
      {"model.sigma", real(&C::sigma)},
      {"model.A", real(&C::A)},
      {"model.A_over_critical", real(&C::A_over_critical)},
      {"sampling.n_samples", integer(&C::n_samples)},
      {"sampling.annealed", {"boolean", [](C& c, const std::string& s) { return parse_bool(s, c.annealed); }}},
      {"sampling.thin", integer(&C::thin)},
      {"sampling.massless_mean_zero", boolean(&ExperimentFlags::massless_mean_zero)},
      {"sampling.mala", boolean(&ExperimentFlags::mala)},
      {"concentration.eta", real(&C::eta)},
      {"concentration.epsilon_list", reals(&C::epsilon_list)},
      {"concentration.test_functions", integer(&C::test_functions)},
      {"concentration.bump_radius", real(&C::bump_radius)},
      {"bounds.recenter_cutoff", real(&C::recenter_cutoff)},
      {"bounds.delta", real(&C::delta)},
      {"bounds.epsilon", real(&C::bound_epsilon)},
      {"oracle.quadrature_order", integer(&C::quadrature_order)},
  };
  return b;
}

void validate(const ExperimentConfig& c, std::vector<std::string>& problems) {
  auto bad = [&](const std::string& what) { problems.push_back("constraint-violation: " + what); };
  const auto& cmds = commands();
  if (!c.command.empty() && std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) bad("command '" + c.command + "' is not known");
  if (c.output_path.empty()) bad("output_path must not be empty");
  for (double L : c.L_list)
    if (!(L > 0.0)) bad("lattice.L_list entries must be > 0");
  for (double N : c.N_list)
    if (!(N >= 0.0)) bad("lattice.N_list entries must be >= 0");
  if (!(c.A >= 0.0)) bad("model.A must be >= 0");
  if (!(c.A_over_critical >= 0.0)) bad("model.A_over_critical must be >= 0");
  if (!std::isfinite(c.sigma)) bad("model.sigma must be finite");
  if (c.n_samples <= 0) bad("sampling.n_samples must be > 0");
  if (c.thin < 1) bad("sampling.thin must be >= 1");
  if (!(c.eta >= 0.0)) bad("concentration.eta must be >= 0");
  for (double e : c.epsilon_list)
    if (!(e >= 0.0)) bad("concentration.epsilon_list entries must be >= 0");
  if (c.test_functions < 0) bad("concentration.test_functions must be >= 0");
  if (!(c.bump_radius > 0.0)) bad("concentration.bump_radius must be > 0");
  if (!(c.recenter_cutoff >= 0.0)) bad("bounds.recenter_cutoff must be >= 0");
  if (!(c.delta > 0.0 && c.delta < 1.0)) bad("bounds.delta must lie in (0, 1)");
  if (!(c.bound_epsilon > 0.0 && c.bound_epsilon < 1.0)) bad("bounds.epsilon must lie in (0, 1)");
  if (c.quadrature_order < 20) bad("oracle.quadrature_order must be >= 20");
}

}  // namespace

double ExperimentConfig::effective_A() const {
  return A_over_critical > 0.0 ? A_over_critical * ground::critical_A(sigma == 0.0 ? 1.0 : sigma) : A;
}

std::vector<std::string> ExperimentConfig::notes() const {
  std::vector<std::string> n;
  if (sigma == 0.0) n.push_back("sigma = 0: Gaussian-baseline reference run");
  if (effective_A() == 0.0 && sigma != 0.0) n.push_back("A = 0 with sigma != 0: partition function diverges");
  return n;
}

ExperimentConfig parse_config(const std::string& text) {
  // '#' comments are accepted alongside the ';' comments of the ini reader.
  std::stringstream in(text), cleaned;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    cleaned << (t.starts_with("#") ? std::string() : line) << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({"syntax: line " + std::to_string(e.line()) + ": " + e.message()});
  }
  ExperimentConfig c;
  std::vector<std::string> problems;
  auto apply = [&](const std::string& key, const std::string& value) {
    const auto it = bindings().find(key);
    if (it == bindings().end()) {
      problems.push_back("unknown-key: " + key);
    } else if (!it->second.read(c, value)) {
      problems.push_back("type-mismatch: " + key + " expects " + it->second.type + ", got '" + trim(value) + "'");
    }
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) apply(name + "." + key, leaf.data());
    }
  }
  validate(c, problems);
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream o;
  o << "command = " << c.command << "\nseed = " << c.seed << "\noutput_path = " << c.output_path << "\n";
  o << "\n[lattice]\nL_list = " << list(c.L_list) << "\nN_list = " << list(c.N_list) << "\n";
  o << "\n[model]\nsigma = " << number(c.sigma) << "\nA = " << number(c.A)
    << "\nA_over_critical = " << number(c.A_over_critical) << "\n";
  o << "\n[sampling]\nn_samples = " << c.n_samples << "\nannealed = " << b(c.annealed) << "\nthin = " << c.thin
    << "\nmassless_mean_zero = " << b(c.flags.massless_mean_zero) << "\nmala = " << b(c.flags.mala) << "\n";
  o << "\n[concentration]\neta = " << number(c.eta) << "\nepsilon_list = " << list(c.epsilon_list)
    << "\ntest_functions = " << c.test_functions << "\nbump_radius = " << number(c.bump_radius) << "\n";
  o << "\n[bounds]\nrecenter_cutoff = " << number(c.recenter_cutoff) << "\ndelta = " << number(c.delta)
    << "\nepsilon = " << number(c.bound_epsilon) << "\n";
  o << "\n[oracle]\nquadrature_order = " << c.quadrature_order << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace phi3::experiment
