#include "lrq/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lrq/numfmt.hpp"

namespace lrq {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

Settings Settings::load(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  return parse_ini(text);
}

Settings Settings::parse_ini(const std::string& text) {
  boost::property_tree::ptree pt;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  Settings s;
  for (const auto& [section, body] : pt) {
    if (body.empty()) {
      s.values_[section] = body.data();
      continue;
    }
    for (const auto& [key, v] : body) s.values_[section + "." + key] = v.data();
  }
  return s;
}

Settings Settings::parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: JSON root must be an object");
  Settings s;
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return num(v.get<double>());
    return v.dump();
  };
  for (const auto& [section, body] : j.items()) {
    if (body.is_object()) {
      for (const auto& [key, v] : body.items()) s.values_[section + "." + key] = scalar(v);
    } else {
      s.values_[section] = scalar(body);
    }
  }
  return s;
}

std::string Settings::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

double Settings::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_double(get(key, "")) : fallback;
}

long long Settings::get_int(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const double v = parse_double(get(key, ""));
  if (v != std::floor(v)) throw std::invalid_argument(key + " must be an integer");
  return static_cast<long long>(v);
}

std::uint64_t Settings::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  std::size_t pos = 0;
  std::uint64_t r = 0;
  try {
    r = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + " must be an unsigned integer");
  }
  if (pos != v.size()) throw std::invalid_argument(key + " must be an unsigned integer");
  return r;
}

std::vector<int> parse_sides(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s + "x") {
    if (c == 'x' || c == 'X' || c == ',') {
      if (cur.empty()) throw std::invalid_argument("bad window '" + s + "'");
      const double v = parse_double(cur);
      if (v < 1 || v != std::floor(v)) throw std::invalid_argument("bad window '" + s + "'");
      out.push_back(static_cast<int>(v));
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (out.empty() || out.size() > kMaxDim) throw std::invalid_argument("bad window '" + s + "'");
  return out;
}

std::vector<int> Settings::get_sides(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key, "");
  v.erase(std::remove_if(v.begin(), v.end(), [](char c) { return c == '[' || c == ']'; }), v.end());
  return parse_sides(v);
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  if (std::count(s.begin(), s.end(), ':') == 2) {
    const auto a = s.find(':'), b = s.rfind(':');
    const double lo = parse_double(s.substr(0, a));
    const double step = parse_double(s.substr(a + 1, b - a - 1));
    const double hi = parse_double(s.substr(b + 1));
    if (!(step > 0) || hi < lo) throw std::invalid_argument("bad grid '" + s + "'");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
  }
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(parse_double(cur));
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (out.empty()) throw std::invalid_argument("bad grid '" + s + "'");
  return out;
}

json Settings::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

ModelSettings ModelSettings::from(const Settings& s) {
  ModelSettings m;
  m.sides = s.get_sides("model.window", m.sides);
  m.q = static_cast<int>(s.get_int("model.q", m.q));
  m.interaction = s.get("model.interaction", m.interaction);
  m.J = s.get_double("model.J", m.J);
  const std::string a = s.get("model.alpha", "3");
  m.alpha = (a == "nn" || a == "inf") ? kNearestNeighbor : parse_double(a);
  m.norm = parse_norm(s.get("model.norm", "l2"));
  m.beta = s.get_double("model.beta", m.beta);
  m.exterior = static_cast<Color>(s.get_int("model.exterior", 0));
  m.field = parse_field_kind(s.get("field.kind", "zero"));
  m.field_params.h_star = s.get_double("field.h_star", 0.0);
  m.field_params.delta = s.get_double("field.delta", 0.0);
  m.field_params.R = s.get_double("field.R", 1.0);
  m.field_params.epsilon = s.get_double("field.epsilon", 0.0);
  m.field_params.seed = s.get_u64("field.seed", 0);
  m.field_params.norm = m.norm;
  m.M = s.get_double("model.M", 0.0);
  m.a = s.get_double("model.a", 0.0);
  m.c1 = s.get_double("model.c1", 1.0);
  if (m.q < 2) throw std::invalid_argument("model.q must be >= 2");
  if (m.exterior < 0 || m.exterior >= m.q) throw std::invalid_argument("model.exterior out of range");
  return m;
}

Region ModelSettings::window() const { return box_region(centered_box(sides)); }

ModelInstance ModelSettings::instance() const {
  const Region w = window();
  const CouplingKernel k = alpha == kNearestNeighbor ? CouplingKernel::nearest_neighbor(J, w)
                                                     : CouplingKernel(J, alpha, w, norm);
  const InteractionSpec spec = InteractionSpec::preset(interaction, q);
  return ModelInstance(k, spec, make_field(field, field_params, w, q), beta);
}

namespace {

json site_json(const Site& x) {
  json a = json::array();
  for (int i = 0; i < x.dim; ++i) a.push_back(x.x[i]);
  return a;
}

json region_json(const Region& r) {
  json a = json::array();
  for (const auto& x : r) a.push_back(site_json(x));
  return a;
}

Site site_from(const json& a) {
  if (!a.is_array() || a.empty() || a.size() > kMaxDim) throw std::invalid_argument("site must be a coordinate array");
  Site s(static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) s.x[i] = a[i].get<int>();
  return s;
}

}  // namespace

json to_json(const SpinConfig& s) {
  json j;
  j["q"] = s.q();
  j["exterior"] = s.exterior();
  j["sites"] = region_json(s.window());
  j["spins"] = s.spins();
  return j;
}

SpinConfig spin_config_from_json(const json& j) {
  try {
    const int q = j.at("q").get<int>();
    const Color ext = j.value("exterior", 0);
    Region window;
    if (j.contains("sides")) {
      window = box_region(centered_box(j.at("sides").get<std::vector<int>>()));
    } else {
      std::vector<Site> sites;
      for (const auto& a : j.at("sites")) sites.push_back(site_from(a));
      if (sites.empty()) throw std::invalid_argument("spin config: no sites");
      const int d = sites.front().dim;
      for (const auto& x : sites)
        if (x.dim != d) throw std::invalid_argument("spin config: mixed dimensions");
      // spins follow the listed order; reorder to the sorted window
      std::vector<Color> listed = j.at("spins").get<std::vector<Color>>();
      if (listed.size() != sites.size()) throw std::invalid_argument("spin config: one spin per site");
      window = Region(d, sites);
      if (window.size() != sites.size()) throw std::invalid_argument("spin config: duplicate sites");
      std::vector<Color> spins(sites.size());
      for (std::size_t i = 0; i < sites.size(); ++i) spins[window.index_of(sites[i])] = listed[i];
      return SpinConfig(window, q, ext, spins);
    }
    return SpinConfig(window, q, ext, j.at("spins").get<std::vector<Color>>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("spin config: ") + e.what());
  }
}

SpinConfig load_spin_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return spin_config_from_json(j);
}

json to_json(const ContourFamily& f, const SpinConfig& s) {
  json j;
  j["fingerprint"] = hex64(f.fingerprint);
  j["q"] = f.q;
  j["configuration"] = to_json(s);
  const auto ext = external_indices(f);
  json arr = json::array();
  for (std::size_t i = 0; i < f.contours.size(); ++i) {
    const Contour& g = f.contours[i];
    json c;
    c["index"] = i;
    c["external"] = std::find(ext.begin(), ext.end(), i) != ext.end();
    c["size"] = g.size();
    c["support"] = region_json(g.support);
    c["spins"] = g.spins;
    c["outer_label"] = g.outer_label;
    c["volume_size"] = g.volume.size();
    json comps = json::array();
    for (const auto& comp : g.components) comps.push_back({{"label", comp.label}, {"sites", region_json(comp.sites)}});
    c["interior_components"] = comps;
    arr.push_back(c);
  }
  j["contours"] = arr;
  j["diagnostics"] = f.diagnostics;
  return j;
}

std::string Manifest::hash() const {
  json j;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["version"] = kVersion;
  return hex64(fnv1a(j.dump()));
}

json Manifest::to_json() const {
  json j;
  j["tool"] = "lrq";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["outputs"] = outputs;
  j["threads"] = threads;
  j["wall_clock_s"] = wall_clock_s;
  j["hash"] = hash();
  return j;
}

Manifest Manifest::from_json(const json& j) {
  Manifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = j.at("config");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.threads = j.value("threads", 1);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  return m;
}

}  // namespace lrq
