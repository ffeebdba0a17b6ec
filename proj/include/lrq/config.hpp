#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrq/contour.hpp"
#include "lrq/interactions.hpp"
#include "lrq/spin_model.hpp"

namespace lrq {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCsvSchema = 1;

// Flat "section.key" -> value store. INI files use [model], [field] and [run] sections;
// a JSON object of objects is accepted as well.
class Settings {
 public:
  Settings() = default;
  static Settings load(const std::string& path);
  static Settings parse_ini(const std::string& text);
  static Settings parse_json(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // "4x4" or "4,4"
  std::vector<int> get_sides(const std::string& key, const std::vector<int>& fallback) const;
  const std::map<std::string, std::string>& values() const { return values_; }
  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<int> parse_sides(const std::string& s);
// "a:step:b" or "v1,v2,..."
std::vector<double> parse_grid(const std::string& s);
double parse_double(const std::string& s);

struct ModelSettings {
  std::vector<int> sides{4, 4};
  int q = 3;
  std::string interaction = "potts";
  double J = 1.0;
  double alpha = 3.0;  // kNearestNeighbor for "nn"
  Norm norm = Norm::l2;
  double beta = 1.0;
  Color exterior = 0;
  FieldKind field = FieldKind::zero;
  FieldParams field_params;
  double M = 0.0;  // 0 means M_min
  double a = 0.0;  // 0 means the default exponent
  double c1 = 1.0;

  static ModelSettings from(const Settings& s);
  Region window() const;
  ModelInstance instance() const;
};

nlohmann::json to_json(const SpinConfig& s);
// Spins use colors 0..q-1 with 0 the reference color. Accepts "sides" (row-major spins
// on the centered box) or explicit "sites".
SpinConfig spin_config_from_json(const nlohmann::json& j);
SpinConfig load_spin_config(const std::string& path);

nlohmann::json to_json(const ContourFamily& f, const SpinConfig& s);

// Run manifest. The hash covers everything that determines the outputs (not timing).
struct Manifest {
  std::string subcommand;
  nlohmann::json config;
  std::vector<std::string> outputs;
  int threads = 1;
  double wall_clock_s = 0;

  std::string hash() const;
  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace lrq
