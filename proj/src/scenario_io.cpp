#include "craneplan/scenario_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "craneplan/csv.hpp"

namespace craneplan {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::runtime_error("scenario line " + std::to_string(line) +
                               ": not a number: '" + tok + "'");
    }
    if (pos != tok.size())
      throw std::runtime_error("scenario line " + std::to_string(line) +
                               ": trailing junk in number: '" + tok + "'");
    out.push_back(d);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

/// Flat key -> value map with dotted section prefixes. Repeatable sections
/// ([obstacle], body_segment keys) are collected separately.
struct ParsedFile {
  std::map<std::string, Entry> kv;
  std::vector<std::map<std::string, Entry>> obstacles;
  std::map<std::string, std::vector<Entry>> repeated;  // per full key
};

ParsedFile tokenize(const std::string& text) {
  ParsedFile f;
  std::stringstream ss(text);
  std::string raw;
  std::string section;
  bool in_obstacle = false;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw std::runtime_error("scenario line " + std::to_string(line) +
                                 ": unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      in_obstacle = (section == "obstacle");
      if (in_obstacle) f.obstacles.emplace_back();
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("scenario line " + std::to_string(line) +
                               ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("scenario line " + std::to_string(line) +
                               ": empty key");
    if (in_obstacle) {
      f.obstacles.back()[key] = {value, line};
    } else {
      std::string full = section.empty() ? key : section + "." + key;
      if (key == "body_segment") {
        f.repeated[full].push_back({value, line});
      } else {
        f.kv[full] = {value, line};
      }
    }
  }
  return f;
}

class Reader {
 public:
  explicit Reader(const ParsedFile& f) : f_(f) {}

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = f_.kv.find(key);
    return it == f_.kv.end() ? fallback : it->second.value;
  }

  double num(const std::string& key, double fallback) const {
    auto it = f_.kv.find(key);
    if (it == f_.kv.end()) return fallback;
    auto v = parse_numbers(it->second.value, it->second.line);
    if (v.size() != 1)
      throw std::runtime_error("scenario key '" + key + "': expected a scalar");
    return v[0];
  }

  std::vector<double> nums(const std::string& key, size_t n) const {
    auto it = f_.kv.find(key);
    if (it == f_.kv.end())
      throw std::runtime_error("scenario: missing key '" + key + "'");
    auto v = parse_numbers(it->second.value, it->second.line);
    if (v.size() != n)
      throw std::runtime_error("scenario key '" + key + "': expected " +
                               std::to_string(n) + " numbers");
    return v;
  }

  bool has(const std::string& key) const { return f_.kv.count(key) > 0; }

  const ParsedFile& file() const { return f_; }

 private:
  const ParsedFile& f_;
};

ArmSpec parse_arm(const Reader& r, const std::string& prefix, ArmSide side) {
  ArmSpec arm;
  arm.name = side;
  auto sh = r.nums(prefix + ".shoulder_mm", 3);
  arm.shoulder = {sh[0], sh[1], sh[2]};
  arm.reach_min_mm = r.num(prefix + ".reach_min_mm", 150.0);
  arm.reach_max_mm = r.num(prefix + ".reach_max_mm", 800.0);
  arm.body_radius_mm = r.num(prefix + ".body_radius_mm", 55.0);
  arm.approach_cone_half_angle =
      deg2rad(r.num(prefix + ".approach_cone_half_angle_deg", 100.0));
  if (r.has(prefix + ".gripper_box_mm")) {
    auto g = r.nums(prefix + ".gripper_box_mm", 3);
    arm.gripper_box_mm = {g[0], g[1], g[2]};
  }
  if (r.has(prefix + ".parked_hand_mm")) {
    auto p = r.nums(prefix + ".parked_hand_mm", 3);
    arm.parked_hand = {p[0], p[1], p[2]};
  } else {
    arm.parked_hand = arm.shoulder + Vec3{0.0, 0.0, -150.0};
  }
  auto it = r.file().repeated.find(prefix + ".body_segment");
  if (it != r.file().repeated.end()) {
    for (const Entry& e : it->second) {
      auto v = parse_numbers(e.value, e.line);
      if (v.size() != 6)
        throw std::runtime_error("scenario line " + std::to_string(e.line) +
                                 ": body_segment needs 6 numbers");
      arm.body_segments.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
    }
  }
  return arm;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  ParsedFile file = tokenize(text);
  Reader r(file);
  Scenario s;

  s.id = r.str("id", "scenario");

  s.plate.name = r.str("plate.name", "plate");
  s.plate.height_mm = r.num("plate.height_mm", 0.0);
  s.plate.length_mm = r.num("plate.length_mm", 0.0);
  s.plate.width_mm = r.num("plate.width_mm", 0.0);
  s.plate.mass_kg = r.num("plate.mass_kg", 0.0);
  auto com = r.nums("plate.com_offset_mm", 2);
  s.plate.com_offset_mm = {com[0], com[1]};
  auto hook = r.nums("plate.hook_offset_mm", 2);
  s.plate.hook_offset_mm = {hook[0], hook[1]};
  s.plate.mu0 = r.num("plate.mu0", 0.5);
  s.plate.mu1 = r.num("plate.mu1", 0.4);

  auto pin = r.nums("rope.pin_mm", 3);
  s.rope.pin_point = {pin[0], pin[1], pin[2]};
  s.rope.pulley_ratio = r.num("rope.pulley_ratio", 2.0);
  s.rope.element_length_mm = r.num("rope.element_length_mm", 30.0);
  s.rope.element_radius_mm = r.num("rope.element_radius_mm", 6.0);
  s.initial_element_count = (int)r.num("rope.element_count", 20.0);

  s.left_arm = parse_arm(r, "arms.left", ArmSide::Left);
  s.right_arm = parse_arm(r, "arms.right", ArmSide::Right);

  s.table_height_mm = r.num("table.height_mm", 0.0);

  s.alpha_thld = deg2rad(r.num("lift.alpha_thld_deg", 70.0));
  auto w = r.nums("lift.quality_weights", 3);
  s.quality_weights = {w[0], w[1], w[2]};
  s.goal_sample_count = (int)r.num("lift.goal_samples", 200.0);
  s.noise_sigma_angle = deg2rad(r.num("lift.noise_sigma_deg", 0.0));
  s.force_proxy_cap = r.num("lift.force_proxy_cap", 200.0);

  auto k = r.nums("tumble.k", 3);
  s.tumble.k1 = k[0];
  s.tumble.k2 = k[1];
  s.tumble.k3 = k[2];
  s.tumble.f1_sq_max = r.num("tumble.f1_sq_max", 30.0);
  s.tumble.v_max = r.num("tumble.v_max", 30.0);
  s.tumble.gamma = deg2rad(r.num("tumble.gamma_deg", 20.0));
  s.tumble.dt = r.num("tumble.dt", 0.0);
  s.tumble.n_steps = (int)r.num("tumble.n_steps", 60.0);
  s.tumble.enforce_speed = r.num("tumble.enforce_speed", 1.0) != 0.0;
  s.tumble.enforce_direction = r.num("tumble.enforce_direction", 1.0) != 0.0;

  s.rng_seed = (std::uint64_t)r.num("run.rng_seed", 0.0);

  for (const auto& ob : file.obstacles) {
    auto get = [&](const char* key) {
      auto it = ob.find(key);
      if (it == ob.end())
        throw std::runtime_error(std::string("scenario obstacle: missing ") +
                                 key);
      return parse_numbers(it->second.value, it->second.line);
    };
    auto c = get("center_mm");
    auto h = get("half_extents_mm");
    if (c.size() != 3 || h.size() != 3)
      throw std::runtime_error("scenario obstacle: center/half_extents need 3 numbers");
    s.obstacles.push_back({{c[0], c[1], c[2]}, {h[0], h[1], h[2]}});
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

void write_arm(std::ostream& o, const std::string& name, const ArmSpec& a) {
  o << "[arms." << name << "]\n";
  o << "shoulder_mm = " << format_double(a.shoulder.x) << ", "
    << format_double(a.shoulder.y) << ", " << format_double(a.shoulder.z)
    << "\n";
  o << "reach_min_mm = " << format_double(a.reach_min_mm) << "\n";
  o << "reach_max_mm = " << format_double(a.reach_max_mm) << "\n";
  o << "body_radius_mm = " << format_double(a.body_radius_mm) << "\n";
  o << "approach_cone_half_angle_deg = "
    << format_double(rad2deg(a.approach_cone_half_angle)) << "\n";
  o << "gripper_box_mm = " << format_double(a.gripper_box_mm.x) << ", "
    << format_double(a.gripper_box_mm.y) << ", "
    << format_double(a.gripper_box_mm.z) << "\n";
  o << "parked_hand_mm = " << format_double(a.parked_hand.x) << ", "
    << format_double(a.parked_hand.y) << ", " << format_double(a.parked_hand.z)
    << "\n";
  for (const Segment3& seg : a.body_segments) {
    o << "body_segment = " << format_double(seg.a.x) << ", "
      << format_double(seg.a.y) << ", " << format_double(seg.a.z) << ", "
      << format_double(seg.b.x) << ", " << format_double(seg.b.y) << ", "
      << format_double(seg.b.z) << "\n";
  }
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "id = " << s.id << "\n\n";
  o << "[plate]\n";
  o << "name = " << s.plate.name << "\n";
  o << "height_mm = " << format_double(s.plate.height_mm) << "\n";
  o << "length_mm = " << format_double(s.plate.length_mm) << "\n";
  o << "width_mm = " << format_double(s.plate.width_mm) << "\n";
  o << "mass_kg = " << format_double(s.plate.mass_kg) << "\n";
  o << "com_offset_mm = " << format_double(s.plate.com_offset_mm.x) << ", "
    << format_double(s.plate.com_offset_mm.y) << "\n";
  o << "hook_offset_mm = " << format_double(s.plate.hook_offset_mm.x) << ", "
    << format_double(s.plate.hook_offset_mm.y) << "\n";
  o << "mu0 = " << format_double(s.plate.mu0) << "\n";
  o << "mu1 = " << format_double(s.plate.mu1) << "\n\n";

  o << "[rope]\n";
  o << "pin_mm = " << format_double(s.rope.pin_point.x) << ", "
    << format_double(s.rope.pin_point.y) << ", "
    << format_double(s.rope.pin_point.z) << "\n";
  o << "pulley_ratio = " << format_double(s.rope.pulley_ratio) << "\n";
  o << "element_length_mm = " << format_double(s.rope.element_length_mm)
    << "\n";
  o << "element_radius_mm = " << format_double(s.rope.element_radius_mm)
    << "\n";
  o << "element_count = " << s.initial_element_count << "\n\n";

  write_arm(o, "left", s.left_arm);
  o << "\n";
  write_arm(o, "right", s.right_arm);
  o << "\n";

  o << "[table]\n";
  o << "height_mm = " << format_double(s.table_height_mm) << "\n\n";

  o << "[lift]\n";
  o << "alpha_thld_deg = " << format_double(rad2deg(s.alpha_thld)) << "\n";
  o << "quality_weights = " << format_double(s.quality_weights[0]) << ", "
    << format_double(s.quality_weights[1]) << ", "
    << format_double(s.quality_weights[2]) << "\n";
  o << "goal_samples = " << s.goal_sample_count << "\n";
  o << "noise_sigma_deg = " << format_double(rad2deg(s.noise_sigma_angle))
    << "\n";
  o << "force_proxy_cap = " << format_double(s.force_proxy_cap) << "\n\n";

  o << "[tumble]\n";
  o << "k = " << format_double(s.tumble.k1) << ", "
    << format_double(s.tumble.k2) << ", " << format_double(s.tumble.k3)
    << "\n";
  o << "f1_sq_max = " << format_double(s.tumble.f1_sq_max) << "\n";
  o << "v_max = " << format_double(s.tumble.v_max) << "\n";
  o << "gamma_deg = " << format_double(rad2deg(s.tumble.gamma)) << "\n";
  o << "dt = " << format_double(s.tumble.dt) << "\n";
  o << "n_steps = " << s.tumble.n_steps << "\n";
  o << "enforce_speed = " << (s.tumble.enforce_speed ? 1 : 0) << "\n";
  o << "enforce_direction = " << (s.tumble.enforce_direction ? 1 : 0) << "\n\n";

  o << "[run]\n";
  o << "rng_seed = " << s.rng_seed << "\n";

  for (const ObstacleBox& ob : s.obstacles) {
    o << "\n[obstacle]\n";
    o << "center_mm = " << format_double(ob.center.x) << ", "
      << format_double(ob.center.y) << ", " << format_double(ob.center.z)
      << "\n";
    o << "half_extents_mm = " << format_double(ob.half_extents.x) << ", "
      << format_double(ob.half_extents.y) << ", "
      << format_double(ob.half_extents.z) << "\n";
  }
  return o.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << serialize_scenario(s);
}

namespace {

/// Shared desk rig: the pin hangs over the tumble pivot edge (x = 0), the
/// dual-arm robot stands on the +x side facing the plate, and the crane
/// frame posts flank the rope.
void apply_desk_rig(Scenario& s) {
  s.rope.pin_point = {0.0, 0.0, 1150.0};
  s.rope.pulley_ratio = 6.0;
  s.rope.element_length_mm = 30.0;
  s.rope.element_radius_mm = 6.0;
  s.initial_element_count = 20;
  s.table_height_mm = 0.0;

  ArmSpec left;
  left.name = ArmSide::Left;
  left.shoulder = {120.0, 300.0, 520.0};
  left.reach_min_mm = 150.0;
  left.reach_max_mm = 760.0;
  left.body_segments = {{{120.0, 300.0, 0.0}, {120.0, 300.0, 520.0}}};
  left.parked_hand = {220.0, 430.0, 380.0};

  ArmSpec right;
  right.name = ArmSide::Right;
  right.shoulder = {430.0, -300.0, 520.0};
  right.reach_min_mm = 150.0;
  right.reach_max_mm = 860.0;
  right.body_segments = {{{430.0, -300.0, 0.0}, {430.0, -300.0, 520.0}}};
  right.parked_hand = {530.0, -430.0, 380.0};

  s.left_arm = left;
  s.right_arm = right;

  // Crane frame post on the left side of the rig; it caps the left arm's
  // high goal region, which matters once a tall plate blocks the low one.
  s.obstacles.push_back({{-40.0, 330.0, 900.0}, {60.0, 60.0, 260.0}});

  s.goal_sample_count = 200;
  s.quality_weights = {1.0, 1.0, 1.0};
  s.noise_sigma_angle = 0.0;
  s.rng_seed = 7;

  s.tumble.k1 = s.tumble.k2 = s.tumble.k3 = 1.0;
  s.tumble.f1_sq_max = 1600.0;  // |F1| <= 40 N at desk scale
  s.tumble.v_max = 30.0;
  s.tumble.gamma = deg2rad(20.0);
  s.tumble.n_steps = 60;
}

}  // namespace

Scenario make_reference_scenario(const std::string& name) {
  Scenario s;
  s.id = name;
  apply_desk_rig(s);
  PlateSpec& p = s.plate;
  if (name == "acrylic_board") {
    p.name = "Acrylic Board";
    p.height_mm = 300.0;
    p.length_mm = 300.0;
    p.width_mm = 40.0;
    p.mass_kg = 4.0;
    p.mu0 = 0.5;
    p.mu1 = 0.4;
    s.alpha_thld = deg2rad(70.0);
  } else if (name == "stainless_box") {
    p.name = "Stainless Box";
    p.height_mm = 300.0;
    p.length_mm = 400.0;
    p.width_mm = 150.0;
    p.mass_kg = 6.0;
    p.mu0 = 0.4;
    p.mu1 = 0.1;
    // The hook apex for this cross-section is atan(300/150) = 63.4 deg, so
    // the lift threshold has to stay below it.
    s.alpha_thld = deg2rad(60.0);
  } else if (name == "plywood_board") {
    p.name = "Plywood Board";
    p.height_mm = 500.0;
    p.length_mm = 400.0;
    p.width_mm = 44.0;
    p.mass_kg = 6.4;
    p.mu0 = 0.6;
    p.mu1 = 0.3;
    s.alpha_thld = deg2rad(70.0);
  } else {
    throw std::runtime_error("unknown reference scenario: " + name);
  }
  p.com_offset_mm = {p.height_mm / 2.0, p.width_mm / 2.0};
  p.hook_offset_mm = {0.0, p.width_mm};
  return s;
}

}  // namespace craneplan
