#include "imgep/tool_use_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace imgep {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-sample dimension of each object, in outcome order.
constexpr std::array<std::size_t, 15> kObjectDims{3, 2, 2, 2, 2, 1, 1, 2, 2, 3, 3, 2, 2, 2, 2};

// Exported values of the six static objects (right hand, camera, arena, toy, button, lamp).
constexpr std::array<double, 3> kRightHand{-0.45, -0.55, -0.3};
constexpr std::array<double, 3> kCamera{0.2, 0.8, 0.9};
constexpr std::array<double, 2> kArena{0.6, 0.0};
constexpr std::array<double, 2> kYellowToy{0.9, -0.7};
constexpr std::array<double, 2> kRedButton{-0.8, 0.75};
constexpr std::array<double, 2> kLamp{0.1, -0.95};

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return std::clamp(a, -kPi, kPi);
}

double deadzone(double v, double dz) {
  const double m = std::abs(v);
  if (m <= dz) return 0.0;
  return std::copysign((m - dz) / (1.0 - dz), v);
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
}
Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
}
Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid environment config: " + what);
}

std::vector<double> to_vec(const auto& arr) { return {arr.begin(), arr.end()}; }

template <std::size_t N>
std::array<double, N> to_array(const std::vector<double>& v, const std::string& key) {
  if (v.size() != N)
    throw ConfigError("config key '" + key + "' expects " + std::to_string(N) + " values");
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

// -- config ------------------------------------------------------------------

void ToolUseConfig::validate() const {
  dmp.validate();
  check(dmp.n_steps >= samples_per_object && samples_per_object > 0,
        "samples_per_object must be in [1, steps]");
  for (double l : link_lengths) check(l > 0.0, "link lengths must be positive");
  for (double r : joint_ranges) check(r > 0.0, "joint ranges must be positive");
  check(joystick_radius > 0.0, "joystick_radius must be positive");
  check(joystick_throw > 0.0, "joystick_throw must be positive");
  check(joystick_return_rate > 0.0 && joystick_return_rate <= 1.0, "joystick_return_rate in (0, 1]");
  check(ergo_rotation_gain > 0.0, "ergo_rotation_gain must be positive");
  check(ergo_deadzone >= 0.0 && ergo_deadzone < 1.0, "ergo_deadzone in [0, 1)");
  check(ergo_extension_rate > 0.0 && ergo_extension_rate <= 1.0, "ergo_extension_rate in (0, 1]");
  check(ergo_tip_min_radius >= 0.0 && ergo_tip_min_radius < ergo_tip_max_radius &&
            ergo_tip_max_radius <= 1.0,
        "0 <= ergo_tip_min_radius < ergo_tip_max_radius <= 1");
  check(ergo_reset_period > 0, "ergo_reset_period must be positive");
  check(ball_contact_radius > 0.0, "ball_contact_radius must be positive");
  check(ball_rest_extension >= 0.0 && ball_rest_extension < ball_border, "ball rest inside border");
  check(ball_slope_rate >= 0.0 && ball_slope_rate < 1.0, "ball_slope_rate in [0, 1)");
  check(ball_friction >= 0.0 && ball_friction < 1.0, "ball_friction in [0, 1)");
  check(ball_radial_friction >= 0.0 && ball_radial_friction < 1.0, "ball_radial_friction in [0, 1)");
  check(ball_border > 0.0 && ball_border <= 1.0, "ball_border in (0, 1]");
  check(light_threshold >= 0.0 && light_scale > 0.0, "light constants");
  check(light_decay > 0.0 && light_decay <= 1.0, "light_decay in (0, 1]");
  check(distractor_noise >= 0.0, "distractor_noise must be non-negative");
}

ToolUseConfig ToolUseConfig::from_config(const KeyValueConfig& kv) {
  ToolUseConfig c;
  c.dmp.n_steps = static_cast<std::size_t>(kv.get_int("dmp.n_steps", static_cast<long long>(c.dmp.n_steps)));
  c.dmp.duration = kv.get_double("dmp.duration", c.dmp.duration);
  c.dmp.alpha_y = kv.get_double("dmp.alpha_y", c.dmp.alpha_y);
  c.dmp.beta_y = kv.get_double("dmp.beta_y", c.dmp.beta_y);
  c.dmp.weight_gain = kv.get_double("dmp.weight_gain", c.dmp.weight_gain);
  c.dmp.substeps = static_cast<std::size_t>(kv.get_int("dmp.substeps", static_cast<long long>(c.dmp.substeps)));
  if (kv.has("dmp.alpha_x")) {
    // Basis centers follow the canonical system, so rebuild them.
    const auto fresh = dmp::DmpConfig::standard(kv.get_double("dmp.alpha_x", c.dmp.alpha_x));
    c.dmp.alpha_x = fresh.alpha_x;
    c.dmp.centers = fresh.centers;
    c.dmp.widths = fresh.widths;
  }

  c.link_lengths = to_array<4>(kv.get_doubles("env.link_lengths", to_vec(c.link_lengths)), "env.link_lengths");
  c.joint_ranges = to_array<4>(kv.get_doubles("env.joint_ranges", to_vec(c.joint_ranges)), "env.joint_ranges");
  c.left_joystick = to_array<3>(kv.get_doubles("env.left_joystick", to_vec(c.left_joystick)), "env.left_joystick");
  c.right_joystick = to_array<3>(kv.get_doubles("env.right_joystick", to_vec(c.right_joystick)), "env.right_joystick");
  c.joystick_radius = kv.get_double("env.joystick_radius", c.joystick_radius);
  c.joystick_throw = kv.get_double("env.joystick_throw", c.joystick_throw);
  c.joystick_return_rate = kv.get_double("env.joystick_return_rate", c.joystick_return_rate);
  c.ergo_rotation_gain = kv.get_double("env.ergo_rotation_gain", c.ergo_rotation_gain);
  c.ergo_deadzone = kv.get_double("env.ergo_deadzone", c.ergo_deadzone);
  c.ergo_extension_rate = kv.get_double("env.ergo_extension_rate", c.ergo_extension_rate);
  c.ergo_tip_min_radius = kv.get_double("env.ergo_tip_min_radius", c.ergo_tip_min_radius);
  c.ergo_tip_max_radius = kv.get_double("env.ergo_tip_max_radius", c.ergo_tip_max_radius);
  c.ergo_reset_period = static_cast<int>(kv.get_int("env.ergo_reset_period", c.ergo_reset_period));
  c.ball_contact_radius = kv.get_double("env.ball_contact_radius", c.ball_contact_radius);
  c.ball_rest_extension = kv.get_double("env.ball_rest_extension", c.ball_rest_extension);
  c.ball_angle_offset = kv.get_double("env.ball_angle_offset", c.ball_angle_offset);
  c.ball_slope_rate = kv.get_double("env.ball_slope_rate", c.ball_slope_rate);
  c.ball_friction = kv.get_double("env.ball_friction", c.ball_friction);
  c.ball_radial_friction = kv.get_double("env.ball_radial_friction", c.ball_radial_friction);
  c.ball_border = kv.get_double("env.ball_border", c.ball_border);
  c.ergo_arm_contact = kv.get_bool("env.ergo_arm_contact", c.ergo_arm_contact);
  c.light_threshold = kv.get_double("env.light_threshold", c.light_threshold);
  c.light_scale = kv.get_double("env.light_scale", c.light_scale);
  c.light_decay = kv.get_double("env.light_decay", c.light_decay);
  c.distractor_noise = kv.get_double("env.distractor_noise", c.distractor_noise);
  c.samples_per_object =
      static_cast<std::size_t>(kv.get_int("env.samples_per_object", static_cast<long long>(c.samples_per_object)));
  c.validate();
  return c;
}

void ToolUseConfig::write_to(KeyValueConfig& kv) const {
  kv.set("dmp.n_steps", static_cast<long long>(dmp.n_steps));
  kv.set("dmp.duration", dmp.duration);
  kv.set("dmp.alpha_y", dmp.alpha_y);
  kv.set("dmp.beta_y", dmp.beta_y);
  kv.set("dmp.alpha_x", dmp.alpha_x);
  kv.set("dmp.weight_gain", dmp.weight_gain);
  kv.set("dmp.substeps", static_cast<long long>(dmp.substeps));
  kv.set("env.link_lengths", to_vec(link_lengths));
  kv.set("env.joint_ranges", to_vec(joint_ranges));
  kv.set("env.left_joystick", to_vec(left_joystick));
  kv.set("env.right_joystick", to_vec(right_joystick));
  kv.set("env.joystick_radius", joystick_radius);
  kv.set("env.joystick_throw", joystick_throw);
  kv.set("env.joystick_return_rate", joystick_return_rate);
  kv.set("env.ergo_rotation_gain", ergo_rotation_gain);
  kv.set("env.ergo_deadzone", ergo_deadzone);
  kv.set("env.ergo_extension_rate", ergo_extension_rate);
  kv.set("env.ergo_tip_min_radius", ergo_tip_min_radius);
  kv.set("env.ergo_tip_max_radius", ergo_tip_max_radius);
  kv.set("env.ergo_reset_period", static_cast<long long>(ergo_reset_period));
  kv.set("env.ball_contact_radius", ball_contact_radius);
  kv.set("env.ball_rest_extension", ball_rest_extension);
  kv.set("env.ball_angle_offset", ball_angle_offset);
  kv.set("env.ball_slope_rate", ball_slope_rate);
  kv.set("env.ball_friction", ball_friction);
  kv.set("env.ball_radial_friction", ball_radial_friction);
  kv.set("env.ball_border", ball_border);
  kv.set("env.ergo_arm_contact", ergo_arm_contact);
  kv.set("env.light_threshold", light_threshold);
  kv.set("env.light_scale", light_scale);
  kv.set("env.light_decay", light_decay);
  kv.set("env.distractor_noise", distractor_noise);
  kv.set("env.samples_per_object", static_cast<long long>(samples_per_object));
}

// -- environment ---------------------------------------------------------------

const std::array<const char*, 15>& ToolUseEnv::object_names() {
  static const std::array<const char*, 15> names{
      "hand",       "left_joystick", "right_joystick", "ergo",       "ball",
      "light",      "sound",         "distractor_1",   "distractor_2", "right_hand",
      "camera",     "arena",         "yellow_toy",     "red_button", "lamp"};
  return names;
}

GoalSpaceRegistry ToolUseEnv::make_registry(std::size_t samples) {
  std::vector<GoalSpaceSpec> specs;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < kObjectDims.size(); ++i) {
    const std::size_t vars = kObjectDims[i];
    const std::size_t bins = vars == 3 ? 20 : vars == 2 ? 10 : 100;
    specs.push_back(make_box_space(static_cast<int>(i) + 1, object_names()[i], offset, vars, samples, bins));
    offset += vars * samples;
  }
  return GoalSpaceRegistry(std::move(specs));
}

ToolUseEnv::ToolUseEnv(ToolUseConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  spaces_ = make_registry(cfg_.samples_per_object);
  state_.ball_extension = cfg_.ball_rest_extension;
}

std::unique_ptr<Environment> ToolUseEnv::clone() const { return std::make_unique<ToolUseEnv>(*this); }

Context ToolUseEnv::sample_context() const {
  return Context{{state_.ergo_rotation / kPi, state_.ball_rotation / kPi}};
}

void ToolUseEnv::set_state(const Context& c) { set_state(c, cfg_.ball_rest_extension); }

void ToolUseEnv::set_state(const Context& c, double ball_extension) {
  if (c.size() != 2) throw std::invalid_argument("tool-use context has 2 components");
  for (double v : c.values)
    if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("context component outside [-1, 1]");
  if (!(ball_extension >= 0.0 && ball_extension <= 1.0))
    throw std::invalid_argument("ball extension outside [0, 1]");
  const long long episodes = state_.episodes;
  state_ = ToolUseState{};
  state_.episodes = episodes;
  state_.ergo_rotation = c.values[0] * kPi;
  state_.ball_rotation = c.values[1] * kPi;
  state_.ball_extension = ball_extension;
}

std::array<double, 3> ToolUseEnv::forward_kinematics(const std::array<double, 4>& a) const {
  const std::array<Mat3, 4> joints{rot_y(a[0] * cfg_.joint_ranges[0]), rot_x(a[1] * cfg_.joint_ranges[1]),
                                   rot_z(a[2] * cfg_.joint_ranges[2]), rot_y(a[3] * cfg_.joint_ranges[3])};
  Mat3 m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::array<double, 3> p{};
  for (std::size_t i = 0; i < 4; ++i) {
    m = mul(m, joints[i]);
    // Links hang along -z in their local frame.
    for (int r = 0; r < 3; ++r) p[r] -= m[r][2] * cfg_.link_lengths[i];
  }
  return p;
}

void ToolUseEnv::step(const std::array<double, 4>& actions, Rng& rng) {
  auto& s = state_;
  s.joints = actions;
  s.hand = forward_kinematics(actions);

  auto update_joystick = [&](const std::array<double, 3>& base, std::array<double, 2>& defl) {
    const double dx = s.hand[0] - base[0];
    const double dy = s.hand[1] - base[1];
    const double dz = s.hand[2] - base[2];
    if (std::sqrt(dx * dx + dy * dy + dz * dz) < cfg_.joystick_radius) {
      defl[0] = std::clamp(dx / cfg_.joystick_throw, -1.0, 1.0);
      defl[1] = std::clamp(dy / cfg_.joystick_throw, -1.0, 1.0);
      return true;
    }
    defl[0] *= 1.0 - cfg_.joystick_return_rate;
    defl[1] *= 1.0 - cfg_.joystick_return_rate;
    return false;
  };
  log_.left_joystick_touched |= update_joystick(cfg_.left_joystick, s.left_joystick);
  log_.right_joystick_touched |= update_joystick(cfg_.right_joystick, s.right_joystick);

  // Ergo: right joystick x drives rotation speed, forward y drives extension.
  const double tip_radius_before =
      cfg_.ergo_tip_min_radius + (cfg_.ergo_tip_max_radius - cfg_.ergo_tip_min_radius) * s.ergo_extension;
  const double omega = cfg_.ergo_rotation_gain * deadzone(s.right_joystick[0], cfg_.ergo_deadzone);
  const double ext_target = std::max(0.0, deadzone(s.right_joystick[1], cfg_.ergo_deadzone));
  if (omega != 0.0 || ext_target > 0.0) log_.ergo_driven = true;
  s.ergo_rotation = wrap_angle(s.ergo_rotation + omega);
  s.ergo_extension += cfg_.ergo_extension_rate * (ext_target - s.ergo_extension);
  const double tip_radius =
      cfg_.ergo_tip_min_radius + (cfg_.ergo_tip_max_radius - cfg_.ergo_tip_min_radius) * s.ergo_extension;

  // Ball: takes the tip's velocity on contact, then rolls with friction down the slope.
  const double tx = tip_radius * std::cos(s.ergo_rotation);
  const double ty = tip_radius * std::sin(s.ergo_rotation);
  const double bx = s.ball_extension * std::cos(s.ball_rotation + cfg_.ball_angle_offset);
  const double by = s.ball_extension * std::sin(s.ball_rotation + cfg_.ball_angle_offset);
  const bool tip_contact = std::hypot(tx - bx, ty - by) < cfg_.ball_contact_radius;
  bool arm_contact = false;
  if (cfg_.ergo_arm_contact) {
    // Distance from the ball to the segment between the centre and the tip.
    const double along = std::clamp((bx * tx + by * ty) / (tip_radius * tip_radius), 0.0, 1.0);
    arm_contact = std::hypot(bx - along * tx, by - along * ty) < cfg_.ball_contact_radius;
  }
  if (tip_contact || arm_contact) {
    log_.ball_contacted = true;
    s.ball_angular_velocity = omega;
  }
  if (tip_contact) s.ball_radial_velocity = std::max(s.ball_radial_velocity, tip_radius - tip_radius_before);
  s.ball_rotation = wrap_angle(s.ball_rotation + s.ball_angular_velocity);
  s.ball_extension += s.ball_radial_velocity;
  s.ball_extension += cfg_.ball_slope_rate * (cfg_.ball_rest_extension - s.ball_extension);
  if (s.ball_extension >= 1.0) {
    s.ball_extension = 1.0;
    s.ball_radial_velocity = -0.5 * s.ball_radial_velocity;
  } else if (s.ball_extension < 0.0) {
    s.ball_extension = 0.0;
    s.ball_radial_velocity = 0.0;
  }
  s.ball_angular_velocity *= cfg_.ball_friction;
  s.ball_radial_velocity *= cfg_.ball_radial_friction;

  // Light follows ball speed above a threshold; sound fires at the border.
  const double speed = std::abs(s.ball_angular_velocity);
  if (speed > cfg_.light_threshold) {
    s.light = std::clamp(speed / cfg_.light_scale, 0.0, 1.0);
    log_.ball_fast = true;
  } else {
    s.light *= 1.0 - cfg_.light_decay;
  }
  if (s.ball_extension >= cfg_.ball_border) {
    s.sound = s.ball_rotation / kPi;
    s.sounding = true;
    log_.ball_at_border = true;
  } else {
    s.sound = 0.0;
    s.sounding = false;
  }

  std::uniform_real_distribution<double> noise(-cfg_.distractor_noise, cfg_.distractor_noise);
  for (auto* d : {&s.distractor1, &s.distractor2})
    for (double& v : *d) v = std::clamp(v + noise(rng), -1.0, 1.0);
}

Vector ToolUseEnv::observe() const {
  const auto& s = state_;
  const double reach = cfg_.link_lengths[0] + cfg_.link_lengths[1] + cfg_.link_lengths[2] + cfg_.link_lengths[3];
  Vector v;
  v.reserve(kStateDim);
  for (double h : s.hand) v.push_back(std::clamp(h / reach, -1.0, 1.0));
  v.insert(v.end(), s.left_joystick.begin(), s.left_joystick.end());
  v.insert(v.end(), s.right_joystick.begin(), s.right_joystick.end());
  v.push_back(s.ergo_rotation / kPi);
  v.push_back(2.0 * s.ergo_extension - 1.0);
  v.push_back(s.ball_rotation / kPi);
  v.push_back(2.0 * s.ball_extension - 1.0);
  v.push_back(2.0 * s.light - 1.0);
  // Silence sits at the bottom of the range so that a pitch of 0 stays distinguishable.
  v.push_back(s.sounding ? s.sound : -1.0);
  v.insert(v.end(), s.distractor1.begin(), s.distractor1.end());
  v.insert(v.end(), s.distractor2.begin(), s.distractor2.end());
  v.insert(v.end(), kRightHand.begin(), kRightHand.end());
  v.insert(v.end(), kCamera.begin(), kCamera.end());
  v.insert(v.end(), kArena.begin(), kArena.end());
  v.insert(v.end(), kYellowToy.begin(), kYellowToy.end());
  v.insert(v.end(), kRedButton.begin(), kRedButton.end());
  v.insert(v.end(), kLamp.begin(), kLamp.end());
  return v;
}

double ToolUseEnv::exported_rest_ball_extension() const { return 2.0 * cfg_.ball_rest_extension - 1.0; }

RolloutResult ToolUseEnv::rollout(const PolicyParams& theta, Rng& rng) {
  if (theta.size() != theta_dim()) throw std::invalid_argument("tool-use policy needs 32 parameters");
  log_ = {};
  const auto actions = dmp::rollout_arm(theta.values, cfg_.dmp);

  RolloutResult res;
  res.trajectory.states.reserve(actions.size());
  res.trajectory.actions.reserve(actions.size());
  for (const auto& a : actions) {
    step(a, rng);
    res.trajectory.actions.emplace_back(a.begin(), a.end());
    res.trajectory.states.push_back(observe());
  }

  // Outcome: evenly spaced samples ending on the last step, object by object.
  const std::size_t n = cfg_.dmp.n_steps;
  const std::size_t m = cfg_.samples_per_object;
  std::vector<std::size_t> sample_idx(m);
  for (std::size_t k = 0; k < m; ++k) sample_idx[k] = (k + 1) * n / m - 1;

  res.outcome.full.reserve(spaces_.total_dim());
  std::size_t state_offset = 0;
  for (std::size_t obj = 0; obj < kObjectDims.size(); ++obj) {
    for (std::size_t idx : sample_idx) {
      const auto& st = res.trajectory.states[idx];
      res.outcome.full.insert(res.outcome.full.end(), st.begin() + static_cast<std::ptrdiff_t>(state_offset),
                              st.begin() + static_cast<std::ptrdiff_t>(state_offset + kObjectDims[obj]));
    }
    state_offset += kObjectDims[obj];
  }

  reset_after_rollout();
  return res;
}

void ToolUseEnv::reset_after_rollout() {
  auto& s = state_;
  s.joints = {};
  s.hand = {};
  s.left_joystick = {};
  s.right_joystick = {};
  s.ergo_extension = 0.0;
  s.ball_extension = cfg_.ball_rest_extension;
  s.ball_angular_velocity = 0.0;
  s.ball_radial_velocity = 0.0;
  s.light = 0.0;
  s.sound = 0.0;
  s.sounding = false;
  s.distractor1 = {};
  s.distractor2 = {};
  ++s.episodes;
  if (s.episodes % cfg_.ergo_reset_period == 0) s.ergo_rotation = 0.0;
}

std::optional<Vector> ToolUseEnv::rest_slice(int id, const Context& c) const {
  if (c.size() != 2) throw std::invalid_argument("tool-use context has 2 components");
  const auto& spec = spaces_.at(id);
  std::vector<double> sample;
  const double reach = cfg_.link_lengths[0] + cfg_.link_lengths[1] + cfg_.link_lengths[2] + cfg_.link_lengths[3];
  switch (static_cast<ToolUseObject>(id)) {
    case ToolUseObject::kHand: {
      const auto h = forward_kinematics({0, 0, 0, 0});
      for (double v : h) sample.push_back(std::clamp(v / reach, -1.0, 1.0));
      break;
    }
    case ToolUseObject::kLeftJoystick:
    case ToolUseObject::kRightJoystick: sample = {0.0, 0.0}; break;
    case ToolUseObject::kErgo: sample = {c.values[0], -1.0}; break;
    case ToolUseObject::kBall: sample = {c.values[1], exported_rest_ball_extension()}; break;
    case ToolUseObject::kLight: sample = {-1.0}; break;
    case ToolUseObject::kSound: sample = {-1.0}; break;
    case ToolUseObject::kDistractor1:
    case ToolUseObject::kDistractor2: return std::nullopt;
    case ToolUseObject::kRightHand: sample = {kRightHand.begin(), kRightHand.end()}; break;
    case ToolUseObject::kCamera: sample = {kCamera.begin(), kCamera.end()}; break;
    case ToolUseObject::kArena: sample = {kArena.begin(), kArena.end()}; break;
    case ToolUseObject::kYellowToy: sample = {kYellowToy.begin(), kYellowToy.end()}; break;
    case ToolUseObject::kRedButton: sample = {kRedButton.begin(), kRedButton.end()}; break;
    case ToolUseObject::kLamp: sample = {kLamp.begin(), kLamp.end()}; break;
  }
  Vector out;
  out.reserve(spec.dim);
  for (std::size_t k = 0; k < spec.coverage.samples; ++k) out.insert(out.end(), sample.begin(), sample.end());
  return out;
}

}  // namespace imgep
