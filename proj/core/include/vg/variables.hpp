#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vg {

// Coordinate roles. Inhomogeneous charts use x, y1..yn, dy1..dyn, ddy1..ddyn;
// homogeneous charts use x0..xn, u0..un (velocities), a0..an (accelerations).
enum class VarClass : std::uint8_t {
  Indep,     // x
  Fiber,     // y<i>, i >= 1
  FiberVel,  // dy<i>
  FiberAcc,  // ddy<i>
  HPos,      // x<i>, i >= 0
  HVel,      // u<i>
  HAcc,      // a<i>
};

struct Var {
  VarClass cls;
  int idx;

  friend auto operator<=>(const Var&, const Var&) = default;
};

std::string name(Var v);
std::optional<Var> var_from_name(std::string_view s);

struct VariableSpace {
  enum class Kind { Inhomogeneous, Homogeneous };

  Kind kind;
  int n;  // fiber dimension; homogeneous spaces have coordinates 0..n

  static VariableSpace inhomogeneous(int n) { return {Kind::Inhomogeneous, n}; }
  static VariableSpace homogeneous(int n) { return {Kind::Homogeneous, n}; }

  bool contains(Var v) const;

  // Position+velocity variables (the jet variables structures may depend on).
  std::vector<Var> base_vars() const;
  // Everything, accelerations included.
  std::vector<Var> all_vars() const;
  std::vector<Var> velocity_vars() const;
  std::vector<Var> acceleration_vars() const;

  friend bool operator==(const VariableSpace&, const VariableSpace&) = default;
};

}  // namespace vg
