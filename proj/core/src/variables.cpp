#include "vg/variables.hpp"

#include <charconv>
#include <stdexcept>

namespace vg {

std::string name(Var v) {
  switch (v.cls) {
    case VarClass::Indep:
      return "x";
    case VarClass::Fiber:
      return "y" + std::to_string(v.idx);
    case VarClass::FiberVel:
      return "dy" + std::to_string(v.idx);
    case VarClass::FiberAcc:
      return "ddy" + std::to_string(v.idx);
    case VarClass::HPos:
      return "x" + std::to_string(v.idx);
    case VarClass::HVel:
      return "u" + std::to_string(v.idx);
    case VarClass::HAcc:
      return "a" + std::to_string(v.idx);
  }
  throw std::logic_error("bad VarClass");
}

namespace {

std::optional<int> parse_index(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  if (digits.size() > 1 && digits.front() == '0') return std::nullopt;  // no leading zeros
  int value = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Var> var_from_name(std::string_view s) {
  if (s == "x") return Var{VarClass::Indep, 0};
  auto tail_var = [&](std::string_view prefix, VarClass cls, int min_idx) -> std::optional<Var> {
    if (s.size() <= prefix.size() || s.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto idx = parse_index(s.substr(prefix.size()));
    if (!idx || *idx < min_idx) return std::nullopt;
    return Var{cls, *idx};
  };
  // Longest prefix first so "ddy1" is not read as "d" + "dy1".
  if (auto v = tail_var("ddy", VarClass::FiberAcc, 1)) return v;
  if (auto v = tail_var("dy", VarClass::FiberVel, 1)) return v;
  if (auto v = tail_var("y", VarClass::Fiber, 1)) return v;
  if (auto v = tail_var("x", VarClass::HPos, 0)) return v;
  if (auto v = tail_var("u", VarClass::HVel, 0)) return v;
  if (auto v = tail_var("a", VarClass::HAcc, 0)) return v;
  return std::nullopt;
}

bool VariableSpace::contains(Var v) const {
  if (kind == Kind::Inhomogeneous) {
    switch (v.cls) {
      case VarClass::Indep:
        return true;
      case VarClass::Fiber:
      case VarClass::FiberVel:
      case VarClass::FiberAcc:
        return v.idx >= 1 && v.idx <= n;
      default:
        return false;
    }
  }
  switch (v.cls) {
    case VarClass::HPos:
    case VarClass::HVel:
    case VarClass::HAcc:
      return v.idx >= 0 && v.idx <= n;
    default:
      return false;
  }
}

std::vector<Var> VariableSpace::base_vars() const {
  std::vector<Var> out;
  if (kind == Kind::Inhomogeneous) {
    out.push_back({VarClass::Indep, 0});
    for (int i = 1; i <= n; ++i) out.push_back({VarClass::Fiber, i});
    for (int i = 1; i <= n; ++i) out.push_back({VarClass::FiberVel, i});
  } else {
    for (int i = 0; i <= n; ++i) out.push_back({VarClass::HPos, i});
    for (int i = 0; i <= n; ++i) out.push_back({VarClass::HVel, i});
  }
  return out;
}

std::vector<Var> VariableSpace::all_vars() const {
  std::vector<Var> out = base_vars();
  auto acc = acceleration_vars();
  out.insert(out.end(), acc.begin(), acc.end());
  return out;
}

std::vector<Var> VariableSpace::velocity_vars() const {
  std::vector<Var> out;
  if (kind == Kind::Inhomogeneous) {
    for (int i = 1; i <= n; ++i) out.push_back({VarClass::FiberVel, i});
  } else {
    for (int i = 0; i <= n; ++i) out.push_back({VarClass::HVel, i});
  }
  return out;
}

std::vector<Var> VariableSpace::acceleration_vars() const {
  std::vector<Var> out;
  if (kind == Kind::Inhomogeneous) {
    for (int i = 1; i <= n; ++i) out.push_back({VarClass::FiberAcc, i});
  } else {
    for (int i = 0; i <= n; ++i) out.push_back({VarClass::HAcc, i});
  }
  return out;
}

}  // namespace vg
