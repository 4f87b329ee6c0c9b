#pragma once

#include "vg/douglas.hpp"
#include "vg/structures.hpp"

namespace vg {

struct UnknownCatalogIdError : std::runtime_error {
  explicit UnknownCatalogIdError(const std::string& msg) : std::runtime_error(msg) {}
};

// A named fixture: a structure (in one or several presentations), an optional
// companion Lagrangian, sampling hints, and recorded expectations.
struct CatalogEntry {
  std::string id;
  int n = 0;
  std::string description;

  std::optional<PathStructure> structure;
  std::optional<HomogeneousStructure> homogeneous;
  std::optional<ChristoffelTable> christoffel;
  std::optional<Lagrangian> lagrangian;

  SampleDomain domain;                       // sampling hints for numeric checks
  std::optional<EvalPoint> distinguished_point;
  std::optional<Verdict::Kind> expected_verdict;
  int levels = 1;
};

// Parametric fixture families; `n` <= 0 selects the entry's default dimension.
CatalogEntry catalog_get(const std::string& id, int n = 0);
std::vector<std::string> catalog_ids();

// The shipped psi-family of homogeneous Lagrangians psi0(w) u0 + psi1(w) u1
// with w = u2/u0; `index` in [0, count).
int egorov_psi_pair_count();
HomLagrangian egorov_psi_lagrangian(int n, int index);

}  // namespace vg
