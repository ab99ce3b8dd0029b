#pragma once

// Cech cohomology of the central-fiber tangent sheaf on the two-chart cover.
// With two charts every overlap section is a cocycle, so H1 is the overlap
// window modulo the coboundary image; H0 is the kernel of the coboundary map.

#include <string>
#include <vector>

#include "f2v/charts.hpp"

namespace f2v {

struct WindowComputation {
  int window = 0;        // overlap sections keep v-exponents in [-window, window]
  int degree_bound = 0;  // chart-pair polynomial degree feeding the coboundary
  size_t section_dim = 0;
  size_t coboundary_dim = 0;
  size_t h1 = 0;
  bool slot_excluded = false;
};

// H1 restricted to one window. Chart pairs of degree window + 3 already
// produce every coboundary that lands inside the window, so widening the
// bound cannot change the answer. `exclude_obstruction_slot` deletes the
// (d/dy, v^-1) slot from the window before taking the quotient.
WindowComputation h1_window(const GluedFamily& fam, int window,
                            bool exclude_obstruction_slot = false);

// Kernel dimension of the full coboundary map on chart pairs of the given
// degree, i.e. the global fields of the central fiber.
size_t h0_dimension(const GluedFamily& fam, int degree_bound);

// Exact solvability of delta(pair) == section over chart pairs of degree
// window + 3. The section lives on the overlap in primed coordinates.
bool is_coboundary(const GluedFamily& fam, const Derivation& section, int window);

// eps-derivative of the family transition at t=0: the first-order deformation
// class as an overlap section in primed coordinates.
Derivation deformation_cocycle(const GluedFamily& fam);

struct CohomologyReport {
  size_t h0 = 0;
  std::vector<WindowComputation> windows;
  bool stabilized = false;  // at least two windows, all agreeing on h1
  size_t h1 = 0;            // common value when stabilized, else largest window's
  std::string cocycle;      // printable form of the deformation class
  bool cocycle_is_coboundary = false;
  size_t h1_excluding_slot = 0;  // largest window with the v^-1 d/dy slot removed
};

CohomologyReport cohomology_report(const GluedFamily& fam,
                                   const std::vector<int>& windows);

}  // namespace f2v
