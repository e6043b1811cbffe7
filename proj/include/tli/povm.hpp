#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tli/fock_basis.hpp"
#include "tli/thermal_model.hpp"

namespace tli {

// Measurement schemes covered by the catalog. "direct" interferes the modes
// on a 50-50 beam splitter and counts photons (nonlocal); "entangled" is the
// shared-ancilla variant of the same interference; heterodyne and homodyne
// are local field measurements at the two sites.
enum class Scheme { direct, entangled, heterodyne, homodyne };

std::string_view scheme_name(Scheme scheme);
Scheme scheme_from_name(std::string_view name);

// Signals an inconsistent POVM (non-Hermitian / non-PSD element, broken
// completeness, or probabilities that fail to normalize).
struct povm_consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-outcome measurement: labeled elements on the shared Fock basis,
// complete on the leading `subspace_dim` basis states.
struct DiscretePovm {
  std::vector<std::string> labels;
  std::vector<Matrix4c> elements;
  int subspace_dim = kFockDim;
};

// Beam-splitter photon counting with phase delta on the b arm. Outcomes
// (0,0), (1,0), (0,1); the one-photon elements are rank one.
DiscretePovm direct_detection_povm(double delta);

// Local interference against a shared path-entangled ancilla pair. Outcomes
// y0..y4; y3 and y4 equal half of direct detection's (1,0) and (0,1)
// elements, the rest carry no coherence information.
DiscretePovm shared_entanglement_povm(double delta);

// Throws povm_consistency_error unless every element is Hermitian PSD and the
// family sums to the identity on its declared subspace.
void validate_povm(const DiscretePovm& povm);

// POVM matrix elements of a continuous-outcome scheme at one outcome point.
// e01_10 = <0,1|E|1,0>; <1,0|E|0,1> is its conjugate.
struct KernelElements {
  double e00_00 = 0.0;
  double e01_01 = 0.0;
  double e10_10 = 0.0;
  double e11_11 = 0.0;
  Complex e01_10{0.0, 0.0};
};

// Coherent-state projection (1/pi^2)|mu,nu><mu,nu| element values.
KernelElements heterodyne_matrix_elements(Complex mu, Complex nu);

// Quadrature projection |x,y><x,y| element values with local oscillator
// phases delta_a, delta_b; only delta = delta_a - delta_b enters.
KernelElements homodyne_matrix_elements(double x, double y, double delta_a,
                                        double delta_b);

// Quadrature grid for continuous outcomes: trapezoidal weights, `points`
// nodes per reduced axis, extent in raw outcome units (the vacuum outcome
// standard deviation is ~0.7, so the default reaches past 8 sigma).
struct GridSpec {
  double extent = 6.0;
  int points = 201;
};

// A continuous-outcome measurement: closed-form matrix-element kernels plus
// the quadrature grid used for integrals. Heterodyne outcomes are reduced to
// (|mu|, |nu|, arg(mu* nu)) since every integrand only depends on those;
// homodyne outcomes are the plane (x, y).
struct ContinuousPovmKernel {
  Scheme scheme = Scheme::heterodyne;
  double delta_a = 0.0;
  double delta_b = 0.0;
  GridSpec grid;

  // grid axes (nodes + trapezoid weights), filled by the factories
  std::vector<double> ax1_node, ax1_weight;  // |mu| in [0, extent] or x
  std::vector<double> ax2_node, ax2_weight;  // |nu| in [0, extent] or y
  std::vector<double> ax3_node, ax3_weight;  // arg(mu* nu) in [0, 2pi] (heterodyne)

  std::size_t node_count() const;
  // Element values and integration weight at a flattened grid index. The
  // weight includes the reduced measure (2 pi r1 r2 for heterodyne).
  KernelElements node_elements(std::size_t index) const;
  double node_weight(std::size_t index) const;
};

ContinuousPovmKernel heterodyne_kernel(GridSpec grid = {});
ContinuousPovmKernel homodyne_kernel(double delta_a, double delta_b,
                                     GridSpec grid = {});

// Outcome law of a measurement: labels (discrete) or implicit grid nodes
// (continuous), quadrature weights (1 for discrete), and probability values
// (densities for continuous). sum(weight * density) is 1 up to tolerance.
struct OutcomeDistribution {
  std::vector<std::string> labels;
  std::vector<double> weight;
  std::vector<double> density;

  std::size_t size() const { return density.size(); }
  double total_mass() const;
};

OutcomeDistribution born_distribution(const FockDensityOperator& rho,
                                      const DiscretePovm& povm);
OutcomeDistribution born_distribution(const FockDensityOperator& rho,
                                      const ContinuousPovmKernel& kernel);

// Cauchy-Schwarz separability certificate on a POVM element:
// |<1,0|E|0,1>|^2 <= <0,0|E|0,0> <1,1|E|1,1> holds for every element of a
// local (LOCC) measurement. slack = rhs - lhs; a negative slack beyond
// tolerance certifies that the element cannot come from a local scheme.
struct PptReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool satisfied = true;
};

PptReport check_ppt_cauchy_schwarz(const Matrix4c& element);
PptReport check_ppt_cauchy_schwarz(const KernelElements& elements);

// Minimum-slack report over every node of the kernel's grid.
PptReport worst_grid_ppt(const ContinuousPovmKernel& kernel);

// Coherent-state sandwich of a POVM element: the semiclassical likelihood of
// an outcome given classical fields.
double husimi_heterodyne(Complex mu, Complex nu, const FieldSample& fields);
// Product Poissonian in the beam-splitter output fields (u, v).
double husimi_direct(int n, int m, const FieldSample& fields, double delta);

}  // namespace tli
