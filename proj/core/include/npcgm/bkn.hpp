#pragma once

#include <npcgm/config_graph.hpp>
#include <npcgm/current.hpp>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace npcgm {

// Candidate solution of the gluing equations in the symmetric
// parametrization: one potential per vertex, one nonnegative weight per end.
// The working quantities are derived:
//
//   u_d = exp(t_{v(d)} - t_{v(bar d)})      ratio across the end
//   gamma_d = cos(sqrt(omega_d + omega_{bar d}))   cosine at the wall
//
// so u_d u_{bar d} = 1 and gamma_d = gamma_{bar d} hold by construction, and
// the log sums around cycles telescope to zero identically.
struct BknCandidate {
  std::vector<double> t;      // per vertex
  std::vector<double> omega;  // per end, >= 0
};

std::vector<double> end_ratios(const ConfigGraph& g, const BknCandidate& c);
std::vector<double> end_cosines(const ConfigGraph& g, const BknCandidate& c);

// Entire functions cos(sqrt(z)) and sin(sqrt(z))/(2 sqrt(z)), evaluated
// through their even power series near zero to dodge cancellation.
double cos_sqrt(double z);
double half_sinc_sqrt(double z);

// Smallest w >= 0 with cos(sqrt(2w)) = gamma; requires |gamma| <= 1.
double omega_for_cosine(double gamma);

struct BknReport {
  std::vector<double> vertex_residual;  // |sum over ends at v of (1 - u gamma)/b|
  std::vector<double> cycle_residual;   // |sum of log u| per fundamental cycle
  bool cycles_telescope = false;        // per-vertex potential coefficients cancel exactly
  double symmetry_defect = 0.0;         // max |u_d u_{bar d} - 1| and cosine mismatch
  double margin = 0.0;                  // min over ends of 1 - |gamma|
  double min_omega = 0.0;
  bool pass = false;

  double max_vertex_residual() const;
  double max_cycle_residual() const;
};

// Residuals of the vertex and cycle equations, the nondegeneracy margin, and
// the symbolic telescoping check. Throws Error("MalformedCandidate") on size
// mismatches, negative weights, or non-finite entries.
BknReport verify(const ConfigGraph& g, const BknCandidate& c, double tol);

// Candidate on the perturbation curve through a nondegenerate current
// solution: potentials integrate the weighted end values along a spanning
// tree and the weights open the walls at speed s. Throws
// Error("DegenerateInput") when a value vanishes (or s = 0) and
// Error("PotentialInconsistency") when the weighted differences do not
// integrate, which certified inputs never trigger.
BknCandidate from_current(const ConfigGraph& g, const CurrentSolution& x, double s);

struct RefineResult {
  BknCandidate candidate;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max vertex residual of the returned candidate
};

// Damped least-squares correction of the weights and potentials. The cycle
// sums stay exact for any potentials (log u telescopes), and the potentials
// are needed: the weight columns alone annihilate a fixed covector, leaving
// part of the residual unreachable. Non-convergence comes back flagged with
// the best iterate. Throws Error("MarginLoss") when the input margin is not
// positive or every step toward the target collapses a wall.
RefineResult newton_refine(const ConfigGraph& g, const BknCandidate& c, double tol);

// Scale-per-vertex presentation: a_v > 0 and one cosine per edge.
struct GeneralForm {
  std::vector<double> a;        // per vertex
  std::vector<double> gamma_e;  // per edge
};

// Per-end presentation with explicit ratios.
struct AffineForm {
  std::vector<double> u;      // per end
  std::vector<double> gamma;  // per end
};

// u_d = a at the far vertex over a at the near one; edge cosines pick up the
// sign of the multiplicity. Throws Error("ZeroVertexWeight") when some a_v
// vanishes.
AffineForm to_affine(const ConfigGraph& g, const GeneralForm& gen);

// Inverse up to global scale: weights recovered along a spanning tree, every
// off-tree ratio rechecked. Throws Error("CycleInconsistent") when the
// ratios fail to integrate within tol.
GeneralForm to_general(const ConfigGraph& g, const AffineForm& aff, double tol);

// Symmetric candidate with the given ratios and cosines, when consistent.
BknCandidate candidate_from_affine(const ConfigGraph& g, const AffineForm& aff, double tol);

// Ray classes spanning the wall at each end, in the ([f],[z]) basis of the
// boundary torus. The gluing acts by [[1,0],[b,-1]] on these coordinates.
struct ThetaClasses {
  std::vector<std::array<double, 2>> plus;   // (1+gamma)(1+u)/(2b), (1+gamma)/2
  std::vector<std::array<double, 2>> minus;  // (1-gamma)(1-u)/(2b), (1-gamma)/2
};

struct ThetaReport {
  double positivity_min = 0.0;       // min over ends of I(f, theta^+-)
  double unit_pairing_defect = 0.0;  // max |I(f, theta^+ + theta^-) - 1|
  double charge_defect = 0.0;        // max over vertices of |sum I(theta, Phi fbar / b) - k_v|
  double ratio_defect = 0.0;         // max of ||I(Phi fbar, theta^+-)| / I(f, theta^+-) - u|
  double ray_defect = 0.0;           // max of |theta^+- -+ u Phi theta^+-_{bar}|
  double min_det = 0.0;              // min over ends of |det(theta^+, theta^-)|
  bool pass = false;
};

// Computes the rays and checks the pairing identities to 1e-10. Throws
// Error("DegenerateCandidate") when the margin is not positive.
std::pair<ThetaClasses, ThetaReport> theta_classes(const ConfigGraph& g,
                                                   const BknCandidate& c);

struct SearchOptions {
  double tol = 1e-12;         // target max vertex residual
  int max_iterations = 80;    // per start
  long budget = 1'000'000;    // total damped iterations across starts
  double margin_floor = 1e-6;
};

// Deterministic multi-start search: a fixed cosine grid per edge, flat
// potentials, then damped least squares over potentials and edge cosines.
std::optional<BknCandidate> numeric_search(const ConfigGraph& g, const SearchOptions& opt);

enum class Verdict { NpcCertified, NotNpc, Unknown };

struct DecideOptions {
  double tol = 1e-10;
  long budget = 1'000'000;
};

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::string provenance;  // current+perturbation | numeric-search | all-positive-rule
  std::string note;
  std::optional<BknCandidate> candidate;
  std::optional<BknReport> report;
};

// One-sided multiplicities are rejected outright; a nondegenerate current
// solution is perturbed and polished; otherwise the numeric search runs.
// Certified decisions always carry a candidate that re-verifies at tol.
// Throws Error("NotBipartite"); callers pass to the double cover first.
Decision decide_npc(const ConfigGraph& g, const DecideOptions& opt = {});

}  // namespace npcgm
