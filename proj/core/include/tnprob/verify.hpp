#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnprob/models.hpp"
#include "tnprob/rng.hpp"
#include "tnprob/transforms.hpp"

namespace tnprob {

/// One verified property. For upper-bound checks, passed means
/// residual <= bound; witness checks invert the sense (residual > bound)
/// and say so in the name.
struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  bool vacuous = false;  // ran with 0 trials
  std::vector<CheckResult> checks;
  /// Most negative pre-clamp entry seen across every Born-rule distribution
  /// the suite computed (0 when none were computed).
  double min_raw_entry = 0.0;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::string to_string() const;
};

/// Suites: thm1, cor1, thm2, lps, observer, gauge, nonneg, grad. tol = 0
/// selects the suite default (1e-10 for the equivalence suites, 1e-8 for
/// gauge invariance, 1e-4 for gradients).
SuiteResult run_suite(const std::string& suite, std::size_t trials,
                      std::uint64_t seed, double tol = 0.0);

const std::vector<std::string>& suite_names();

/// Trial count matching each suite's documented strength (50 for thm1/cor1,
/// 100 for nonneg, 20 for grad, 30 otherwise).
std::size_t default_suite_trials(const std::string& suite);

/// Runs one suite or, for "all", every suite with the same settings.
std::vector<SuiteResult> run_suites(const std::string& suite_or_all,
                                    std::size_t trials, std::uint64_t seed,
                                    double tol = 0.0);

/// Max elementwise difference between two same-shape distributions, relative
/// to the largest entry.
double dist_residual(const Distribution& p, const Distribution& q);

// Random model generators used by the suites (and reusable from tests).
// Graphs have at most 5 nodes and edge dimensions at most 3.
BornMachine random_bm(Rng& rng);
DecoheredBM random_fdbm(Rng& rng);
Ugm random_ugm(Rng& rng);
PhaseAssignment random_phases(Rng& rng, const TensorNetwork& net);
Lps random_lps(Rng& rng);
DecoheredBM random_one_visible_dbm(Rng& rng);  // dbm_to_lps precondition

struct CutDbm {
  DecoheredBM model;
  std::set<std::string> cut_edges;  // decohered edges disconnecting the graph
};
CutDbm random_cut_dbm(Rng& rng);

/// Frozen two-core BM whose distribution changes under a forced readout of
/// its hidden edge (the observer effect), with a hidden edge named "e".
BornMachine observer_witness();

/// The witness with "e" decohered; a non-PD gauge on "e" changes its
/// distribution.
DecoheredBM gauge_witness();
GaugeTransform gauge_witness_transform();

/// Frozen DBM whose decohered edge is not a cut set: conditioning on its
/// readout leaves the two visible variables dependent.
DecoheredBM dependence_counterexample();

/// Conditional-dependence residual of the counterexample: readout of "e1",
/// max over z of max |P(x,y|z) - P(x|z)P(y|z)|.
double counterexample_residual();

}  // namespace tnprob
