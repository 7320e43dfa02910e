#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "elmpde/time_marching.hpp"

namespace elmpde {

struct CheckResult {
  bool ok = true;
  std::string detail;  // first failure, empty on success
};

/// sum_j a_j = 0 and sum_j j^q a_j = q b_k k^(q-1), q = 1..k, exactly in the
/// integer numerators and to 1e-12 (relative to the term magnitudes) in double.
CheckResult check_bdf_order_conditions(const std::array<BdfRational, 6>& table);

/// Analytic sigmoid derivatives against central differences at random points.
CheckResult check_derivative_identities(std::uint64_t seed = 1000);

/// Min-norm solver against the row-space pseudoinverse C^T (C C^T)^{-1} rhs.
CheckResult check_least_squares(std::uint64_t seed = 1000);

/// Catalogued exact solutions: PDE residual and boundary values.
CheckResult check_exact_solutions(std::uint64_t seed = 1000);

inline const std::vector<std::string>& verify_groups() {
  static const std::vector<std::string> groups{"bdf-order", "derivatives", "least-squares",
                                               "exact-solutions"};
  return groups;
}

struct VerifyOptions {
  std::optional<std::string> group;
  // Perturbs one entry of the BDF table to confirm the order-condition group
  // detects it.
  bool corrupt_bdf_table = false;
};

/// Prints "PASS <group>" / "FAIL <group>: <detail>" per group; true iff all pass.
bool run_verify(const VerifyOptions& options, std::ostream& os);

}  // namespace elmpde
