#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/covers.hpp"
#include "coarse/error.hpp"
#include "coarse/metric.hpp"
#include "coarse/modulus.hpp"
#include "coarse/parallel.hpp"
#include "coarse/simplex.hpp"
#include "coarse/verify.hpp"

namespace coarse::extend {

using metric::FiniteMetricSpace;
using metric::PointId;
using metric::PointSubset;
using simplex::PartitionOfUnity;
using simplex::VertexMinter;

// `assume` skips checking the caller's Lipschitz/coboundedness claims.
enum class InputCheck { verify, assume };

struct ExtendOptions {
  InputCheck input = InputCheck::verify;
  bool post_verify = true;
  verify::LipschitzMode verify_mode = verify::LipschitzMode::restricted;
  ExecPolicy exec{};
};

struct Extension {
  PartitionOfUnity pou;
  std::optional<double> bound;  // claimed coboundedness
  std::optional<verify::LipschitzReport> lipschitz;
  std::optional<verify::CoboundedReport> cobounded;

  // True when every report that was produced passes.
  bool verified() const;
};

// h = f on A, g off the open ball B(A, r), and
// alpha*g + (1-alpha)*f(p(x)) in between, alpha = min(dist(x,A)/r, 1).
// Requires r >= 4/eps, delta <= eps/3 - 2/(3r), delta <= eps/(4r+7). When the
// carriers of f and g are disjoint the bound is M + 2r + 2, with M defaulting
// to the larger measured coboundedness of f and g.
Extension paste(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                const PartitionOfUnity& g, double r, double eps, double delta,
                std::optional<double> M = std::nullopt, const ExtendOptions& opts = {});

// Extends f from its domain A to `target` (all of X by default) with
// r = 8/eps and a freshly minted vertex away from A. No coboundedness claim.
Extension extend_pou(const FiniteMetricSpace& space, const PartitionOfUnity& f, double eps,
                     const Modulus& modulus, VertexMinter& minter, const ExtendOptions& opts = {},
                     std::optional<PointSubset> target = std::nullopt);

// Pastes f (K-cobounded) into a renamed copy of u (Q-cobounded on X) with
// r = 8/eps and delta = E(eps). Bound max(K, Q) + 2r + 2.
Extension extend_pou_cobounded(const FiniteMetricSpace& space, const PartitionOfUnity& f,
                               double K, const PartitionOfUnity& u, double Q, double eps,
                               const Modulus& modulus, VertexMinter& minter,
                               const ExtendOptions& opts = {});

struct PieceExtension {
  Extension ext;
  int branch = 0;  // 1: U is far from A, 2: extend then retract
};

// Extends f (R-cobounded on A) over U (diameter <= K) at budget u. R_m is the
// leaf radius of the schedule; needs u >= 2/(R_m+1).
PieceExtension extend_over_bounded_piece(const FiniteMetricSpace& space,
                                         const PartitionOfUnity& f, double R,
                                         const PointSubset& U, double K, double R_m, double u,
                                         const Modulus& modulus, VertexMinter& minter,
                                         const ExtendOptions& opts = {});

// Extends g (on D, bound K_B) over one member W of a family. Must return an
// extension whose domain is D u W.
using PieceExtender = std::function<Extension(const PartitionOfUnity& g, double K_B,
                                              const PointSubset& W, std::size_t t)>;

enum class BudgetGate { enforce, record };

struct FamilyExtension {
  Extension ext;
  double margin = 0.0;  // u - 2/(R+1)
};

// Extends every member independently from g and glues the results. Bound
// 2 * max_t M_t + K_B. The default extender is extend_pou at budget u.
FamilyExtension extend_over_disjoint_family(const FiniteMetricSpace& space,
                                            const PartitionOfUnity& g, double K_B,
                                            const std::vector<PointSubset>& family, double R,
                                            double u, const Modulus& modulus,
                                            VertexMinter& minter, const ExtendOptions& opts = {},
                                            PieceExtender extender = {},
                                            BudgetGate gate = BudgetGate::enforce);

// ------------------------------------------------------------------ schedule

enum class ScheduleMode { conservative, paper };

std::string to_string(ScheduleMode mode);
ScheduleMode parse_schedule_mode(const std::string& text);

struct BudgetSchedule {
  double epsilon = 0.0;
  ScheduleMode mode = ScheduleMode::conservative;
  std::string modulus;
  std::size_t m = 1;
  std::vector<std::size_t> arity;  // n_1 .. n_{m-1}
  std::vector<std::uint64_t> N;    // N_1 .. N_m
  std::vector<std::uint64_t> P;    // P_1 .. P_m
  std::vector<double> R;           // R_1 .. R_m, empty when m = 1
  std::vector<double> bottom;      // bottom_1 .. bottom_m
  double floor = 0.0;              // E^{P_1}(eps)
  double delta_leaf = 0.0;
};

// Budgets below this are reported as Underflow.
inline constexpr double kBudgetFloor = 1e-300;

BudgetSchedule budget_schedule(const std::vector<std::size_t>& arity, double eps,
                               const Modulus& modulus,
                               ScheduleMode mode = ScheduleMode::conservative);
BudgetSchedule budget_schedule(const covers::DecompositionTree& tree, double eps,
                               const Modulus& modulus,
                               ScheduleMode mode = ScheduleMode::conservative);

// ---------------------------------------------------------------- certificate

struct CertificateOptions {
  ScheduleMode schedule = ScheduleMode::conservative;
  verify::LipschitzMode verify_mode = verify::LipschitzMode::restricted;
  ExecPolicy exec{};
};

struct CertificateStats {
  std::size_t branch1 = 0;
  std::size_t branch2 = 0;
  std::size_t glues = 0;
  std::size_t glue_budget_violations = 0;
  double min_glue_margin = 0.0;
};

struct Certificate {
  PartitionOfUnity pou;
  double epsilon = 0.0;
  double bound = 0.0;  // from the construction's formulas
  BudgetSchedule schedule;
  verify::LipschitzReport lipschitz;
  verify::CoboundedReport cobounded;
  CertificateStats stats;

  bool pass() const { return lipschitz.pass && cobounded.pass; }
};

class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, Certificate cert)
      : Error(Errc::VerificationFailed, what),
        cert_(std::make_shared<Certificate>(std::move(cert))) {}
  const Certificate& certificate() const noexcept { return *cert_; }

 private:
  std::shared_ptr<const Certificate> cert_;
};

// Throws ScheduleMismatch when a tree radius is below the schedule and
// CertificateError when the final verification fails.
Certificate build_certificate(const FiniteMetricSpace& space, const covers::DecompositionTree& tree,
                              double eps, const Modulus& modulus,
                              const CertificateOptions& opts = {});

}  // namespace coarse::extend
