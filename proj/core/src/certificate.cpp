#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coarse/extend.hpp"

namespace coarse::extend {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Tree radii may sit this far (relatively) below the schedule and still match.
constexpr double kRadiusSlack = 1e-9;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double checked(const ExtendedReal& v, const std::string& where) {
  if (v.less_than(kBudgetFloor)) {
    std::ostringstream os;
    os << where << " is about 10^" << std::floor(v.log10())
       << ", below 1e-300; a linear modulus keeps deep trees representable";
    throw Error(Errc::Underflow, os.str());
  }
  return v.to_double();
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw Error(Errc::BadParams, "arity products overflow 64 bits");
  return out;
}

}  // namespace

std::string to_string(ScheduleMode mode) {
  return mode == ScheduleMode::conservative ? "conservative" : "paper";
}

ScheduleMode parse_schedule_mode(const std::string& text) {
  if (text == "conservative") return ScheduleMode::conservative;
  if (text == "paper") return ScheduleMode::paper;
  throw Error(Errc::BadParams, "unknown schedule mode \"" + text + "\"");
}

BudgetSchedule budget_schedule(const std::vector<std::size_t>& arity, double eps,
                               const Modulus& modulus, ScheduleMode mode) {
  if (!(eps > 0.0 && eps < 2.0))
    throw Error(Errc::BadEpsilon, "epsilon must lie in (0, 2), got " + num(eps));
  for (std::size_t a : arity)
    if (a < 1) throw Error(Errc::BadParams, "arities must be at least 1");
  BudgetSchedule s;
  s.epsilon = eps;
  s.mode = mode;
  s.modulus = modulus.describe();
  s.m = arity.size() + 1;
  s.arity = arity;
  const std::size_t m = s.m;

  s.N.assign(m, 0);
  std::uint64_t prod = 1;
  for (std::size_t i = 1; i < m; ++i) {
    prod = mul(prod, arity[i - 1]);
    s.N[i] = prod;
  }
  s.P.assign(m, 1);
  for (std::size_t i = m - 1; i-- > 0;) s.P[i] = mul(s.P[i + 1], arity[i]);

  s.bottom.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    s.bottom[i] = checked(modulus.compose(eps, s.P[0] - s.P[i]),
                          "budget at level " + std::to_string(i + 1));
  s.floor = checked(modulus.compose(eps, s.P[0]), "budget floor");
  s.delta_leaf = s.bottom[m - 1];

  if (m >= 2) {
    s.R.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double e = mode == ScheduleMode::conservative
                           ? s.floor
                           : checked(modulus.compose(eps, s.N[i]),
                                     "radius budget at level " + std::to_string(i + 1));
      s.R[i] = 2.0 / e - 1.0;
    }
  }
  return s;
}

BudgetSchedule budget_schedule(const covers::DecompositionTree& tree, double eps,
                               const Modulus& modulus, ScheduleMode mode) {
  return budget_schedule(tree.arity, eps, modulus, mode);
}

namespace {

class Builder {
 public:
  Builder(const FiniteMetricSpace& space, const covers::DecompositionTree& tree,
          const Modulus& modulus, const BudgetSchedule& schedule, double K,
          const CertificateOptions& opts)
      : space_(space), tree_(tree), modulus_(modulus), schedule_(schedule), K_(K), opts_(opts) {
    for (const auto& nd : tree.nodes) by_id_.emplace(nd.id, &nd);
    inner_.input = InputCheck::assume;
    inner_.post_verify = false;
    stats.min_glue_margin = kInf;
  }

  Extension extend_node(const covers::TreeNode& node, const PartitionOfUnity& f, double f_bound,
                        double u) {
    if (node.level == tree_.m) {
      const double R_m = tree_.m == 1 ? kInf : schedule_.R[tree_.m - 1];
      auto piece = extend_over_bounded_piece(space_, f, f_bound, node.members, K_, R_m, u,
                                             modulus_, minter_, inner_);
      ++(piece.branch == 1 ? stats.branch1 : stats.branch2);
      return std::move(piece.ext);
    }
    const std::size_t i = node.level;  // P(i+1) lives at index i
    const std::uint64_t step = schedule_.P[i];
    const std::size_t q = node.families.size();
    const double R = tree_.radii[i - 1];
    PartitionOfUnity cur = f;
    double cur_bound = f_bound;
    for (std::size_t j = 0; j < q; ++j) {
      const double b = modulus_.compose(u, (q - 1 - j) * step).to_double();
      std::vector<PointSubset> members;
      std::vector<const covers::TreeNode*> children;
      for (std::size_t c : node.families[j]) {
        children.push_back(by_id_.at(c));
        members.push_back(children.back()->members);
      }
      const auto gate = opts_.schedule == ScheduleMode::conservative ? BudgetGate::enforce
                                                                     : BudgetGate::record;
      auto glued = extend_over_disjoint_family(
          space_, cur, cur_bound, members, R, b, modulus_, minter_, inner_,
          [&](const PartitionOfUnity& g, double K_B, const PointSubset&, std::size_t t) {
            return extend_node(*children[t], g, K_B, b);
          },
          gate);
      ++stats.glues;
      stats.min_glue_margin = std::min(stats.min_glue_margin, glued.margin);
      if (glued.margin < -kRadiusSlack * b) ++stats.glue_budget_violations;
      cur = std::move(glued.ext.pou);
      cur_bound = glued.ext.bound.value_or(kInf);
    }
    Extension out;
    out.pou = std::move(cur);
    out.bound = cur_bound;
    return out;
  }

  CertificateStats stats;

 private:
  const FiniteMetricSpace& space_;
  const covers::DecompositionTree& tree_;
  const Modulus& modulus_;
  const BudgetSchedule& schedule_;
  double K_;
  CertificateOptions opts_;
  ExtendOptions inner_;
  VertexMinter minter_;
  std::map<std::size_t, const covers::TreeNode*> by_id_;
};

}  // namespace

Certificate build_certificate(const FiniteMetricSpace& space, const covers::DecompositionTree& tree,
                              double eps, const Modulus& modulus, const CertificateOptions& opts) {
  if (!(eps > 0.0 && eps < 2.0))
    throw Error(Errc::BadEpsilon, "epsilon must lie in (0, 2), got " + num(eps));
  const auto valid = covers::tree_validate(space, tree);
  if (!valid.pass)
    throw Error(Errc::BadTree, "clause " + std::to_string(*valid.clause) + ": " + valid.message);
  Certificate cert;
  cert.epsilon = eps;
  cert.schedule = budget_schedule(tree, eps, modulus, opts.schedule);
  for (std::size_t i = 0; i + 1 < tree.m; ++i)
    if (tree.radii[i] < cert.schedule.R[i] * (1.0 - kRadiusSlack))
      throw Error(Errc::ScheduleMismatch, "tree radius R_" + std::to_string(i + 1) + " = " +
                                              num(tree.radii[i]) + " is below the schedule's " +
                                              num(cert.schedule.R[i]));

  Builder builder(space, tree, modulus, cert.schedule, valid.K, opts);
  Extension ext =
      builder.extend_node(tree.root(), PartitionOfUnity(space.size()), 0.0, eps);
  cert.stats = builder.stats;
  if (cert.stats.glues == 0) cert.stats.min_glue_margin = 0.0;
  if (opts.schedule == ScheduleMode::conservative && cert.stats.glue_budget_violations > 0)
    throw std::logic_error("conservative schedule produced a glue below 2/(R+1)");
  if (ext.pou.domain_size() != space.size())
    throw std::logic_error("certificate does not cover every point");
  cert.pou = std::move(ext.pou);
  cert.bound = ext.bound.value_or(kInf);

  cert.lipschitz = verify::lipschitz_check(space, cert.pou, eps, eps,
                                           {opts.verify_mode, verify::PairGather::automatic,
                                            opts.exec});
  cert.cobounded = verify::cobounded_check(space, cert.pou, cert.bound);
  if (!cert.pass()) {
    std::string what = "final verification failed:";
    if (!cert.lipschitz.pass) what += " Lipschitz slack " + num(cert.lipschitz.worst_slack);
    if (!cert.cobounded.pass)
      what += " coboundedness " + num(cert.cobounded.tight) + " > " + num(cert.bound);
    throw CertificateError(what, std::move(cert));
  }
  return cert;
}

}  // namespace coarse::extend
