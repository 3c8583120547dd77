#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>

#include "coarse/covers.hpp"
#include "coarse/error.hpp"
#include "coarse/extend.hpp"
#include "coarse/generators.hpp"
#include "coarse/io.hpp"
#include "coarse/verify.hpp"

namespace coarse::cli {

namespace {

struct Config {
  std::string kind;
  std::string strategy;
  std::string space, tree, pou, out;
  std::string modulus = "paper";
  std::string schedule = "conservative";
  std::string mode = "restricted";
  double epsilon = 0.0;
  std::optional<double> lambda, C, bound, leaf_bound;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t n = 0, width = 0, height = 0;
  double radius = 0.0, diam = 0.0, block = 0.0;
  std::vector<double> R;
};

void emit(const std::string& path, const io::json& doc, std::ostream& out) {
  if (path.empty() || path == "-")
    out << doc.dump(2) << '\n';
  else
    io::write_json_file(path, doc);
}

int cmd_generate(const Config& c, std::ostream& out) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::BadParams, what);
  };
  std::optional<metric::FiniteMetricSpace> space;
  if (c.kind == "path") {
    need(c.n >= 1, "path needs --n >= 1");
    space = metric::path_space(c.n);
  } else if (c.kind == "grid") {
    need(c.width >= 1 && c.height >= 1, "grid needs --width and --height");
    space = metric::grid_space(c.width, c.height);
  } else if (c.kind == "tree-graph") {
    need(c.n >= 1, "tree-graph needs --n >= 1");
    space = metric::tree_graph_space(c.n, c.seed);
  } else if (c.kind == "random-geometric") {
    need(c.n >= 1 && c.radius > 0.0, "random-geometric needs --n and --radius");
    space = metric::random_geometric_space(c.n, c.radius, c.seed);
  } else {
    throw Error(Errc::BadParams, "unknown generator \"" + c.kind + "\"");
  }
  auto doc = io::space_to_json(*space);
  if (c.kind == "tree-graph" || c.kind == "random-geometric") doc["seed"] = c.seed;
  emit(c.out, doc, out);
  return kExitPass;
}

int cmd_decompose(const Config& c, std::ostream& out, std::ostream& err) {
  const auto space = io::space_from_json(io::read_json_file(c.space));
  if (c.strategy == "greedy") {
    if (c.R.size() != 1) throw Error(Errc::BadParams, "greedy needs exactly one --R");
    const auto fams = covers::greedy_decomposition(space, c.R.front(), c.diam);
    emit(c.out, io::families_to_json(fams), out);
    err << "greedy: " << fams.size() << " families\n";
    return kExitPass;
  }
  if (c.strategy == "bricks") {
    const auto tree = covers::brick_tree(space, c.R, c.block);
    const auto rep = covers::tree_validate(space, tree);
    emit(c.out, io::tree_to_json(tree), out);
    err << "bricks: m = " << tree.m << ", tree " << (rep.pass ? "valid" : "INVALID") << '\n';
    return rep.pass ? kExitPass : kExitFail;
  }
  throw Error(Errc::BadParams, "unknown strategy \"" + c.strategy + "\"");
}

void write_certificate(const std::string& dir, const std::string& space_ref,
                       const extend::Certificate& cert) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  io::write_json_file((d / "pou.json").string(), io::pou_to_json(cert.pou, space_ref));
  io::write_json_file((d / "report.json").string(), io::certificate_report_to_json(cert));
  io::write_json_file((d / "schedule.json").string(), io::schedule_to_json(cert.schedule));
}

int cmd_certify(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) throw Error(Errc::BadParams, "certify needs --out <directory>");
  const auto space = io::space_from_json(io::read_json_file(c.space));
  auto tree = io::tree_from_json(io::read_json_file(c.tree));
  if (c.leaf_bound) tree = covers::truncate_at_bounded_level(space, tree, *c.leaf_bound);
  extend::CertificateOptions opts;
  opts.schedule = extend::parse_schedule_mode(c.schedule);
  opts.verify_mode = verify::parse_lipschitz_mode(c.mode);
  opts.exec.workers = c.workers;
  const auto modulus = io::modulus_from_spec(c.modulus);
  try {
    const auto cert = extend::build_certificate(space, tree, c.epsilon, modulus, opts);
    write_certificate(c.out, c.space, cert);
    out << "certificate passed: slack " << cert.lipschitz.worst_slack << ", bound " << cert.bound
        << " (tight " << cert.cobounded.tight << ")\n";
    return kExitPass;
  } catch (const extend::CertificateError& e) {
    write_certificate(c.out, c.space, e.certificate());
    err << e.what() << '\n';
    return kExitFail;
  }
}

int cmd_verify(const Config& c, std::ostream& out) {
  const auto space = io::space_from_json(io::read_json_file(c.space));
  const auto f = io::pou_from_json(io::read_json_file(c.pou), space.size());
  double lambda = 0.0, C = 0.0;
  if (c.epsilon > 0.0) {
    lambda = C = c.epsilon;
  } else if (c.lambda && c.C) {
    lambda = *c.lambda;
    C = *c.C;
  } else {
    throw Error(Errc::BadParams, "verify needs --epsilon or both --lambda and --C");
  }
  verify::LipschitzOptions lo;
  lo.mode = verify::parse_lipschitz_mode(c.mode);
  lo.exec.workers = c.workers;
  if (f.domain_size() != space.size())
    throw Error(Errc::UnknownPoint, "the partition of unity misses some points of the space");
  io::json report;
  report["v"] = io::kSchemaVersion;
  const auto lip = verify::lipschitz_check(space, f, lambda, C, lo);
  bool pass = lip.pass;
  io::json checks = io::json::array({io::lipschitz_to_json(lip)});
  if (c.bound) {
    const auto cob = verify::cobounded_check(space, f, *c.bound);
    pass = pass && cob.pass;
    checks.push_back(io::cobounded_to_json(cob));
  }
  report["pass"] = pass;
  report["checks"] = std::move(checks);
  emit(c.out, report, out);
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Coarse-geometry certificates: Lipschitz cobounded partitions of unity"};
  app.name("coarse");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a generated space");
  gen->add_option("kind", c.kind, "path | grid | tree-graph | random-geometric")->required();
  gen->add_option("--n", c.n, "number of points");
  gen->add_option("--width", c.width, "grid width");
  gen->add_option("--height", c.height, "grid height");
  gen->add_option("--radius", c.radius, "connection radius (random-geometric)");
  gen->add_option("--seed", c.seed, "random seed");
  gen->add_option("--out", c.out, "output file (stdout when omitted)");

  auto* dec = app.add_subcommand("decompose", "build families or a decomposition tree");
  dec->add_option("strategy", c.strategy, "greedy | bricks")->required();
  dec->add_option("--space", c.space, "space file")->required();
  dec->add_option("--R", c.R, "disjointness radius (repeatable for bricks)")->required();
  dec->add_option("--diam", c.diam, "target piece diameter (greedy)");
  dec->add_option("--block", c.block, "block scale (bricks)");
  dec->add_option("--out", c.out, "output file (stdout when omitted)");

  auto* cert = app.add_subcommand("certify", "build and verify a certificate");
  cert->add_option("--space", c.space, "space file")->required();
  cert->add_option("--tree", c.tree, "decomposition tree file")->required();
  cert->add_option("--epsilon", c.epsilon, "target epsilon in (0, 2)")->required();
  cert->add_option("--modulus", c.modulus, "paper | linear:<c> | table:<path>");
  cert->add_option("--schedule", c.schedule, "conservative | paper");
  cert->add_option("--mode", c.mode, "full | restricted");
  cert->add_option("--leaf-bound", c.leaf_bound, "cut the tree at the first level this bounded");
  cert->add_option("--workers", c.workers, "verification threads");
  cert->add_option("--out", c.out, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "check a partition of unity");
  ver->add_option("--space", c.space, "space file")->required();
  ver->add_option("--pou", c.pou, "partition of unity file")->required();
  ver->add_option("--epsilon", c.epsilon, "shorthand for --lambda eps --C eps");
  ver->add_option("--lambda", c.lambda, "Lipschitz slope");
  ver->add_option("--C", c.C, "Lipschitz offset");
  ver->add_option("--bound", c.bound, "coboundedness bound M");
  ver->add_option("--mode", c.mode, "full | restricted");
  ver->add_option("--workers", c.workers, "verification threads");
  ver->add_option("--out", c.out, "report file (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInput;
  }
  if (c.workers == 0) c.workers = 1;

  try {
    if (*gen) return cmd_generate(c, out);
    if (*dec) return cmd_decompose(c, out, err);
    if (*cert) return cmd_certify(c, out, err);
    if (*ver) return cmd_verify(c, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == Errc::VerificationFailed ? kExitFail : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace coarse::cli
