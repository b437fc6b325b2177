#include <array>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tpsig/bounds.hpp"
#include "tpsig/constructions.hpp"
#include "tpsig/error.hpp"
#include "tpsig/field.hpp"
#include "tpsig/format.hpp"
#include "tpsig/parallel.hpp"
#include "tpsig/serialize.hpp"
#include "tpsig/signal.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tpsig::Error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tpsig::Error("cannot open output file: " + path);
  out << content;
  if (!out) throw tpsig::Error("failed writing output file: " + path);
}

tpsig::Alphabet parse_alphabet(const std::string& s) {
  if (s == "real") return tpsig::Alphabet::real;
  if (s == "binary") return tpsig::Alphabet::binary;
  if (s == "qary") return tpsig::Alphabet::qary;
  return tpsig::Alphabet::complex_any;
}

struct ConstructArgs {
  std::uint32_t p = 0, m = 0, e = 0;
  std::string out;
};

int cmd_construct(bool cyclotomic, const ConstructArgs& a) {
  const tpsig::Field F = tpsig::Field::make(a.p, a.m);
  const tpsig::SignalSet set =
      cyclotomic ? tpsig::construct_cyclotomic(F, a.e) : tpsig::construct_gauss(F);
  write_output(a.out, tpsig::set_to_json(set));
  return 0;
}

struct EvalArgs {
  std::string in;
  std::string format = "table";
};

int cmd_eval(const EvalArgs& a) {
  const tpsig::SignalSet set = tpsig::set_from_json(read_file(a.in));
  tpsig::require_unit_norms(set);
  const tpsig::CorrelationProfile prof = tpsig::profile(set);
  std::cout << (a.format == "json" ? tpsig::profile_to_json(prof)
                                   : tpsig::profile_to_table(prof));
  return 0;
}

struct BoundsArgs {
  std::uint32_t n = 0, m = 0;
  std::string alphabet = "complex";
  std::uint32_t k = 0;
  bool has_k = false;
  std::string format = "table";
};

int cmd_bounds(const BoundsArgs& a) {
  tpsig::BoundQuery q;
  q.n = a.n;
  q.M = a.m;
  q.alphabet = parse_alphabet(a.alphabet);
  if (a.has_k) q.k = a.k;
  const tpsig::BoundReport report = tpsig::bound_table(q);
  if (a.format == "json")
    std::cout << tpsig::report_to_json(report);
  else if (a.format == "csv")
    std::cout << tpsig::report_to_csv(report);
  else
    std::cout << tpsig::report_to_table(report);
  return 0;
}

struct BridgeArgs {
  std::string in, kind, out;
  bool check = false;
};

int cmd_bridge(const BridgeArgs& a) {
  const tpsig::SignalSet src = tpsig::set_from_json(read_file(a.in));
  tpsig::require_unit_norms(src);
  const tpsig::CorrelationProfile prof = tpsig::profile(src);
  const bool full = a.kind == "full";
  const tpsig::SignalSet target =
      full ? tpsig::bridge_full_with_lambda(src, prof.lambda)
           : tpsig::bridge_phase_with_lambda(src, prof.lambda);
  write_output(a.out, tpsig::set_to_json(target));
  if (!a.check) return 0;
  const double transferred =
      full ? tpsig::nu_only(target).first : tpsig::theta_only(target).first;
  const double diff = std::abs(prof.lambda - transferred);
  std::cout << "source lambda: " << tpsig::fmt17(prof.lambda) << "\n";
  std::cout << "target " << (full ? "nu" : "theta") << ": "
            << tpsig::fmt17(transferred) << "\n";
  std::cout << "absolute difference: " << tpsig::fmt17(diff) << "\n";
  return diff > 1e-9 ? 4 : 0;
}

struct SweepArgs {
  std::string construction, out;
  std::uint32_t qmax = 0;
  std::uint32_t emax = 0;  // 0 = uncapped
};

struct SweepCell {
  std::uint32_t q = 0, p = 0, m = 0, e = 1;  // e = 1 marks the single-signal set
};

std::vector<SweepCell> sweep_cells(const SweepArgs& a) {
  std::vector<SweepCell> cells;
  for (std::uint32_t p = 2; p <= a.qmax; ++p) {
    if (!tpsig::detail::is_prime(p)) continue;
    std::uint64_t q = p;
    std::uint32_t m = 1;
    while (q <= a.qmax) {
      const std::uint32_t q32 = static_cast<std::uint32_t>(q);
      if (a.construction == "gauss") {
        if (q32 >= 3) cells.push_back({q32, p, m, 1});
      } else {
        for (std::uint32_t e = 2; e <= (q32 - 1) / 2; ++e) {
          if ((q32 - 1) % e != 0) continue;
          if (a.emax != 0 && e > a.emax) continue;
          cells.push_back({q32, p, m, e});
        }
      }
      q *= p;
      ++m;
    }
  }
  std::sort(cells.begin(), cells.end(), [](const SweepCell& x, const SweepCell& y) {
    return x.q != y.q ? x.q < y.q : x.e < y.e;
  });
  return cells;
}

std::string sweep_row(const SweepCell& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const tpsig::Field F = tpsig::Field::make(c.p, c.m);
  const tpsig::SignalSet set =
      c.e == 1 ? tpsig::construct_gauss(F) : tpsig::construct_cyclotomic(F, c.e);
  const tpsig::CorrelationProfile prof = tpsig::profile(set, 1);
  const std::uint32_t n = set.n, M = set.M();
  const double formula = c.e == 1 ? std::sqrt(n + 1.0) / n
                                  : std::sqrt(double(c.e) * n + 1.0) / n;
  tpsig::BoundQuery bq;
  bq.n = n;
  bq.M = M;
  bq.alphabet = c.p == 2 ? tpsig::Alphabet::binary : tpsig::Alphabet::qary;
  bq.p = c.p;
  const tpsig::BoundReport report = tpsig::judge(prof, bq);
  const auto best = tpsig::verdict_entry(report, prof.lambda, M);
  std::string verdict = tpsig::verdict_to_string(*report.verdict);
  if (c.e == 1 && n == 2) verdict += "(degenerate)";
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::string row;
  row += std::to_string(c.p) + "," + std::to_string(c.m) + "," +
         std::to_string(c.e) + "," + std::to_string(n) + "," +
         std::to_string(M) + ",";
  row += tpsig::fmt17(prof.lambda) + "," + tpsig::fmt17(formula) + ",";
  row += (best ? tpsig::detail_ser::csv_field(best->name) : std::string("none")) +
         ",";
  row += (best ? tpsig::fmt17(best->value) : std::string("0")) + ",";
  row += tpsig::detail_ser::csv_field(verdict) + "," + std::to_string(ms) + "\n";
  return row;
}

int cmd_sweep(const SweepArgs& a) {
  if (a.qmax > 512) throw tpsig::Error("q-max must be at most 512");
  const std::vector<SweepCell> cells = sweep_cells(a);
  std::vector<std::string> rows(cells.size());
  tpsig::parallel_for(0, cells.size(), tpsig::thread_budget(), [&](std::uint64_t i) {
    rows[i] = sweep_row(cells[i]);
  });
  std::string csv =
      "p,m,e,n,M,lambda_measured,lambda_formula,bound_best_name,"
      "bound_best_value,verdict,runtime_ms\n";
  for (const std::string& r : rows) csv += r;
  write_output(a.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unit time-phase signal sets: construction, correlation "
               "profiling, expansion bridges, and optimality bounds"};
  app.require_subcommand(1);
  int rc = 0;

  ConstructArgs cargs;
  auto* construct =
      app.add_subcommand("construct", "build a signal set from character sums");
  construct->require_subcommand(1);
  auto* cg = construct->add_subcommand(
      "gauss", "single-signal set over GF(p^m), n = p^m - 1");
  cg->add_option("--p", cargs.p, "prime characteristic")->required();
  cg->add_option("--m", cargs.m, "extension degree")->required();
  cg->add_option("--out", cargs.out, "output path (default: stdout)");
  cg->callback([&] { rc = cmd_construct(false, cargs); });
  auto* cc = construct->add_subcommand(
      "cyclotomic", "e-signal set over GF(p^m), n = (p^m - 1)/e");
  cc->add_option("--p", cargs.p, "prime characteristic")->required();
  cc->add_option("--m", cargs.m, "extension degree")->required();
  cc->add_option("--e", cargs.e, "number of signals (divides p^m - 1)")
      ->required();
  cc->add_option("--out", cargs.out, "output path (default: stdout)");
  cc->callback([&] { rc = cmd_construct(true, cargs); });

  EvalArgs eargs;
  auto* eval =
      app.add_subcommand("eval", "measure nu/theta/lambda of a stored set");
  eval->add_option("--in", eargs.in, "signal-set JSON file")->required();
  eval->add_option("--format", eargs.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));
  eval->callback([&] { rc = cmd_eval(eargs); });

  BoundsArgs bargs;
  auto* bounds =
      app.add_subcommand("bounds", "closed-form bound table for an (n, M) grid point");
  bounds->add_option("--n", bargs.n, "period")->required();
  bounds->add_option("--m", bargs.m, "set size")->required();
  bounds->add_option("--alphabet", bargs.alphabet, "entry alphabet")
      ->check(CLI::IsMember({"complex", "real", "binary", "qary"}));
  auto* kopt = bounds->add_option("--k", bargs.k, "extra Welch/power-moment order")
                   ->check(CLI::Range(1, 64));
  bounds->add_option("--format", bargs.format, "output format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  bounds->callback([&] {
    bargs.has_k = kopt->count() > 0;
    rc = cmd_bounds(bargs);
  });

  BridgeArgs brargs;
  auto* bridge = app.add_subcommand(
      "bridge", "expand a set so lambda transfers to nu (full) or theta (phase)");
  bridge->add_option("--in", brargs.in, "source signal-set JSON file")->required();
  bridge->add_option("--kind", brargs.kind, "expansion kind")
      ->required()
      ->check(CLI::IsMember({"full", "phase"}));
  bridge->add_option("--out", brargs.out, "output path for the expanded set")
      ->required();
  bridge->add_flag("--check", brargs.check,
                   "recompute the transferred correlation and compare");
  bridge->callback([&] { rc = cmd_bridge(brargs); });

  SweepArgs sargs;
  auto* sweep =
      app.add_subcommand("sweep", "profile a construction family across q to CSV");
  sweep->add_option("--construction", sargs.construction, "family to sweep")
      ->required()
      ->check(CLI::IsMember({"gauss", "cyclotomic"}));
  sweep->add_option("--q-max", sargs.qmax, "largest prime power q")->required();
  sweep->add_option("--e-max", sargs.emax, "largest e for cyclotomic rows");
  sweep->add_option("--out", sargs.out, "output CSV path")->required();
  sweep->callback([&] { rc = cmd_sweep(sargs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const tpsig::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tpsig::UnitNormError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tpsig::DegenerateLambdaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tpsig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 2;
  }
  return rc;
}
