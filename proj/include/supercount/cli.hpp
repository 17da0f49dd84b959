#pragma once

// Command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "cartier.hpp"
#include "curve.hpp"
#include "driver.hpp"
#include "intpoly.hpp"

namespace supercount::cli {

enum exit_code : int { ok = 0, usage = 1, invalid = 2, selfcheck_failed = 3, internal = 4 };

inline void write_record(std::ostream& out, const PrimeResult& r, Mode mode, int g) {
  switch (mode) {
    case Mode::trace:
      out << r.p << ' ' << *r.a_p << '\n';
      break;
    case Mode::lpoly:
      out << r.p;
      for (auto c : r.lpoly) out << ' ' << c;
      out << '\n';
      break;
    case Mode::prank:
      out << r.p << ' ' << *r.p_rank << '\n';
      break;
    case Mode::matrix: {
      nlohmann::ordered_json j;
      j["p"] = r.p;
      j["g"] = g;
      auto blocks = nlohmann::ordered_json::array();
      for (const auto& [key, B] : r.matrix->blocks())
        blocks.push_back({{"j", key.first}, {"l", key.second}, {"rows", B.to_rows()}});
      j["blocks"] = std::move(blocks);
      out << j.dump() << '\n';
      break;
    }
  }
}

/// Compares compute_all against the direct oracle for every good p <= bound.
inline bool selfcheck(const SuperellipticCurve& curve, std::uint64_t bound, unsigned threads, std::ostream& err) {
  if (bound < 2) return true;
  RunConfig cfg;
  cfg.mode = Mode::matrix;
  cfg.N = bound;
  cfg.threads = threads;
  for (const auto& r : compute_all(curve, cfg)) {
    if (!(*r.matrix == direct_cartier_manin(curve, r.p))) {
      err << "selfcheck: mismatch against the direct oracle at p = " << r.p << '\n';
      return false;
    }
  }
  return true;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartier-Manin matrices and Frobenius traces of y^m = f(x) for all good p <= N"};
  int m = 0;
  std::string fexpr;
  std::uint64_t N = 0;
  std::string mode_name = "trace";
  std::string out_path;
  unsigned threads = 0;
  int kappa = -1;
  std::uint64_t check_bound = 1024;
  app.add_option("--m", m, "exponent of y")->required();
  app.add_option("--f", fexpr, "polynomial in x, e.g. \"x^3+4*x^2+3*x-1\"")->required();
  app.add_option("--N", N, "prime bound")->required();
  app.add_option("--mode", mode_name, "matrix | trace | lpoly | prank")
      ->check(CLI::IsMember({"matrix", "trace", "lpoly", "prank"}));
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--threads", threads, "worker threads (0: all cores)");
  app.add_option("--kappa", kappa, "forest parameter (negative: automatic)");
  app.add_option("--selfcheck", check_bound, "verify all p up to this bound against the direct oracle (0: off)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  }

  const Mode mode = mode_name == "matrix" ? Mode::matrix
                    : mode_name == "lpoly" ? Mode::lpoly
                    : mode_name == "prank" ? Mode::prank
                                           : Mode::trace;
  if (N < 2) {
    err << "N must be at least 2\n";
    return usage;
  }
  if (N >= (std::uint64_t{1} << 32)) {
    err << "N must be below 2^32\n";
    return usage;
  }

  IntPoly f;
  try {
    f = parse_poly(fexpr);
  } catch (const parse_error& e) {
    err << "cannot parse f: " << e.what() << '\n';
    return usage;
  }
  SuperellipticCurve curve;
  try {
    curve = validate_curve(m, f);
  } catch (const invalid_curve& e) {
    err << e.what() << '\n';
    return invalid;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "cannot open " << out_path << " for writing\n";
      return usage;
    }
    sink = &file;
  }

  try {
    if (check_bound > 0 && !selfcheck(curve, std::min(check_bound, N), threads, err)) return selfcheck_failed;
    RunConfig cfg;
    cfg.mode = mode;
    cfg.N = N;
    cfg.kappa = kappa;
    cfg.threads = threads;
    for (const auto& r : compute_all(curve, cfg)) write_record(*sink, r, mode, curve.genus);
    sink->flush();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
  return ok;
}

}  // namespace supercount::cli
