#pragma once

// Command-line front end. Exit codes: 0 ok, 2 usage, 3 computation guard,
// 4 failed validity check.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lacuna/lacuna.hpp"

namespace lacuna::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitInvalid = 4;

using json = nlohmann::ordered_json;

/// Parsed command-line options shared by every subcommand.
struct RunConfig {
  std::string command;
  std::string sequence;
  std::size_t n = 0;
  std::size_t n_from = 0;
  std::size_t n_to = 0;
  unsigned m = 0;
  unsigned m_max = 0;
  int gap_bound = 8;
  std::string format = "json";
  unsigned threads = 0;
  std::string out_path;
  bool require_linear = false;
  std::string indices;
  std::string signs;
};

namespace detail {

struct Validity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

inline std::string nstr(std::size_t v) { return std::to_string(v); }

inline json row_json(const CumulantRow& r) {
  return json{{"n", r.n},
              {"m", r.m},
              {"kappa", r.kappa.to_string()},
              {"independent_n_kappa", r.independent_n_kappa.to_string()},
              {"diff", r.diff.to_string()}};
}

inline std::string rows_csv(const std::vector<CumulantRow>& rows) {
  std::string out = csv_line({"n", "m", "kappa", "independent_n_kappa", "diff"});
  for (const auto& r : rows)
    out += csv_line({nstr(r.n), std::to_string(r.m), r.kappa.to_string(), r.independent_n_kappa.to_string(), r.diff.to_string()});
  return out;
}

inline std::string emit(const RunConfig& cfg, const json& doc, const std::string& csv) {
  if (cfg.format == "csv") return csv;
  return doc.dump(2) + '\n';
}

inline void require_range(const RunConfig& cfg, std::size_t& lo, std::size_t& hi) {
  if (cfg.n > 0) {
    lo = hi = cfg.n;
  } else {
    lo = cfg.n_from;
    hi = cfg.n_to;
  }
  if (lo < 1 || hi < lo) throw Error(Errc::Parse, "give --n, or --n-from/--n-to with 1 <= n-from <= n-to");
}

inline unsigned require_m(const RunConfig& cfg, bool allow_max) {
  const unsigned m = cfg.m > 0 ? cfg.m : (allow_max ? cfg.m_max : 0);
  if (m < 1) throw Error(Errc::Parse, allow_max ? "give --m or --m-max (>= 1)" : "give --m (>= 1)");
  return m;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

inline std::string cmd_moments(const RunConfig& cfg) {
  std::size_t lo, hi;
  require_range(cfg, lo, hi);
  const unsigned top = require_m(cfg, true);
  const unsigned bottom = cfg.m > 0 ? cfg.m : 1;
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  const Terms all = generate_terms(spec, hi);
  json rows = json::array();
  std::string csv = csv_line({"n", "m", "moment"});
  for (std::size_t n = lo; n <= hi; ++n) {
    const auto mu = moments(lacuna::detail::prefix(all, n), top);
    for (unsigned m = bottom; m <= top; ++m) {
      rows.push_back({{"n", n}, {"m", m}, {"moment", mu[m - 1].to_string()}});
      csv += csv_line({nstr(n), std::to_string(m), mu[m - 1].to_string()});
    }
  }
  json doc{{"sequence", describe(spec)}};
  if (rows.size() == 1) {
    for (auto& [k, v] : rows[0].items()) doc[k] = v;
  } else {
    doc["rows"] = rows;
  }
  return emit(cfg, doc, csv);
}

inline std::string cmd_cumulants(const RunConfig& cfg, bool compare) {
  std::size_t lo, hi;
  require_range(cfg, lo, hi);
  const unsigned top = compare ? cfg.m_max : require_m(cfg, true);
  if (top < 1) throw Error(Errc::Parse, "give --m-max (>= 1)");
  const unsigned bottom = (!compare && cfg.m > 0) ? cfg.m : 1;
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  auto table = compare_table(spec, lo, hi, top);
  std::vector<CumulantRow> rows;
  for (auto& r : table.rows)
    if (r.m >= bottom) rows.push_back(r);
  json doc{{"sequence", table.sequence}};
  if (rows.size() == 1 && !compare) {
    const json single = row_json(rows[0]);
    for (const auto& [k, v] : single.items()) doc[k] = v;
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    doc["rows"] = arr;
  }
  return emit(cfg, doc, rows_csv(rows));
}

inline std::string cmd_independent(const RunConfig& cfg) {
  const unsigned top = require_m(cfg, true);
  const auto tilde = independent_cumulants(top);
  json arr = json::array();
  std::string csv = csv_line({"m", "kappa_tilde", "scaled"});
  for (unsigned m = 1; m <= top; ++m) {
    const Rational scaled = tilde[m - 1] * Rational(BigInt(BigInt(1) << m));
    arr.push_back({{"m", m}, {"kappa_tilde", tilde[m - 1].to_string()}, {"scaled", scaled.to_string()}});
    csv += csv_line({std::to_string(m), tilde[m - 1].to_string(), scaled.to_string()});
  }
  return emit(cfg, json{{"m_max", top}, {"kappa_tilde", arr}}, csv);
}

inline json fit_json(const AffineFit& fit) {
  return json{{"w", fit.w.get_str()}, {"b", fit.b.get_str()}, {"n1", fit.n1}, {"valid", fit.valid}, {"tail_points", fit.tail_points}};
}

inline std::string cmd_detect_linear(const RunConfig& cfg) {
  const unsigned m = require_m(cfg, false);
  if (cfg.n_from < 1 || cfg.n_to < cfg.n_from) throw Error(Errc::Parse, "give --n-from/--n-to with 1 <= n-from <= n-to");
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  const AffineFit fit = detect_affine_tail(cumulant_series(spec, m, cfg.n_from, cfg.n_to), m);
  json doc{{"sequence", describe(spec)}, {"m", m}, {"n_from", cfg.n_from}, {"n_to", cfg.n_to}};
  const json fit_doc = fit_json(fit);
  for (const auto& [k, v] : fit_doc.items()) doc[k] = v;
  std::string csv = csv_line({"m", "w", "b", "n1", "valid"}) +
                    csv_line({std::to_string(m), fit.w.get_str(), fit.b.get_str(), nstr(fit.n1), fit.valid ? "true" : "false"});
  std::string text = emit(cfg, doc, csv);
  if (cfg.require_linear && !fit.valid) throw Validity(text);
  return text;
}

inline std::string cmd_slope(const RunConfig& cfg, std::ostream& err) {
  const unsigned m = require_m(cfg, false);
  if (cfg.gap_bound < 1) throw Error(Errc::Parse, "--gap-bound must be positive");
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  const auto poly = minimal_polynomial(spec);
  if (!poly) throw Error(Errc::Parse, "slope needs a recurrence-type sequence (fibonacci, lucas, geometric, recurrence, pow2plus1)");
  const auto roots = dominant_root_check(*poly);
  if (roots.irreducibility_warning) {
    err << "warning: polynomial has rational roots {";
    for (std::size_t i = 0; i < roots.rational_roots.size(); ++i) err << (i ? "," : "") << roots.rational_roots[i];
    err << "}; it is reducible and the slope sweep assumes irreducibility\n";
  }
  if (!roots.is_perron) err << "warning: no strictly dominant real root > 1\n";
  const SlopeReport slope = structural_slope_checked(m, *poly, cfg.gap_bound, cfg.threads);
  if (!slope.gap_bound_stable) err << "warning: slope changed when the gap bound was doubled\n";
  json doc{{"sequence", describe(spec)},
           {"m", m},
           {"gap_bound", slope.gap_bound},
           {"w", slope.w.get_str()},
           {"w_doubled_bound", slope.w_doubled.get_str()},
           {"gap_bound_stable", slope.gap_bound_stable},
           {"is_perron", roots.is_perron},
           {"eta_estimate", roots.eta_estimate},
           {"irreducibility_warning", roots.irreducibility_warning}};
  std::vector<std::string> head{"m", "gap_bound", "w", "gap_bound_stable"};
  std::vector<std::string> cells{std::to_string(m), std::to_string(slope.gap_bound), slope.w.get_str(),
                                 slope.gap_bound_stable ? "true" : "false"};
  bool matches = true;
  if (cfg.n_from > 0 && cfg.n_to >= cfg.n_from) {
    const AffineFit fit = detect_affine_tail(cumulant_series(spec, m, cfg.n_from, cfg.n_to), m);
    const json fit_doc = fit_json(fit);
    for (const auto& [k, v] : fit_doc.items()) doc[k == "w" ? "tail_w" : k] = v;
    matches = fit.valid && fit.w == slope.w;
    doc["tail_slope_matches"] = matches;
    head.insert(head.end(), {"b", "n1", "valid"});
    cells.insert(cells.end(), {fit.b.get_str(), nstr(fit.n1), fit.valid ? "true" : "false"});
  }
  std::string text = emit(cfg, doc, csv_line(head) + csv_line(cells));
  if (cfg.require_linear && !matches) throw Validity(text);
  return text;
}

inline std::string cmd_mult_inspect(const RunConfig& cfg) {
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  SignedTuple t;
  for (const auto& s : split_list(cfg.indices)) {
    const BigInt v = parse_bigint(s);
    if (v < 1) throw Error(Errc::IndexOutOfRange, "indices are 1-based");
    t.indices.push_back(v.get_ui());
  }
  for (const auto& s : split_list(cfg.signs)) {
    if (s == "+" || s == "+1" || s == "1") t.signs.push_back(1);
    else if (s == "-" || s == "-1") t.signs.push_back(-1);
    else throw Error(Errc::Parse, "signs are + or -");
  }
  if (t.indices.empty()) throw Error(Errc::Parse, "give --indices and --signs");
  if (t.indices.size() != t.signs.size()) throw Error(Errc::Parse, "--indices and --signs differ in length");
  const std::size_t need = *std::max_element(t.indices.begin(), t.indices.end());
  const Terms terms = generate_terms(spec, need);
  const int m = t.length();
  const auto profile = zero_sum_profile(t, terms);
  const auto upset = upset_partitions(profile, m);
  const auto minimal = minimal_members(upset);
  json values = json::array();
  for (const auto& v : t.signed_values(terms)) values.push_back(v.get_str());
  json sets = json::array();
  for (Mask b : profile.sets) sets.push_back(subset_to_string(b));
  json up = json::array(), mins = json::array();
  for (const auto& p : upset) up.push_back(p.to_string());
  for (const auto& p : minimal) mins.push_back(p.to_string());
  const BigInt mm = mult_moebius(t, terms);
  const BigInt mc = mult_crosscut(t, terms);
  json tuple = json::array();
  for (int r = 0; r < m; ++r)
    tuple.push_back(std::to_string(t.indices[static_cast<std::size_t>(r)]) + (t.signs[static_cast<std::size_t>(r)] > 0 ? "+" : "-"));
  json doc{{"sequence", describe(spec)},   {"tuple", tuple},       {"signed_values", values},
           {"zero_sum_sets", sets},        {"upset", up},          {"minimal", mins},
           {"mult_moebius", mm.get_str()}, {"mult_crosscut", mc.get_str()}};
  std::string csv = csv_line({"field", "value"});
  for (auto& [k, v] : doc.items()) {
    std::string cell = v.is_string() ? v.get<std::string>() : v.dump();
    if (cell.find(',') != std::string::npos) cell = "\"" + [&] {
      std::string esc;
      for (char c : cell) esc += (c == '"') ? std::string("\"\"") : std::string(1, c);
      return esc;
    }() + "\"";
    csv += csv_line({k, cell});
  }
  return emit(cfg, doc, csv);
}

inline std::string cmd_oracle(const RunConfig& cfg) {
  std::size_t lo, hi;
  require_range(cfg, lo, hi);
  const unsigned m = require_m(cfg, false);
  const SequenceSpec spec = parse_sequence(cfg.sequence);
  const Terms all = generate_terms(spec, hi);
  json rows = json::array();
  std::string csv = csv_line({"n", "m", "exact", "quadrature", "abs_error", "ok"});
  bool all_ok = true;
  for (std::size_t n = lo; n <= hi; ++n) {
    const Terms terms = lacuna::detail::prefix(all, n);
    const Rational exact = moment(terms, m);
    const double quad = moment_oracle_quadrature(terms, m);
    const double ex = exact.to_double();
    const double abs_err = std::fabs(quad - ex);
    const bool ok = exact.is_zero() ? abs_err <= 1e-12 : abs_err <= 1e-9 * std::fabs(ex);
    all_ok = all_ok && ok;
    std::ostringstream q, e;
    q.precision(17);
    e.precision(3);
    q << quad;
    e << std::scientific << abs_err;
    rows.push_back({{"n", n}, {"m", m}, {"exact", exact.to_string()}, {"quadrature", quad}, {"abs_error", abs_err}, {"ok", ok}});
    csv += csv_line({nstr(n), std::to_string(m), exact.to_string(), q.str(), e.str(), ok ? "true" : "false"});
  }
  json doc{{"sequence", describe(spec)}};
  if (rows.size() == 1) {
    for (auto& [k, v] : rows[0].items()) doc[k] = v;
  } else {
    doc["rows"] = rows;
  }
  std::string text = emit(cfg, doc, csv);
  if (!all_ok) throw Validity(text);
  return text;
}

}  // namespace detail

/// Runs one CLI invocation, writing results to `out` (or --out) and
/// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact moments and cumulants of lacunary trigonometric sums"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "Worker threads (default: LACUNA_THREADS or 1)");
  app.add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

  auto add_seq = [&](CLI::App* sub) { sub->add_option("--seq", cfg.sequence, "Sequence, e.g. fibonacci, geometric:c=1,eta=2")->required(); };
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Number of terms");
    sub->add_option("--n-from", cfg.n_from, "First n");
    sub->add_option("--n-to", cfg.n_to, "Last n");
  };
  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "Worker threads");
    sub->add_option("--out", cfg.out_path, "Output file");
  };

  auto* moments_cmd = app.add_subcommand("moments", "Exact moments E[S_n^m]");
  add_seq(moments_cmd);
  add_range(moments_cmd);
  moments_cmd->add_option("--m", cfg.m, "Moment order");
  moments_cmd->add_option("--m-max", cfg.m_max, "All orders 1..m-max");

  auto* cumulants_cmd = app.add_subcommand("cumulants", "Exact cumulants kappa_m(S_n)");
  add_seq(cumulants_cmd);
  add_range(cumulants_cmd);
  cumulants_cmd->add_option("--m", cfg.m, "Cumulant order");
  cumulants_cmd->add_option("--m-max", cfg.m_max, "All orders 1..m-max");

  auto* independent_cmd = app.add_subcommand("independent", "Cumulants of the independent arcsine model");
  independent_cmd->add_option("--m-max", cfg.m_max, "Largest order")->required();

  auto* compare_cmd = app.add_subcommand("compare", "kappa_m(S_n) against n times the independent cumulant");
  add_seq(compare_cmd);
  add_range(compare_cmd);
  compare_cmd->add_option("--m-max", cfg.m_max, "Largest order")->required();

  auto* detect_cmd = app.add_subcommand("detect-linear", "Detect an eventual affine law for 2^m kappa_m(S_n)");
  add_seq(detect_cmd);
  detect_cmd->add_option("--m", cfg.m, "Cumulant order")->required();
  detect_cmd->add_option("--n-from", cfg.n_from, "First n")->required();
  detect_cmd->add_option("--n-to", cfg.n_to, "Last n")->required();
  detect_cmd->add_flag("--require-linear", cfg.require_linear, "Exit 4 when no affine tail is found");

  auto* slope_cmd = app.add_subcommand("slope", "Structural slope w_m from offset patterns");
  add_seq(slope_cmd);
  slope_cmd->add_option("--m", cfg.m, "Cumulant order")->required();
  slope_cmd->add_option("--gap-bound", cfg.gap_bound, "Largest allowed gap between sorted offsets");
  slope_cmd->add_option("--n-from", cfg.n_from, "Also detect the affine tail from this n");
  slope_cmd->add_option("--n-to", cfg.n_to, "... up to this n");
  slope_cmd->add_flag("--require-linear", cfg.require_linear, "Exit 4 unless the detected tail slope equals w");

  auto* mult_cmd = app.add_subcommand("mult-inspect", "Zero-sum structure and multiplicity of one signed tuple");
  add_seq(mult_cmd);
  mult_cmd->add_option("--indices", cfg.indices, "Comma-separated 1-based indices")->required();
  mult_cmd->add_option("--signs", cfg.signs, "Comma-separated signs, + or -")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Quadrature check of the exact moment");
  add_seq(oracle_cmd);
  add_range(oracle_cmd);
  oracle_cmd->add_option("--m", cfg.m, "Moment order")->required();

  for (auto* sub : {moments_cmd, cumulants_cmd, independent_cmd, compare_cmd, detect_cmd, slope_cmd, mult_cmd, oracle_cmd})
    add_shared(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.threads = resolve_threads(cfg.threads);

  std::string text;
  int code = kExitOk;
  try {
    if (cfg.command == "moments") text = detail::cmd_moments(cfg);
    else if (cfg.command == "cumulants") text = detail::cmd_cumulants(cfg, false);
    else if (cfg.command == "compare") text = detail::cmd_cumulants(cfg, true);
    else if (cfg.command == "independent") text = detail::cmd_independent(cfg);
    else if (cfg.command == "detect-linear") text = detail::cmd_detect_linear(cfg);
    else if (cfg.command == "slope") text = detail::cmd_slope(cfg, err);
    else if (cfg.command == "mult-inspect") text = detail::cmd_mult_inspect(cfg);
    else if (cfg.command == "oracle") text = detail::cmd_oracle(cfg);
  } catch (const detail::Validity& v) {
    text = v.what();
    code = kExitInvalid;
    err << "error: validity check failed\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::Parse ? kExitUsage : kExitGuard;
  }

  if (!cfg.out_path.empty()) {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << cfg.out_path << '\n';
      return kExitUsage;
    }
    file << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace lacuna::cli
