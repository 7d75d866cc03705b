#pragma once

// Command-line front end. `run` takes explicit streams so tests can drive it
// in-process.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "percbound/io.hpp"
#include "percbound/oracle.hpp"
#include "percbound/search.hpp"

namespace percbound::cli {

using nlohmann::json;

inline constexpr const char* kSchema = "perc-bound/1";

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNonConvergence = 3, kMemoryBudget = 4 };

/// Floating values are reported with 12 significant digits.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON mapping

inline json to_json(const BoundResult& r) {
  json j;
  j["schema"] = kSchema;
  j["model"] = r.model;
  j["space"] = r.space;
  j["p2"] = r.p2 ? json(round12(*r.p2)) : json(nullptr);
  j["bound"] = round12(r.bound);
  j["lambda_at_bound"] = round12(r.lambda_at_bound);
  j["bisection_iterations"] = r.bisection_iterations;
  j["wall_time"] = round12(r.wall_time);
  j["state_count"] = r.state_count;
  j["distinct_poly_count"] = r.distinct_poly_count;
  return j;
}

inline BoundResult bound_from_json(const json& j) {
  if (j.at("schema") != kSchema) throw InvalidArgument("unsupported schema " + j.at("schema").dump());
  BoundResult r;
  r.model = j.at("model").get<std::string>();
  r.space = j.at("space").get<std::string>();
  if (!j.at("p2").is_null()) r.p2 = j.at("p2").get<double>();
  r.bound = j.at("bound").get<double>();
  r.lambda_at_bound = j.at("lambda_at_bound").get<double>();
  r.bisection_iterations = j.at("bisection_iterations").get<std::size_t>();
  r.wall_time = j.at("wall_time").get<double>();
  r.state_count = j.at("state_count").get<std::size_t>();
  r.distinct_poly_count = j.at("distinct_poly_count").get<std::size_t>();
  return r;
}

inline json to_json(const SpectralReport& r) {
  json j;
  j["schema"] = kSchema;
  j["radius_estimate"] = round12(r.radius_estimate);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residual"] = round12(r.residual);
  return j;
}

inline SpectralReport spectral_from_json(const json& j) {
  if (j.at("schema") != kSchema) throw InvalidArgument("unsupported schema " + j.at("schema").dump());
  SpectralReport r;
  r.radius_estimate = j.at("radius_estimate").get<double>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.converged = j.at("converged").get<bool>();
  r.residual = j.at("residual").get<double>();
  return r;
}

/// The same values as they appear after a JSON round trip.
inline BoundResult rounded(BoundResult r) {
  if (r.p2) r.p2 = round12(*r.p2);
  r.bound = round12(r.bound);
  r.lambda_at_bound = round12(r.lambda_at_bound);
  r.wall_time = round12(r.wall_time);
  return r;
}

inline SpectralReport rounded(SpectralReport r) {
  r.radius_estimate = round12(r.radius_estimate);
  r.residual = round12(r.residual);
  return r;
}

// ---------------------------------------------------------------------------
// Configuration

enum class Format { Text, Json, Csv };

struct RunConfig {
  std::string command;
  std::string model;
  std::string space;
  std::optional<double> p;
  std::optional<double> p2;
  double bisect_tol = 1e-7;
  double margin = 1e-6;
  double spectral_tol = 1e-12;
  std::size_t max_iter = 200000;
  double memory_budget_mb = 0.0;
  unsigned threads = default_thread_count();
  std::uint64_t seed = 1;
  int depth = 0;
  std::size_t trials = 10000;
  std::string state;
  std::string table;
  std::optional<int> table_k;
  std::optional<int> table_L;
  std::string cache_file;
  bool verbose = false;
  std::string format = "text";
  std::string output;
};

struct Resolved {
  ModelSpec model;
  std::optional<SpaceSpec> space;
  std::vector<double> params;  // p1[, p2] when p is given
};

inline Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw InvalidArgument("unknown format '" + s + "' (text, json, csv)");
}

inline void check_unit(const char* name, std::optional<double> v) {
  if (v && !(*v >= 0.0 && *v <= 1.0)) throw InvalidArgument(std::string("--") + name + " must lie in [0, 1]");
}

/// Validates the model-related flags before any work starts.
/// `need_all_params`: the command evaluates the model even without --p.
inline Resolved resolve(const RunConfig& c, bool need_space, bool need_p, bool need_all_params = false) {
  Resolved r;
  if (c.model.empty()) throw InvalidArgument("--model is required");
  r.model = parse_model(c.model);
  if (need_space) {
    if (c.space.empty()) throw InvalidArgument("--space is required");
    r.space = parse_space(r.model, c.space);
    validate(r.model, *r.space);
  }
  check_unit("p", c.p);
  check_unit("p2", c.p2);
  if (r.model.arity == 2 && !c.p2 && (need_all_params || c.p))
    throw InvalidArgument(c.model + " takes two parameters; pass --p2");
  if (r.model.arity == 1 && c.p2) throw InvalidArgument(c.model + " takes one parameter; drop --p2");
  if (need_p && !c.p) throw InvalidArgument("--p is required");
  if (c.p) {
    r.params.push_back(*c.p);
    if (c.p2) r.params.push_back(*c.p2);
  }
  return r;
}

inline SearchOptions search_options(const RunConfig& c, std::ostream& log) {
  if (!(c.margin > 0.0 && c.margin < 1.0)) throw InvalidArgument("--margin must lie in (0, 1)");
  if (!(c.spectral_tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (c.max_iter < 1) throw InvalidArgument("--max-iter must be at least 1");
  if (c.threads < 1) throw InvalidArgument("--threads must be at least 1");
  SearchOptions o;
  o.bisect_tol = c.bisect_tol;
  o.margin = c.margin;
  o.spectral.tol = c.spectral_tol;
  o.spectral.max_iter = c.max_iter;
  o.spectral.threads = c.threads;
  o.build.threads = c.threads;
  o.build.memory_budget_bytes = static_cast<std::size_t>(c.memory_budget_mb * 1024.0 * 1024.0);
  o.verbose = c.verbose;
  o.log = &log;
  return o;
}

inline VariantTag parse_state_tag(const ModelSpec& model, std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (has_tags(model)) throw InvalidArgument("model " + model_id(model) + " needs a tagged state, e.g. 1011/a");
    return {};
  }
  const std::string letter = text.substr(slash + 1);
  text.resize(slash);
  if (letter.size() != 1) throw InvalidArgument("tag must be a single letter");
  return tag_from_letter(model, letter[0]);
}

inline std::size_t state_ordinal(const ModelSpec& model, const StateSpace& space, std::string text) {
  if (text.empty()) throw InvalidArgument("--state is required");
  const VariantTag tag = parse_state_tag(model, text);
  if (text.size() != space.width())
    throw InvalidArgument("state '" + text + "' has " + std::to_string(text.size()) + " slots; this space has " +
                          std::to_string(space.width()));
  const auto ordinal = space.index(parse_bitstring(text), tag);
  if (!ordinal) throw InvalidArgument("state '" + text + "' is not in the space");
  return *ordinal;
}

// ---------------------------------------------------------------------------
// Output

inline std::string csv_quote(const std::string& s) {
  return s.find_first_of(",\"") == std::string::npos ? s : "\"" + s + "\"";
}

inline void print_bounds(std::ostream& out, Format f, const std::vector<BoundResult>& results,
                         const std::vector<std::optional<double>>& references = {}) {
  const bool with_ref = !references.empty();
  switch (f) {
    case Format::Json: {
      if (results.size() == 1 && !with_ref) {
        out << to_json(results[0]).dump(2) << '\n';
        break;
      }
      json rows = json::array();
      for (std::size_t n = 0; n < results.size(); ++n) {
        json j = to_json(results[n]);
        if (with_ref && references[n]) j["reference"] = round12(*references[n]);
        rows.push_back(std::move(j));
      }
      out << json{{"schema", kSchema}, {"rows", rows}}.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      out << "model,space,p2,bound,lambda,states,polys,seconds" << (with_ref ? ",reference" : "") << '\n';
      for (std::size_t n = 0; n < results.size(); ++n) {
        const BoundResult& r = results[n];
        out << r.model << ',' << csv_quote(r.space) << ',' << (r.p2 ? fmt12(*r.p2) : "") << ',' << fmt12(r.bound)
            << ',' << fmt12(r.lambda_at_bound) << ',' << r.state_count << ',' << r.distinct_poly_count << ','
            << fmt12(r.wall_time);
        if (with_ref) out << ',' << (references[n] ? fmt12(*references[n]) : "");
        out << '\n';
      }
      break;
    case Format::Text: {
      char line[256];
      std::snprintf(line, sizeof line, "%-10s %-12s %-6s %-10s %-16s %9s %7s %9s%s\n", "model", "space", "p2",
                    "bound", "lambda", "states", "polys", "seconds", with_ref ? "  reference" : "");
      out << line;
      for (std::size_t n = 0; n < results.size(); ++n) {
        const BoundResult& r = results[n];
        std::snprintf(line, sizeof line, "%-10s %-12s %-6s %-10.6f %-16.12f %9zu %7zu %9.2f", r.model.c_str(),
                      r.space.c_str(), r.p2 ? fmt12(*r.p2).c_str() : "-", r.bound, r.lambda_at_bound, r.state_count,
                      r.distinct_poly_count, r.wall_time);
        out << line;
        if (with_ref && references[n]) out << "  " << fmt12(*references[n]);
        out << '\n';
      }
      break;
    }
  }
}

inline void print_spectral(std::ostream& out, Format f, const SpectralReport& r) {
  switch (f) {
    case Format::Json: out << to_json(r).dump(2) << '\n'; break;
    case Format::Csv:
      out << "radius_estimate,iterations,converged,residual\n"
          << fmt12(r.radius_estimate) << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << ','
          << fmt12(r.residual) << '\n';
      break;
    case Format::Text:
      out << "radius     " << fmt12(r.radius_estimate) << '\n'
          << "iterations " << r.iterations << '\n'
          << "converged  " << (r.converged ? "yes" : "no") << '\n'
          << "residual   " << fmt12(r.residual) << '\n';
      break;
  }
}

/// Generic key/value record (oracle and cache summaries).
inline void print_record(std::ostream& out, Format f, const json& record) {
  switch (f) {
    case Format::Json: out << record.dump(2) << '\n'; break;
    case Format::Csv: {
      std::string header, values;
      for (const auto& [k, v] : record.items()) {
        if (k == "schema") continue;
        header += (header.empty() ? "" : ",") + k;
        const std::string cell = v.is_null() ? "" : v.is_string() ? csv_quote(v.get<std::string>()) : v.dump();
        values += (values.empty() ? "" : ",") + cell;
      }
      out << header << '\n' << values << '\n';
      break;
    }
    case Format::Text:
      for (const auto& [k, v] : record.items())
        if (k != "schema") out << k << ' ' << (v.is_null() ? "-" : v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      break;
  }
}

/// (child, value) lines for a transition row.
struct RowLine {
  std::string child;
  std::string polynomial;
  std::optional<double> value;
};

inline void print_row(std::ostream& out, Format f, const std::string& state, const std::vector<RowLine>& lines) {
  switch (f) {
    case Format::Json: {
      json entries = json::array();
      for (const RowLine& l : lines) {
        json e{{"child", l.child}, {"polynomial", l.polynomial}};
        if (l.value) e["value"] = round12(*l.value);
        entries.push_back(std::move(e));
      }
      out << json{{"schema", kSchema}, {"state", state}, {"entries", entries}}.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      out << "state,child,polynomial,value\n";
      for (const RowLine& l : lines)
        out << state << ',' << l.child << ',' << l.polynomial << ',' << (l.value ? fmt12(*l.value) : "") << '\n';
      break;
    case Format::Text:
      for (const RowLine& l : lines) {
        out << state << " -> " << l.child << "  ";
        if (l.value) out << fmt12(*l.value) << "  ";
        out << l.polynomial << '\n';
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_compute(const RunConfig& c, Format f, std::ostream& out, std::ostream& log) {
  const Resolved r = resolve(c, true, false, true);
  const BoundResult result = lower_bound(r.model, *r.space, c.p2, search_options(c, log));
  print_bounds(out, f, {result});
  return kOk;
}

inline int cmd_spectral(const RunConfig& c, Format f, std::ostream& out, std::ostream& log) {
  const Resolved r = resolve(c, true, true);
  const SearchOptions o = search_options(c, log);
  const MeanMatrix m = build_matrix(r.model, *r.space, o.build);
  const SpectralReport report = spectral_radius(evaluate(m, r.params), o.spectral);
  print_spectral(out, f, report);
  if (!report.converged) {
    log << "error: power iteration did not converge\n";
    return kNonConvergence;
  }
  return kOk;
}

inline int cmd_transitions(const RunConfig& c, Format f, std::ostream& out, std::ostream&) {
  const Resolved r = resolve(c, true, false);
  const StateSpace space = enumerate(r.model, *r.space);
  const std::size_t ordinal = state_ordinal(r.model, space, c.state);
  const WindowGeometry g = window_geometry(r.model, r.space->window());
  // A single row is expanded directly instead of building the whole matrix.
  detail::RowExpander expander(r.model, g, space);
  std::vector<RowLine> lines;
  for (auto& [col, poly] : expander.expand(ordinal)) {
    RowLine l{space.render(col), to_string(poly), std::nullopt};
    if (!r.params.empty()) l.value = eval(poly, r.params);
    lines.push_back(std::move(l));
  }
  print_row(out, f, space.render(ordinal), lines);
  return kOk;
}

inline int cmd_oracle_exact(const RunConfig& c, Format f, std::ostream& out, std::ostream&) {
  const Resolved r = resolve(c, false, true);
  const double prob = exact_reach_probability(r.model, c.depth, r.params);
  json rec{{"schema", kSchema}, {"model", c.model}, {"n", c.depth}, {"p", round12(*c.p)}};
  rec["p2"] = c.p2 ? json(round12(*c.p2)) : json(nullptr);
  rec["probability"] = round12(prob);
  print_record(out, f, rec);
  return kOk;
}

inline int cmd_oracle_mc(const RunConfig& c, Format f, std::ostream& out, std::ostream&) {
  const Resolved r = resolve(c, false, true);
  if (c.trials < 1) throw InvalidArgument("--trials must be at least 1");
  const McResult mc = mc_survival(r.model, r.params, c.depth, c.trials, {c.seed, c.threads});
  json rec{{"schema", kSchema}, {"model", c.model}, {"p", round12(*c.p)}};
  rec["p2"] = c.p2 ? json(round12(*c.p2)) : json(nullptr);
  rec["depth"] = c.depth;
  rec["trials"] = mc.trials;
  rec["seed"] = c.seed;
  rec["survived"] = mc.survived;
  rec["estimate"] = round12(mc.estimate);
  rec["lower"] = round12(mc.lower);
  rec["upper"] = round12(mc.upper);
  print_record(out, f, rec);
  return kOk;
}

inline int cmd_oracle_children(const RunConfig& c, Format f, std::ostream& out, std::ostream&) {
  const Resolved r = resolve(c, true, false);
  const StateSpace space = enumerate(r.model, *r.space);
  const std::size_t ordinal = state_ordinal(r.model, space, c.state);
  std::vector<RowLine> lines;
  for (const ChildExpectation& e : brute_force_children(r.model, space, ordinal)) {
    RowLine l{space.render(e.ordinal), to_string(e.expectation), std::nullopt};
    if (!r.params.empty()) l.value = eval(e.expectation, r.params);
    lines.push_back(std::move(l));
  }
  print_row(out, f, space.render(ordinal), lines);
  return kOk;
}

inline int cmd_tables(const RunConfig& c, Format f, std::ostream& out, std::ostream& log) {
  const TableSelector selector = parse_table_selector(c.table);
  TableOverrides overrides{c.table_k, c.table_L};
  if (overrides.k && (*overrides.k < 2 || *overrides.k > 24)) throw InvalidArgument("--k must lie in [2, 24]");
  if (overrides.L && *overrides.L != 4 && *overrides.L != 5) throw InvalidArgument("--L must be 4 or 5");
  const SearchOptions o = search_options(c, log);
  std::vector<BoundResult> results;
  std::vector<std::optional<double>> refs;
  for (const TableEntry& e : resolve_table(selector, overrides)) {
    results.push_back(lower_bound(parse_model(e.model), e.space, e.p2, o));
    refs.push_back(e.reference);
    if (c.verbose) log << e.model << ' ' << to_string(e.space) << " done\n";
  }
  print_bounds(out, f, results, refs);
  return kOk;
}

inline int cmd_cache_write(const RunConfig& c, Format f, std::ostream& out, std::ostream& log) {
  const Resolved r = resolve(c, true, false);
  if (c.cache_file.empty()) throw InvalidArgument("--file is required");
  const MeanMatrix m = build_matrix(r.model, *r.space, search_options(c, log).build);
  write_cache(c.cache_file, m);
  print_record(out, f,
               json{{"schema", kSchema},
                    {"file", c.cache_file},
                    {"model", model_id(m.model())},
                    {"space", to_string(m.spec())},
                    {"states", m.dimension()},
                    {"nonzeros", m.stats().nonzeros},
                    {"polys", m.pool().size()}});
  return kOk;
}

inline int cmd_cache_read(const RunConfig& c, Format f, std::ostream& out, std::ostream& log) {
  if (c.cache_file.empty()) throw InvalidArgument("--file is required");
  check_unit("p", c.p);
  check_unit("p2", c.p2);
  const MeanMatrix m = read_cache(c.cache_file);
  json rec{{"schema", kSchema},
           {"file", c.cache_file},
           {"model", model_id(m.model())},
           {"space", to_string(m.spec())},
           {"states", m.dimension()},
           {"nonzeros", m.structure()->nonzeros()},
           {"polys", m.pool().size()}};
  if (c.p) {
    std::vector<double> params{*c.p};
    if (m.model().arity == 2) {
      if (!c.p2) throw InvalidArgument("cached model takes two parameters; pass --p2");
      params.push_back(*c.p2);
    }
    const SpectralReport report = spectral_radius(evaluate(m, params), search_options(c, log).spectral);
    rec["radius_estimate"] = round12(report.radius_estimate);
    rec["converged"] = report.converged;
    if (!report.converged) {
      print_record(out, f, rec);
      return kNonConvergence;
    }
  }
  print_record(out, f, rec);
  return kOk;
}

// ---------------------------------------------------------------------------

inline void add_model_flags(CLI::App* app, RunConfig& c, bool space) {
  app->add_option("--model", c.model, "model id (site-vl2, bond-vl2, ..., inhom-5)");
  if (space) app->add_option("--space", c.space, "k | k,i,j (2D) or L | L,focus (3D)");
  app->add_option("--p2", c.p2, "second parameter of the inhomogeneous models");
}

inline void add_search_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--bisect-tol", c.bisect_tol, "bisection interval width");
  app->add_option("--margin", c.margin, "certification margin below 1");
  app->add_option("--tol", c.spectral_tol, "power iteration tolerance");
  app->add_option("--max-iter", c.max_iter, "power iteration cap");
  app->add_option("--memory-budget", c.memory_budget_mb, "matrix build budget in MiB (0 = unlimited)");
  app->add_flag("--verbose", c.verbose, "log progress and a radius scan to stderr");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Certified lower bounds for oriented percolation critical points"};
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "worker threads (default: PERC_BOUND_THREADS or all cores)");
  app.add_option("--format", c.format, "text | json | csv");
  app.add_option("--output,-o", c.output, "write the result to this file");

  auto* compute = app.add_subcommand("compute", "largest certified subcritical parameter");
  add_model_flags(compute, c, true);
  add_search_flags(compute, c);

  auto* spectral = app.add_subcommand("spectral", "spectral radius of the mean matrix at one point");
  add_model_flags(spectral, c, true);
  spectral->add_option("--p", c.p, "parameter value")->required();
  add_search_flags(spectral, c);

  auto* transitions = app.add_subcommand("transitions", "one row of the mean matrix");
  add_model_flags(transitions, c, true);
  transitions->add_option("--state", c.state, "bit string, with /letter for tagged models")->required();
  transitions->add_option("--p", c.p, "evaluate at this parameter");

  auto* oracle = app.add_subcommand("oracle", "independent checks");
  oracle->require_subcommand(1);
  auto* exact = oracle->add_subcommand("exact", "exact probability of reaching depth n");
  add_model_flags(exact, c, false);
  exact->add_option("--n", c.depth, "depth")->required();
  exact->add_option("--p", c.p, "parameter value")->required();
  auto* mc = oracle->add_subcommand("mc", "Monte Carlo survival to a depth");
  add_model_flags(mc, c, false);
  mc->add_option("--p", c.p, "parameter value")->required();
  mc->add_option("--depth", c.depth, "depth")->required();
  mc->add_option("--trials", c.trials, "number of clusters");
  mc->add_option("--seed", c.seed, "generator seed");
  auto* children = oracle->add_subcommand("children", "children of one state by exhaustive enumeration");
  add_model_flags(children, c, true);
  children->add_option("--state", c.state, "bit string, with /letter for tagged models")->required();
  children->add_option("--p", c.p, "evaluate at this parameter");

  auto* tables = app.add_subcommand("tables", "recompute a reference table");
  tables->add_option("table", c.table, "main | comparison | inhomogeneous | three-d")->required();
  tables->add_option("--k", c.table_k, "run 2D rows at Plain(k)");
  tables->add_option("--L", c.table_L, "run 3D rows at triangle side L");
  add_search_flags(tables, c);

  auto* cache = app.add_subcommand("cache", "binary matrix cache");
  cache->require_subcommand(1);
  auto* cwrite = cache->add_subcommand("write", "build a matrix and store it");
  add_model_flags(cwrite, c, true);
  cwrite->add_option("--file", c.cache_file, "cache path")->required();
  auto* cread = cache->add_subcommand("read", "load a stored matrix");
  cread->add_option("--file", c.cache_file, "cache path")->required();
  cread->add_option("--p", c.p, "also report the spectral radius here");
  cread->add_option("--p2", c.p2, "second parameter");

  for (CLI::App* sub : {compute, spectral, transitions, oracle, exact, mc, children, tables, cache, cwrite, cread})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const Format f = parse_format(c.format);
    std::ofstream file;
    if (!c.output.empty()) {
      file.open(c.output);
      if (!file) throw InvalidArgument("cannot open '" + c.output + "' for writing");
    }
    std::ostream& sink = c.output.empty() ? out : file;
    if (c.threads < 1) throw InvalidArgument("--threads must be at least 1");

    if (*compute) return cmd_compute(c, f, sink, err);
    if (*spectral) return cmd_spectral(c, f, sink, err);
    if (*transitions) return cmd_transitions(c, f, sink, err);
    if (*exact) return cmd_oracle_exact(c, f, sink, err);
    if (*mc) return cmd_oracle_mc(c, f, sink, err);
    if (*children) return cmd_oracle_children(c, f, sink, err);
    if (*tables) return cmd_tables(c, f, sink, err);
    if (*cwrite) return cmd_cache_write(c, f, sink, err);
    if (*cread) return cmd_cache_read(c, f, sink, err);
    err << "error: no command\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const MemoryBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kMemoryBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace percbound::cli
