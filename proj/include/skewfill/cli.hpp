#pragma once

// Command-line front end. `run` returns the process exit code: 0 success or pass,
// 1 verification failure, 2 usage or input error. Output is assembled in a buffer
// and written once.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewfill/chain_bijection.hpp"
#include "skewfill/enumeration.hpp"
#include "skewfill/errors.hpp"
#include "skewfill/filling.hpp"
#include "skewfill/shape.hpp"
#include "skewfill/skew_structure.hpp"
#include "skewfill/verify.hpp"

namespace skewfill::cli {

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Pattern pattern_arg(const std::string& token, std::istream& in) {
  if (!token.empty() && token.front() == '@') return Pattern::from_filling(parse_filling(read_input(token.substr(1), in)));
  return Pattern::parse(token);
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace detail

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern avoidance in fillings of skew shapes", "skewfill"};
  app.require_subcommand(1);

  // classify
  auto* classify = app.add_subcommand("classify", "Report the geometric classes of a shape");
  std::string shape_path;
  std::string format = "text";
  classify->add_option("shape", shape_path, "Shape grid file ('-' for stdin)")->required();
  classify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Ferrers decomposition of a dented-shape-free skew shape");
  decompose->add_option("shape", shape_path, "Shape grid file")->required();

  // count
  auto* count = app.add_subcommand("count", "Count fillings, optionally avoiding patterns");
  std::string mode = "binary";
  int max_entry = 2;
  std::optional<int> max_total;
  std::vector<std::string> avoid_tokens;
  std::vector<int> row_sums, col_sums;
  count->add_option("shape", shape_path, "Shape grid file")->required();
  count->add_option("--mode", mode, "binary, sparse, transversal or integer")
      ->check(CLI::IsMember({"binary", "sparse", "transversal", "integer"}));
  count->add_option("--max-entry", max_entry, "Largest entry in integer mode (default 2)");
  count->add_option("--max-total", max_total, "Largest total sum in integer mode (default unbounded)");
  count->add_option("--avoid", avoid_tokens, "iota<k>, delta<k>, fd or @file; repeat to avoid several");
  count->add_option("--row-sums", row_sums, "Required row sums, bottom row first")->delimiter(',');
  count->add_option("--col-sums", col_sums, "Required column sums, left column first")->delimiter(',');
  count->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  // enum-shapes
  auto* enum_shapes = app.add_subcommand("enum-shapes", "List shapes in row-interval notation");
  std::optional<int> cells;
  std::optional<int> max_cells;
  bool connected = false, ds_free = false;
  std::string kind = "skew";
  enum_shapes->add_option("--cells", cells, "Exact cell count");
  enum_shapes->add_option("--max-cells", max_cells, "All cell counts from 1 up to this");
  enum_shapes->add_flag("--connected", connected, "Connected shapes only");
  enum_shapes->add_flag("--ds-free", ds_free, "Shapes avoiding the dented shape only");
  enum_shapes->add_option("--kind", kind, "skew, moon or nw-ferrers")->check(CLI::IsMember({"skew", "moon", "nw-ferrers"}));

  // bijection
  auto* bijection = app.add_subcommand("bijection", "Run the delta2 <-> {iota2, fd} bijection on a binary filling");
  std::string filling_path;
  bool forward = false, backward = false, trace = false;
  std::optional<int> step;
  bijection->add_option("filling", filling_path, "Filling grid file")->required();
  auto* fwd = bijection->add_flag("--forward", forward, "Map a delta2-avoider to an {iota2, fd}-avoider (default)");
  bijection->add_flag("--backward", backward, "Map an {iota2, fd}-avoider back")->excludes(fwd);
  bijection->add_flag("--trace", trace, "Print one line per step");
  bijection->add_option("--step", step, "Apply only step i");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustively check a property over a shape range");
  std::string property;
  VerifyParams prm;
  std::string verify_shape;
  bool timing = false;
  verify_cmd->add_option("property", property, "cor_sskew, conjecture, thm_bp, genskew, lemma_gi, lem_ferrers, rubey, ds_free_oracle")
      ->required()
      ->check(CLI::IsMember(property_names()));
  verify_cmd->add_option("--max-cells", prm.max_cells, "Largest shape size");
  verify_cmd->add_option("--min-cells", prm.min_cells, "Smallest shape size (default 1)");
  verify_cmd->add_option("--k", prm.ks, "Pattern size; repeat for several (default 2 and 3)");
  verify_cmd->add_option("--max-entry", prm.max_entry, "Entry cap for integer scans (default 2)");
  verify_cmd->add_option("--refine-cells", prm.refine_cells, "cor_sskew: largest shape for the sum-refined check");
  verify_cmd->add_option("--frame-max", prm.frame_max, "lem_ferrers: largest k and l (default 2)");
  verify_cmd->add_option("--shape", verify_shape, "Check a single shape from a grid file");
  verify_cmd->add_option("--jobs", prm.jobs, "Worker threads (default 1)")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--detail", prm.detail, "Per-instance notes");
  verify_cmd->add_flag("--all-perms", prm.all_perms, "rubey: every moon-preserving column permutation");
  verify_cmd->add_flag("--binary", prm.binary, "rubey: binary fillings instead of integer fillings");
  verify_cmd->add_flag("--budget-override", prm.budget_override, "Allow ranges above the default budgets");
  verify_cmd->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  verify_cmd->add_flag("--timing", timing, "Include wall time in the report");

  std::vector<std::string> args;
  for (int t = argc - 1; t >= 1; --t) args.emplace_back(argv[t]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, ee;
    const int code = app.exit(e, o, ee);
    out << o.str();
    err << ee.str();
    return code == 0 ? 0 : 2;
  }

  std::ostringstream buf;
  try {
    if (classify->parsed()) {
      const Shape s = parse_shape(detail::read_input(shape_path, in));
      const auto p = classify_shape(s);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["cells"] = s.size();
        j["width"] = s.width();
        j["height"] = s.height();
        j["connected"] = p.connected;
        j["convex"] = p.convex;
        j["intersection_free"] = p.intersection_free;
        j["moon"] = p.moon;
        j["nw_ferrers"] = p.nw_ferrers;
        j["se_ferrers"] = p.se_ferrers;
        j["skew"] = p.skew;
        if (p.ds_free) j["ds_free"] = *p.ds_free;
        else j["ds_free"] = nullptr;
        buf << j.dump(2) << '\n';
      } else {
        buf << "cells: " << s.size() << '\n' << "width: " << s.width() << '\n' << "height: " << s.height() << '\n';
        buf << "connected: " << detail::yes_no(p.connected) << '\n';
        buf << "convex: " << detail::yes_no(p.convex) << '\n';
        buf << "intersection_free: " << detail::yes_no(p.intersection_free) << '\n';
        buf << "moon: " << detail::yes_no(p.moon) << '\n';
        buf << "nw_ferrers: " << detail::yes_no(p.nw_ferrers) << '\n';
        buf << "se_ferrers: " << detail::yes_no(p.se_ferrers) << '\n';
        buf << "skew: " << detail::yes_no(p.skew) << '\n';
        buf << "ds_free: " << (p.ds_free ? detail::yes_no(*p.ds_free) : "n/a") << '\n';
      }
    } else if (decompose->parsed()) {
      const Shape s = parse_shape(detail::read_input(shape_path, in));
      buf << render_decomposition(s, decompose_components(s));
    } else if (count->parsed()) {
      const Shape s = parse_shape(detail::read_input(shape_path, in));
      EnumSpec spec;
      spec.mode = parse_fill_mode(mode);
      spec.max_entry = max_entry;
      spec.max_total = max_total;
      if (!row_sums.empty() || !col_sums.empty()) spec.sums = SumVector{row_sums, col_sums};
      for (const auto& tok : avoid_tokens) spec.avoid.push_back(detail::pattern_arg(tok, in));
      const auto n = count_avoiders(s, spec);
      if (format == "csv") buf << count_csv_header() << count_csv_row(s, spec.avoid, spec.mode, n);
      else buf << n << '\n';
    } else if (enum_shapes->parsed()) {
      if (cells.has_value() == max_cells.has_value()) throw ParseError("give exactly one of --cells and --max-cells");
      const int lo = cells ? *cells : 1, hi = cells ? *cells : *max_cells;
      if (lo < 1) throw ParseError("cell count must be at least 1");
      if (kind != "skew" && (connected || ds_free)) throw ParseError("--connected/--ds-free apply to skew shapes");
      for (int n = lo; n <= hi; ++n) {
        std::vector<Shape> shapes;
        if (kind == "skew") shapes = enum_skew_shapes(n, {connected, ds_free});
        else if (kind == "moon") shapes = enum_moon_polyominoes(n);
        else shapes = enum_nw_ferrers(n);
        for (const auto& s : shapes) buf << format_row_intervals(s) << '\n';
      }
    } else if (bijection->parsed()) {
      const Filling f = parse_filling(detail::read_input(filling_path, in));
      ChainBijection cb(f.shape());
      std::uint64_t b = skewfill::detail::binary_bits(f);
      BijectionTrace tr;
      std::uint64_t result = 0;
      if (step) {
        int cls = 0;
        if (backward) {
          result = cb.backward(b, *step);
          cls = cb.anatomy(*step).row_break ? 0 : cb.class_of(b, *step, StepSide::upper);
        } else {
          result = cb.forward(b, *step);
          cls = cb.anatomy(*step).row_break ? 0 : cb.class_of(b, *step, StepSide::lower);
        }
        tr.push_back({*step, cb.anatomy(*step).row_break, cls, b, result});
      } else {
        result = backward ? cb.full_backward(b, &tr, true) : cb.full_forward(b, &tr, true);
      }
      buf << render_filling(Filling::from_bits(f.shape(), result));
      if (trace) buf << format_trace(tr, cb.size());
    } else if (verify_cmd->parsed()) {
      if (!verify_shape.empty()) prm.shape = parse_shape(detail::read_input(verify_shape, in));
      auto rep = verify(property, prm);
      if (!timing) rep.millis.reset();
      if (format == "csv") buf << format_report_csv(rep);
      else if (format == "json") buf << format_report_json(rep);
      else buf << format_report_text(rep);
      out << buf.str();
      return rep.passed() ? 0 : 1;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    // postcondition violations from the bijection
    out << buf.str();
    err << "verification failure: " << e.what() << '\n';
    return 1;
  }
  out << buf.str();
  return 0;
}

}  // namespace skewfill::cli
