#ifndef WLIP_TOOLS_CLI_HPP_
#define WLIP_TOOLS_CLI_HPP_

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wlip/wlip.hpp"

namespace wlip::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

inline void check_points(const Model& m, std::size_t max_points) {
  for (const auto& s : m.spaces())
    if (s.carrier.size() > max_points) {
      throw Error(Errc::too_many_points, "space " + s.name + " has " + std::to_string(s.carrier.size()) +
                                             " points; --max-points is " + std::to_string(max_points));
    }
}

inline Model load(const std::string& path, std::size_t max_points) {
  Model m = parse_model(read_file(path));
  check_points(m, max_points);
  return m;
}

inline const BaseDecl& base_arg(const Model& m, const std::string& name) {
  const auto* b = m.find_base(name);
  if (!b) throw UsageError("no base named " + name);
  return *b;
}

}  // namespace detail

/// Runs one command; all output goes to `out` or `err` once the command ends.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite weak Lipschitz structures: validation, classification and law checking", "wlip"};
  app.require_subcommand(1);
  bool json = false;
  std::size_t max_points = 12;
  app.add_flag("--json", json, "Emit one JSON document instead of key=value lines");
  app.add_option("--max-points", max_points, "Largest carrier accepted")->capture_default_str();

  std::string file;
  std::string map_name, from_base, to_base, base_name, out_path, bases_list, law_id, induce_kind;
  bool strict_remark = false;
  std::size_t n = 0, trials = 0, workers = 1;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Load and validate a model file");
  validate->add_option("FILE", file)->required();

  auto* classify = app.add_subcommand("classify", "Classify a map between two bases");
  classify->add_option("FILE", file)->required();
  classify->add_option("--map", map_name)->required();
  classify->add_option("--from", from_base)->required();
  classify->add_option("--to", to_base)->required();
  classify->add_flag("--strict-remark", strict_remark, "Report the strict reading of the local remark");

  auto* induce = app.add_subcommand("induce", "Topology or uniformity defined by a base's structure");
  induce->add_option("FILE", file)->required();
  induce->add_option("KIND", induce_kind)->required()->check(CLI::IsMember({"topology", "uniformity"}));
  induce->add_option("--base", base_name)->required();
  induce->add_option("--out", out_path);

  auto* product = app.add_subcommand("product", "Product of two bases");
  product->add_option("FILE", file)->required();
  product->add_option("--bases", bases_list)->required();
  product->add_option("--out", out_path)->required();

  auto* law = app.add_subcommand("law", "Law catalog");
  law->require_subcommand(1);
  auto* law_list = law->add_subcommand("list", "List the catalog");
  auto* law_check = law->add_subcommand("check", "Evaluate a law on an instance file");
  law_check->add_option("ID", law_id)->required();
  law_check->add_option("FILE", file)->required();
  auto* law_search = law->add_subcommand("search", "Seeded counterexample search");
  law_search->add_option("ID", law_id)->required();
  law_search->add_option("--n", n)->required();
  law_search->add_option("--seed", seed)->required();
  law_search->add_option("--trials", trials)->required();
  law_search->add_option("--workers", workers)->capture_default_str();

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate finite structures");
  enumerate->require_subcommand(1);
  auto* enum_topologies = enumerate->add_subcommand("topologies", "All labelled topologies on n points");
  enum_topologies->add_option("--n", n)->required();

  // Global flags are accepted after the subcommand too.
  for (auto* sub : {validate, classify, induce, product, law_list, law_check, law_search, enum_topologies}) {
    sub->fallthrough();
  }
  law->fallthrough();
  enumerate->fallthrough();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  Report r;
  int code = kOk;
  try {
    if (validate->parsed()) {
      try {
        const Model m = detail::load(file, max_points);
        r["valid"] = true;
        r["spaces"] = m.spaces().size();
        r["metrics"] = m.metrics().size();
        r["bases"] = m.bases().size();
        r["topologies"] = m.topologies().size();
        r["families"] = m.families().size();
        r["maps"] = m.maps().size();
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        if (e.code() == Errc::too_many_points) throw;
        r["valid"] = false;
        r["error"] = e.what();
        code = kFail;
      }
    } else if (classify->parsed()) {
      const Model m = detail::load(file, max_points);
      const auto* f = m.find_map(map_name);
      if (!f) throw UsageError("no map named " + map_name);
      const auto& bx = detail::base_arg(m, from_base);
      const auto& by = detail::base_arg(m, to_base);
      if (bx.space != f->from || by.space != f->to) {
        throw Error(Errc::carrier_mismatch, "map " + map_name + " goes " + f->from + " -> " + f->to + ", bases are on " +
                                                bx.space + " and " + by.space);
      }
      r["map"] = map_name;
      r["from"] = from_base;
      r["to"] = to_base;
      r.update(to_report(wlip::classify(f->map, bx.base, by.base), strict_remark ? RemarkMode::strict : RemarkMode::relaxed));
    } else if (induce->parsed()) {
      const Model m = detail::load(file, max_points);
      const auto& b = detail::base_arg(m, base_name);
      r["base"] = base_name;
      std::string text;
      if (induce_kind == "topology") {
        Model t;
        t.add_space(b.space, m.space_ref(b.space).carrier);
        t.add_topology("tau_" + base_name, b.space, topology_from_structure(b.base));
        text = render_model(t);
        r["topology"] = text;
      } else {
        const auto u = uniformity_from_structure(b.base);
        text = u.kernel().to_string() + "\n";
        r["kernel"] = u.kernel().to_string();
      }
      if (!out_path.empty()) detail::write_file(out_path, text);
    } else if (product->parsed()) {
      const Model m = detail::load(file, max_points);
      const auto comma = bases_list.find(',');
      if (comma == std::string::npos) throw UsageError("--bases expects A,B");
      const auto& a = detail::base_arg(m, bases_list.substr(0, comma));
      const auto& b = detail::base_arg(m, bases_list.substr(comma + 1));
      const StructureBase both[] = {a.base, b.base};
      const StructureBase p = product_base(both);
      Model out_model;
      const std::string space = a.space + "_x_" + b.space;
      const auto& ca = m.space_ref(a.space).carrier;
      const auto& cb = m.space_ref(b.space).carrier;
      std::vector<std::string> labels;
      if (!ca.labels().empty() && !cb.labels().empty())
        for (const auto& la : ca.labels())
          for (const auto& lb : cb.labels()) labels.push_back(la + "," + lb);
      out_model.add_space(space, Carrier(p.size(), std::move(labels)));
      std::vector<std::string> names;
      for (std::size_t i = 0; i < p.generators().size(); ++i) {
        names.push_back("p" + std::to_string(i));
        out_model.add_metric(names.back(), space, p.generators()[i]);
      }
      const std::string name = a.name + "_x_" + b.name;
      out_model.add_base(name, space, names, p.kind() == StructureKind::pseudo);
      detail::write_file(out_path, render_model(out_model));
      r["product"] = name;
      r["points"] = p.size();
      r["generators"] = p.generators().size();
      r["proper"] = p.proper();
    } else if (law_list->parsed()) {
      r = catalog_report();
    } else if (law_check->parsed()) {
      const Model m = detail::load(file, max_points);
      const auto v = run_law(law_id, m);
      r = to_report(law_id, v);
      code = v.outcome == Outcome::fail ? kFail : kOk;
    } else if (law_search->parsed()) {
      law_info(law_id);
      if (n == 0 || n > max_points) throw UsageError("--n must lie in 1..--max-points");
      const auto s = search(law_id, n, seed, trials, workers);
      r = to_report(s);
      code = s.expectation_met() ? kOk : kFail;
    } else if (enum_topologies->parsed()) {
      if (n > max_points) throw UsageError("--n exceeds --max-points");
      std::string list;
      const std::size_t count = for_each_topology(n, [&](std::size_t, const FiniteTopology& t) {
        list += t.to_string() + "\n";
        return true;
      });
      r["n"] = n;
      r["count"] = count;
      r["topologies"] = list;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::invalid_argument || e.code() == Errc::too_many_points ||
                   e.code() == Errc::enumeration_limit
               ? kUsage
               : kFail;
  }
  out << render_report(r, json);
  return code;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace wlip::cli

#endif  // WLIP_TOOLS_CLI_HPP_
