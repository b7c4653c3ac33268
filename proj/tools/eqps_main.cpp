#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "eqps/corpus.hpp"
#include "eqps/json_io.hpp"

using namespace eqps;

namespace {

int exit_code_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::BadInput: return 1;
    case ErrorKind::Precondition: return 2;
    case ErrorKind::Algorithm: return 3;
  }
  return 1;
}

EquivariantResolutionGraph resolve_graph(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path))
    return graph_from_json(load_json_file(name_or_path));
  if (const char* dir = std::getenv("EQPS_CORPUS_DIR")) {
    fs::path p = fs::path(dir) / (name_or_path + ".json");
    if (fs::exists(p))
      return graph_from_json(load_json_file(p.string()));
  }
  return corpus_graph(name_or_path);
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json_file(out_path, j);
}

int cmd_compute(const std::string& graph_arg, int truncate, const std::string& reduce,
                const std::string& out_path) {
  auto g = resolve_graph(graph_arg);
  require_valid(g);
  auto p = poincare(g);
  int T = truncate > 0 ? truncate : default_truncation(p.factors);
  json j;
  j["graph"] = graph_arg;
  j["truncation"] = T;
  j["reduction"] = reduce;
  if (reduce == "none") {
    j["factored"] = factored_to_json(p.factors);
    j["expanded"] = expanded_to_json(expand(p.factors, T));
  } else if (reduce == "rho") {
    auto f = rho(p.factors);
    j["factored"] = factored_to_json(f);
    j["expanded"] = expanded_to_json(expand(f, T));
  } else if (reduce == "rhohat") {
    auto f = rho_hat(p.factors);
    j["factored"] = factored_to_json(f);
    j["expanded"] = expanded_to_json(expand(f, T));
  } else {
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "unknown reduction " + reduce);
  }
  emit(j, out_path);
  return 0;
}

int cmd_factor(const std::string& series_path, const std::string& out_path) {
  json in = load_json_file(series_path);
  if (!in.contains("terms"))
    fail(ErrorCode::BadFile, ErrorKind::BadInput,
         "factor expects an expanded series with a terms array");
  std::string ring = ring_tag_of(in);
  json out;
  if (ring == "Z") {
    out = factored_to_json(factor(expanded_z_from_json(in)));
  } else if (ring == "A") {
    auto g = group_of_series(in);
    out = factored_to_json(factor(expanded_a_from_json(in, g)));
  } else if (ring == "Atilde") {
    auto g = group_of_series(in);
    out = factored_to_json(factor(expanded_at_from_json(in, g)));
  } else {
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "unknown ring tag " + ring);
  }
  emit(out, out_path);
  return 0;
}

int cmd_reconstruct(const std::string& series_path, const std::string& mode, int truncate,
                    const std::string& out_path) {
  json in = load_json_file(series_path);
  std::string ring = ring_tag_of(in);
  GroupPtr g = group_of_series(in);
  if (!g)
    fail(ErrorCode::BadFile, ErrorKind::BadInput,
         "reconstruction input must embed its group");

  FactoredSeries<ARing> reduced(ARing{g}, 1);
  std::optional<FactoredSeries<AtRing>> unreduced;
  if (in.contains("factors")) {
    if (ring == "A") {
      reduced = factored_a_from_json(in, g);
    } else if (ring == "Atilde") {
      unreduced = factored_at_from_json(in, g);
      reduced = rho(*unreduced);
    } else {
      fail(ErrorCode::BadFile, ErrorKind::BadInput,
           "reconstruction expects coefficients in A(G) or its equipped version");
    }
  } else {
    if (truncate <= 0)
      fail(ErrorCode::NonUnitConstant, ErrorKind::Precondition,
           "expanded input needs an explicit truncation");
    if (ring == "A") {
      reduced = factor(expanded_a_from_json(in, g));
    } else if (ring == "Atilde") {
      unreduced = factor(expanded_at_from_json(in, g));
      reduced = rho(*unreduced);
    } else {
      fail(ErrorCode::BadFile, ErrorKind::BadInput,
           "reconstruction expects coefficients in A(G) or its equipped version");
    }
  }

  EquivariantResolutionGraph graph;
  if (mode == "divisorial")
    graph = reconstruct_divisorial_collection(reduced, g);
  else if (mode == "curve")
    graph = reconstruct_curve_collection(reduced, g);
  else
    fail(ErrorCode::BadFile, ErrorKind::BadInput, "mode must be divisorial or curve");

  json out;
  if (unreduced) {
    try {
      auto rep = recover_representation(*unreduced, graph);
      refine_decorations(graph, rep);
      out["representation"] = representation_to_json(rep.character, g);
      out["tails"] = tails_to_json(rep.tails);
    } catch (const Error& e) {
      out["representation_error"] = e.what();
    }
  }
  out["graph"] = graph_to_json(graph);
  emit(out, out_path);
  return 0;
}

int cmd_roundtrip(const std::string& graph_arg, const std::string& out_path) {
  auto g = resolve_graph(graph_arg);
  auto report = roundtrip(g);
  json j;
  j["graph"] = graph_arg;
  j["isomorphic"] = report.isomorphic_graphs;
  j["ok"] = report.ok;
  if (!report.failed_stage.empty())
    j["failed_stage"] = report.failed_stage;
  j["representation"] = representation_to_json(report.representation, g.group);
  j["tails"] = tails_to_json(report.tails);
  emit(j, out_path);
  return report.ok ? 0 : 3;
}

int cmd_check(const std::string& out_path) {
  json fixtures = json::array();
  bool all_ok = true;
  for (const auto& name : corpus_names()) {
    json row;
    row["fixture"] = name;
    auto g = corpus_graph(name);
    auto report = roundtrip(g);
    row["roundtrip"] = report.ok;
    bool rhohat_ok = false;
    try {
      auto p = poincare(g);
      rhohat_ok = rho_hat(p.factors) == nonequivariant_acampo(g) &&
                  expand(rho_hat(p.factors), 24) == expand(nonequivariant_acampo(g), 24);
    } catch (const Error&) {
    }
    row["rhohat_identity"] = rhohat_ok;
    if (!report.ok || !rhohat_ok)
      all_ok = false;
    fixtures.push_back(row);
  }
  json j;
  j["fixtures"] = fixtures;
  j["pass"] = all_ok;
  emit(j, out_path);
  return all_ok ? 0 : 3;
}

int cmd_corpus(const std::string& action, const std::string& name,
               const std::string& out_path) {
  if (action == "list") {
    for (const auto& n : corpus_names())
      std::cout << n << "\n";
    return 0;
  }
  if (action == "emit") {
    auto g = corpus_graph(name);
    std::string path = out_path.empty() ? name + ".json" : out_path;
    write_json_file(path, graph_to_json(g));
    std::cout << path << "\n";
    return 0;
  }
  fail(ErrorCode::BadFile, ErrorKind::BadInput, "corpus action must be list or emit");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant Poincare series of plane valuations"};
  app.require_subcommand(1);

  std::string graph_arg, series_path, out_path, reduce = "none", mode, corpus_name;
  int truncate = 0;

  auto* compute = app.add_subcommand("compute", "series of a resolution graph");
  compute->add_option("--graph", graph_arg, "graph file or fixture name")->required();
  compute->add_option("--truncate", truncate, "total-degree truncation");
  compute->add_option("--reduce", reduce, "none | rho | rhohat");
  compute->add_option("--out", out_path, "output file");

  auto* fac = app.add_subcommand("factor", "factor an expanded series");
  fac->add_option("--series", series_path, "expanded series file")->required();
  fac->add_option("--out", out_path, "output file");

  auto* rec = app.add_subcommand("reconstruct", "graph from a reduced series");
  rec->add_option("--series", series_path, "factored or expanded series file")->required();
  rec->add_option("--mode", mode, "divisorial | curve")->required();
  rec->add_option("--truncate", truncate, "truncation for expanded input");
  rec->add_option("--out", out_path, "output file");

  auto* rt = app.add_subcommand("roundtrip", "series of a graph and back");
  rt->add_option("--graph", graph_arg, "graph file or fixture name")->required();
  rt->add_option("--out", out_path, "output file");

  auto* chk = app.add_subcommand("check", "verify the bundled corpus");
  chk->add_option("--out", out_path, "output file");

  auto* cor = app.add_subcommand("corpus", "list or emit bundled fixtures");
  std::string corpus_action;
  cor->add_option("action", corpus_action, "list | emit")->required();
  cor->add_option("name", corpus_name, "fixture name");
  cor->add_option("--out", out_path, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed())
      return cmd_compute(graph_arg, truncate, reduce, out_path);
    if (fac->parsed())
      return cmd_factor(series_path, out_path);
    if (rec->parsed())
      return cmd_reconstruct(series_path, mode, truncate, out_path);
    if (rt->parsed())
      return cmd_roundtrip(graph_arg, out_path);
    if (chk->parsed())
      return cmd_check(out_path);
    if (cor->parsed())
      return cmd_corpus(corpus_action, corpus_name, out_path);
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_of(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
