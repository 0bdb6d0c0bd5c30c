// Copyright 2026 The gnncirc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gnncirc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "gnncirc/circuit_io.hpp"
#include "gnncirc/compile_c2g.hpp"
#include "gnncirc/compile_g2c.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/eval.hpp"
#include "gnncirc/normal_form.hpp"
#include "gnncirc/verify.hpp"

namespace gnncirc {

namespace {

namespace fs = std::filesystem;

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::Exact;
  if (name == "float") return Backend::Float;
  throw ParseError("unknown backend '" + name + "'");
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

// "3", "1..8" or "2,4,6".
std::vector<std::size_t> parse_range(std::string_view text) {
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    std::size_t lo = parse_count(text.substr(0, dots));
    std::size_t hi = parse_count(text.substr(dots + 2));
    if (lo > hi) throw ParseError("empty range '" + std::string(text) + "'");
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = std::min(text.find(',', pos), text.size());
    out.push_back(parse_count(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

void print_vectors(std::ostream& out, std::span<const VecK> values) {
  for (const auto& v : values) out << v.str() << "\n";
}

void print_trace(std::ostream& out, const std::vector<std::vector<VecK>>& trace) {
  if (trace.empty()) return;
  out << "layer";
  for (std::size_t v = 0; v < trace[0].size(); ++v) out << "\tv" << v + 1;
  out << "\n";
  for (std::size_t l = 0; l < trace.size(); ++l) {
    out << l;
    for (const auto& f : trace[l]) out << "\t" << f.str();
    out << "\n";
  }
}

void print_report(std::ostream& out, const Circuit& c) {
  require_valid(c, "report");
  const Measure m = measure(c);
  std::map<std::size_t, std::map<std::string, std::size_t>> strata;
  for (GateId g = 0; g < c.size(); ++g) {
    std::string label = kind_label(c.gate(g).kind);
    if (c.gate(g).op() == GateOp::Input) label = "INPUT";
    if (c.gate(g).op() == GateOp::Output) label = "OUTPUT";
    if (c.gate(g).op() == GateOp::Const) label = "CONST";
    ++strata[m.gate_depth[g]][label];
  }
  out << "dim\t" << c.dim() << "\n";
  out << "size\t" << m.size << "\n";
  out << "depth\t" << m.depth << "\n";
  out << "inputs\t" << c.inputs().size() << "\n";
  out << "outputs\t" << c.outputs().size() << "\n";
  out << "path-length-normal\t" << (is_path_length_normal(c) ? "yes" : "no") << "\n";
  out << "\ndepth\tgates\tkinds\n";
  for (const auto& [d, kinds] : strata) {
    std::size_t total = 0;
    std::string list;
    for (const auto& [label, count] : kinds) {
      total += count;
      if (!list.empty()) list += " ";
      list += label + "x" + std::to_string(count);
    }
    out << d << "\t" << total << "\t" << list << "\n";
  }
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

int cmd_eval_circuit(Context& ctx, const std::string& file, const std::string& inputs,
                     const std::string& backend) {
  Circuit c = read_circuit_file(file);
  auto values = parse_input_list(inputs, c.dim());
  print_vectors(ctx.out, eval_circuit(c, values, campaign_options(parse_backend(backend))));
  return kExitOk;
}

int cmd_eval_gnn(Context& ctx, const std::string& model, const std::string& graph_file,
                 bool trace, const std::string& backend) {
  CGnn net = read_cgnn_file(model);
  LabeledGraph g = parse_graph(read_text_file(graph_file));
  EvalOptions options = campaign_options(parse_backend(backend));
  if (trace) {
    print_trace(ctx.out, eval_cgnn_trace(net, g, options));
  } else {
    LabeledGraph result = eval_cgnn(net, g, options);
    for (std::size_t v = 0; v < result.size(); ++v) {
      ctx.out << "v" << v + 1 << "\t" << result.features()[v].str() << "\n";
    }
  }
  return kExitOk;
}

int cmd_check_form(Context& ctx, const std::string& file) {
  Circuit c = read_circuit_file(file);
  ValidationReport report = validate_circuit(c);
  ctx.out << "valid\t" << (report.ok() ? "yes" : "no") << "\n";
  for (const auto& v : report.violations) {
    ctx.out << "violation\t" << to_string(v.kind) << "\tg" << v.gate << "\t" << v.message << "\n";
  }
  for (const auto& n : report.notes) ctx.out << "note\t" << n << "\n";
  if (!report.ok()) return kExitOk;
  ctx.out << "path-length-normal\t" << (is_path_length_normal(c) ? "yes" : "no") << "\n";
  ctx.out << "function-layer\t" << (is_function_layer_form(c) ? "yes" : "no") << "\n";
  for (const auto& p : liveness_audit(c)) ctx.out << "liveness\t" << p << "\n";
  return kExitOk;
}

int cmd_compile_g2c(Context& ctx, const std::string& model, const std::string& range,
                    const std::string& out_dir) {
  CGnn net = read_cgnn_file(model);
  G2cPlan plan = compile_gnn_to_circuit_family(net);
  ctx.out << "n\tsize\tdepth\n";
  for (std::size_t n : parse_range(range)) {
    if (n == 0) throw Error("compile g2c: n must be positive");
    G2cResources r = plan.resources(n);
    ctx.out << n << "\t" << r.size << "\t" << r.depth << "\n";
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_text_file(fs::path(out_dir) / ("K_" + std::to_string(n) + ".circ"),
                      format_circuit(plan.circuit(n)));
    }
  }
  return kExitOk;
}

int cmd_compile_c2g(Context& ctx, const std::string& file, const std::string& regime_name,
                    const std::string& inputs, const std::string& out_dir) {
  Circuit c = read_circuit_file(file);
  Regime regime = parse_regime(regime_name);
  C2gCompilation comp = compile_circuit_to_gnn(c, regime);
  const C2gPlan& plan = comp.plan;
  const Circuit& nc = plan.normalized();

  std::vector<VecK> values;
  if (!inputs.empty()) {
    values = parse_input_list(inputs, nc.dim());
  } else {
    values.assign(nc.inputs().size(), VecK::zeros(nc.dim()));
  }
  CircuitGraph cg = plan.graph_for(values);

  ctx.out << "regime\t" << to_string(regime) << "\n";
  ctx.out << "layers\t" << comp.gnn.depth() << "\n";
  ctx.out << "vertices\t" << cg.graph.size() << "\n";
  ctx.out << "edges\t" << cg.graph.edges().size() << "\n";
  for (std::size_t i = 1; i <= plan.depth(); ++i) {
    const C2gLayer& layer = plan.layer(i);
    std::map<std::string, std::size_t> kinds;
    for (GateId g : layer.stratum) ++kinds[kind_label(nc.gate(g).kind)];
    ctx.out << "layer " << i << "\tactivation " << layer.activation << "\tstratum";
    for (const auto& [label, count] : kinds) ctx.out << " " << label << "x" << count;
    if (layer.renumbered) ctx.out << "\trenumbered";
    ctx.out << "\n";
  }
  std::string outs;
  for (std::size_t v : cg.output_vertices(nc)) {
    outs += (outs.empty() ? "" : ",") + std::to_string(v + 1);
  }
  ctx.out << "output-vertices\t" << outs << "\n";
  for (const auto& w : cg.warnings) ctx.err << "warning: " << w << "\n";

  if (!out_dir.empty()) {
    std::set<std::size_t> arity_set;
    for (std::size_t v = 0; v < cg.graph.size(); ++v) {
      arity_set.insert(cg.graph.neighbors(v).size() + 1);
    }
    std::vector<std::size_t> arities(arity_set.begin(), arity_set.end());
    std::string stem = fs::path(file).stem().string();
    fs::path desc = write_cgnn_files(comp.gnn, out_dir, stem, arities);
    ctx.out << "wrote\t" << desc.string() << "\n";
    if (!inputs.empty()) {
      fs::path graph_path = fs::path(out_dir) / (stem + ".graph");
      write_text_file(graph_path, format_graph(cg.graph));
      ctx.out << "wrote\t" << graph_path.string() << "\n";
    }
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string mode;
  std::vector<std::string> files;
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::string bounds;
  std::string regime = "plain";
  std::string backend = "exact";
  std::string inputs;
};

int cmd_verify(Context& ctx, const VerifyArgs& a) {
  const Backend backend = parse_backend(a.backend);
  const EvalOptions options = campaign_options(backend);
  if (a.mode != "g2c" && a.mode != "c2g") {
    throw ParseError("verify: mode must be g2c or c2g");
  }
  if (!a.files.empty()) {
    VerifyReport r;
    if (a.mode == "g2c") {
      if (a.files.size() != 2) throw ParseError("verify g2c: expected <cgnn> <graph>");
      r = verify_g2c(read_cgnn_file(a.files[0]),
                     parse_graph(read_text_file(a.files[1])), options);
    } else {
      if (a.files.size() != 1) throw ParseError("verify c2g: expected <circuit>");
      Circuit c = read_circuit_file(a.files[0]);
      r = verify_c2g(c, parse_input_list(a.inputs, c.dim()), parse_regime(a.regime),
                     options);
    }
    ctx.out << a.mode << " : " << r.str() << "\n";
    if (!r.compiled) return kExitSemantic;
    return r.match ? kExitOk : kExitMismatch;
  }
  TestSpec spec;
  spec.seed = a.seed;
  spec.count = a.count;
  spec.bounds = parse_bounds(a.bounds);
  spec.backend = backend;
  CampaignReport report = a.mode == "g2c"
                              ? run_g2c_campaign(spec)
                              : run_c2g_campaign(spec, parse_regime(a.regime));
  ctx.out << report.text;
  return report.ok() ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compiler between constant-depth arithmetic circuits and graph neural networks",
               "gnncirc"};
  app.require_subcommand(1);
  Context ctx{out, err};
  std::function<int()> action;

  std::string file, file2, inputs, backend = "exact", range, out_dir, regime = "plain";
  bool trace = false;

  auto* eval_c = app.add_subcommand("eval-circuit", "Evaluate a circuit on inputs");
  eval_c->add_option("circuit", file, "Circuit file")->required();
  eval_c->add_option("--inputs", inputs, "Inputs: 6,9,5 or a,b;c,d")->required();
  eval_c->add_option("--backend", backend, "exact or float");
  eval_c->callback([&] { action = [&] { return cmd_eval_circuit(ctx, file, inputs, backend); }; });

  auto* eval_g = app.add_subcommand("eval-gnn", "Run a C-GNN on a labeled graph");
  eval_g->add_option("cgnn", file, "C-GNN description")->required();
  eval_g->add_option("graph", file2, "Graph file")->required();
  eval_g->add_flag("--trace", trace, "Print the features after every layer");
  eval_g->add_option("--backend", backend, "exact or float");
  eval_g->callback([&] {
    action = [&] { return cmd_eval_gnn(ctx, file, file2, trace, backend); };
  });

  auto* norm = app.add_subcommand("normalize", "Print the path-length normal form");
  norm->add_option("circuit", file, "Circuit file")->required();
  norm->callback([&] {
    action = [&] {
      out << format_circuit(to_path_length_normal_form(read_circuit_file(file)));
      return int{kExitOk};
    };
  });

  auto* check = app.add_subcommand("check-form", "Validate and classify a circuit");
  check->add_option("circuit", file, "Circuit file")->required();
  check->callback([&] { action = [&] { return cmd_check_form(ctx, file); }; });

  auto* encode = app.add_subcommand("encode-graph", "Print the circuit input encoding of a graph");
  encode->add_option("graph", file, "Graph file")->required();
  encode->callback([&] {
    action = [&] {
      print_vectors(out, encode_graph(parse_graph(read_text_file(file))));
      return int{kExitOk};
    };
  });

  auto* compile = app.add_subcommand("compile", "Compile between the two models");
  compile->require_subcommand(1);
  auto* g2c = compile->add_subcommand("g2c", "C-GNN to circuit family");
  g2c->add_option("cgnn", file, "C-GNN description")->required();
  g2c->add_option("--n", range, "Graph sizes: 4, 1..8 or 2,4")->required();
  g2c->add_option("--out", out_dir, "Directory for K_<n>.circ files");
  g2c->callback([&] { action = [&] { return cmd_compile_g2c(ctx, file, range, out_dir); }; });
  auto* c2g = compile->add_subcommand("c2g", "Circuit to C-GNN");
  c2g->add_option("circuit", file, "Circuit file")->required();
  c2g->add_option("--regime", regime, "plain, gates or actlayers");
  c2g->add_option("--inputs", inputs, "Inputs for the graph file");
  c2g->add_option("--out", out_dir, "Directory for the C-GNN and graph files");
  c2g->callback([&] {
    action = [&] { return cmd_compile_c2g(ctx, file, regime, inputs, out_dir); };
  });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Differential checks of both compilers");
  verify->add_option("mode", va.mode, "g2c or c2g")->required();
  verify->add_option("files", va.files, "Single instance: <cgnn> <graph> or <circuit>");
  verify->add_option("--seed", va.seed, "Campaign seed");
  verify->add_option("--count", va.count, "Campaign size");
  verify->add_option("--bounds", va.bounds, "n=6,depth=4,size=20,k=2,mag=100,layers=3");
  verify->add_option("--regime", va.regime, "plain, gates or actlayers");
  verify->add_option("--backend", va.backend, "exact or float");
  verify->add_option("--inputs", va.inputs, "Inputs for a single c2g instance");
  verify->callback([&] { action = [&] { return cmd_verify(ctx, va); }; });

  auto* report = app.add_subcommand("report", "Size and depth statistics");
  report->add_option("circuit", file, "Circuit file")->required();
  report->callback([&] {
    action = [&] {
      print_report(out, read_circuit_file(file));
      return int{kExitOk};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FileError& e) {
    err << "file error: " << e.what() << "\n";
    return kExitFile;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << "\n";
    return kExitFile;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

}  // namespace gnncirc
