// Command-line front end: parsing, model checking, the decision procedure,
// irreducible-moment dumps, simulation formulas, proof checking and the
// brute-force witness oracle.
//
// Exit codes: 0 affirmative (valid / sat / true / proof ok / witness found),
// 2 negative, 1 operational error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "itl/decide.hpp"
#include "itl/formula.hpp"
#include "itl/ipc.hpp"
#include "itl/moments.hpp"
#include "itl/proofcheck.hpp"
#include "itl/semantics.hpp"
#include "itl/simulation.hpp"
#include "itl/structures.hpp"
#include "itl/typesys.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 2;
constexpr int kExitError = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

itl::MomentBudget budget_from_env() {
  itl::MomentBudget b;
  if (const char* env = std::getenv("ITL_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_moments = static_cast<std::size_t>(v);
  }
  return b;
}

void dump_ast(const itl::Formula& f, int depth, std::ostream& out) {
  for (int i = 0; i < depth; ++i) out << "  ";
  switch (f.op()) {
    case itl::Op::Bottom: out << "false\n"; return;
    case itl::Op::Atom: out << "atom " << f.atom_name() << "\n"; return;
    case itl::Op::And: out << "and\n"; break;
    case itl::Op::Or: out << "or\n"; break;
    case itl::Op::Implies: out << "implies\n"; break;
    case itl::Op::Next: out << "next\n"; break;
    case itl::Op::Eventually: out << "eventually\n"; break;
    case itl::Op::Henceforth: out << "henceforth\n"; break;
  }
  if (f.is_binary()) {
    dump_ast(f.lhs(), depth + 1, out);
    dump_ast(f.rhs(), depth + 1, out);
  } else {
    dump_ast(f.child(), depth + 1, out);
  }
}

json ast_json(const itl::Formula& f) {
  json j;
  switch (f.op()) {
    case itl::Op::Bottom: j["op"] = "false"; return j;
    case itl::Op::Atom:
      j["op"] = "atom";
      j["name"] = f.atom_name();
      return j;
    case itl::Op::And: j["op"] = "and"; break;
    case itl::Op::Or: j["op"] = "or"; break;
    case itl::Op::Implies: j["op"] = "implies"; break;
    case itl::Op::Next: j["op"] = "next"; break;
    case itl::Op::Eventually: j["op"] = "eventually"; break;
    case itl::Op::Henceforth: j["op"] = "henceforth"; break;
  }
  if (f.is_binary()) {
    j["lhs"] = ast_json(f.lhs());
    j["rhs"] = ast_json(f.rhs());
  } else {
    j["arg"] = ast_json(f.child());
  }
  return j;
}

itl::Model load_model(const std::string& path) {
  itl::ModelResult res = itl::validate_model(itl::parse_raw_model(read_file(path)));
  if (!res.ok()) {
    std::string all = "invalid model:";
    for (const auto& e : res.errors) all += "\n  " + e;
    throw std::runtime_error(all);
  }
  return *res.model;
}

std::string irr_dump(const itl::IrrFrame& irr, bool trees) {
  std::string text = itl::dump_structure(irr.to_structure());
  if (trees) {
    std::string extra;
    for (std::size_t i = 0; i < irr.moments.size(); ++i)
      extra += "# tree m" + std::to_string(i) + " = " + irr.moments[i].code() + "\n";
    text += extra;
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for the henceforth-free fragment of intuitionistic temporal logic"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit a machine-readable envelope");

  std::string formula_text, model_path, frame_path, world_id, witness_path, dump_path,
      proof_path;
  std::string mode = "valid";
  int max_worlds = 3;
  std::size_t budget_override = 0;
  bool want_stats = false, want_trees = false, want_simplify = false;

  auto* cmd_parse = app.add_subcommand("parse", "parse a formula and dump its tree");
  cmd_parse->add_option("formula", formula_text)->required();

  auto* cmd_mc = app.add_subcommand("mc", "model-check a formula on a finite model");
  cmd_mc->add_option("--model", model_path)->required();
  cmd_mc->add_option("--formula", formula_text)->required();
  cmd_mc->add_option("--world", world_id);

  auto* cmd_decide = app.add_subcommand("decide", "decide validity or satisfiability");
  cmd_decide->add_option("--formula", formula_text)->required();
  cmd_decide->add_option("--mode", mode)->check(CLI::IsMember({"valid", "sat"}));
  cmd_decide->add_option("--witness", witness_path);
  cmd_decide->add_option("--budget", budget_override);

  auto* cmd_irr = app.add_subcommand("irr", "the frame of irreducible moments of a closure");
  cmd_irr->add_option("--sigma-of", formula_text)->required();
  cmd_irr->add_flag("--stats", want_stats);
  cmd_irr->add_option("--dump", dump_path);
  cmd_irr->add_flag("--trees", want_trees);

  auto* cmd_sim = app.add_subcommand("sim", "the simulation formula of a frame world");
  cmd_sim->add_option("--frame", frame_path)->required();
  cmd_sim->add_option("--world", world_id)->required();
  cmd_sim->add_flag("--simplify", want_simplify);

  auto* cmd_proof = app.add_subcommand("check-proof", "check a Hilbert-style proof file");
  cmd_proof->add_option("file", proof_path)->required();

  auto* cmd_oracle = app.add_subcommand("oracle", "brute-force counter-quasimodel search");
  cmd_oracle->add_option("--formula", formula_text)->required();
  cmd_oracle->add_option("--max", max_worlds)->check(CLI::Range(1, 5));
  cmd_oracle->add_option("--dump", dump_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(cmd_parse)) {
      itl::Formula f = itl::parse_formula(formula_text);
      if (as_json) {
        json j;
        j["command"] = "parse";
        j["input"] = formula_text;
        j["rendered"] = itl::render(f);
        j["ast"] = ast_json(f);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << itl::render(f) << "\n";
        dump_ast(f, 0, std::cout);
      }
      return kExitYes;
    }

    if (app.got_subcommand(cmd_mc)) {
      itl::Model m = load_model(model_path);
      itl::Formula f = itl::parse_formula(formula_text);
      itl::ClosurePtr sigma = itl::closure(f);
      auto truth = itl::truth_table(m, *sigma);
      const auto& row = truth[sigma->at(f)];
      json worlds = json::object();
      bool all = true;
      for (std::size_t w = 0; w < m.world_count(); ++w) {
        worlds[m.world_id(static_cast<int>(w))] = static_cast<bool>(row[w]);
        all = all && row[w];
      }
      bool verdict;
      if (!world_id.empty()) {
        auto w = m.world_index(world_id);
        if (!w) throw std::runtime_error("unknown world " + world_id);
        verdict = row[*w];
      } else {
        verdict = all;
      }
      if (as_json) {
        json j;
        j["command"] = "mc";
        j["formula"] = itl::render(f);
        j["worlds"] = worlds;
        if (!world_id.empty()) j["world"] = world_id;
        j["holds"] = verdict;
        std::cout << j.dump(2) << "\n";
      } else {
        for (std::size_t w = 0; w < m.world_count(); ++w)
          std::cout << m.world_id(static_cast<int>(w)) << " "
                    << (row[w] ? "true" : "false") << "\n";
        if (!world_id.empty())
          std::cout << "at " << world_id << ": " << (verdict ? "true" : "false") << "\n";
        else
          std::cout << "everywhere: " << (verdict ? "true" : "false") << "\n";
      }
      return verdict ? kExitYes : kExitNo;
    }

    if (app.got_subcommand(cmd_decide)) {
      itl::Formula f = itl::parse_formula(formula_text);
      itl::MomentBudget b = budget_from_env();
      if (budget_override > 0) b.max_moments = budget_override;
      itl::Verdict v = mode == "sat" ? itl::decide_sat(f, b) : itl::decide_valid(f, b);
      bool affirmative = v.status == itl::Verdict::Status::Valid ||
                         v.status == itl::Verdict::Status::Sat;
      if (v.witness && !witness_path.empty())
        write_file(witness_path, itl::dump_structure(*v.witness));
      if (as_json) {
        json j;
        j["command"] = "decide";
        j["formula"] = itl::render(f);
        j["mode"] = mode;
        j["status"] = itl::to_string(v.status);
        j["bounded"] = v.bounded;
        if (v.witness) {
          j["witness_world"] = v.witness_world;
          j["witness_size"] = v.witness->world_count();
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << itl::to_string(v.status);
        if (v.bounded) std::cout << " (no witness within the node budget)";
        if (v.witness) std::cout << ", witness world " << v.witness_world << " of "
                                 << v.witness->world_count() << "-world quasimodel";
        std::cout << "\n";
      }
      return affirmative ? kExitYes : kExitNo;
    }

    if (app.got_subcommand(cmd_irr)) {
      itl::Formula f = itl::parse_formula(formula_text);
      itl::IrrFrame irr = itl::generate_irr(itl::closure(f), budget_from_env());
      if (irr.truncated) {
        std::cerr << "error: moment budget exceeded; partial frame is unusable\n";
        return kExitError;
      }
      if (as_json) {
        json j;
        j["command"] = "irr";
        j["sigma_of"] = itl::render(f);
        j["moments"] = irr.moments.size();
        j["node_capped"] = irr.node_capped;
        j["layers"] = irr.layer_sizes;
        if (auto bound = itl::irr_size_bound(irr.sigma->size()))
          j["size_bound"] = *bound;
        if (!dump_path.empty()) write_file(dump_path, irr_dump(irr, want_trees));
        std::cout << j.dump(2) << "\n";
      } else if (want_stats) {
        std::cout << "sigma size: " << irr.sigma->size() << "\n";
        std::cout << "moments: " << irr.moments.size() << "\n";
        std::cout << "per height:";
        for (auto s : irr.layer_sizes) std::cout << " " << s;
        std::cout << "\n";
        std::cout << "node capped: " << (irr.node_capped ? "yes" : "no") << "\n";
        if (auto bound = itl::irr_size_bound(irr.sigma->size()))
          std::cout << "tower bound: " << *bound << "\n";
      } else if (!dump_path.empty()) {
        write_file(dump_path, irr_dump(irr, want_trees));
        std::cout << "wrote " << irr.moments.size() << " moments to " << dump_path << "\n";
      } else {
        std::cout << irr_dump(irr, want_trees);
      }
      return kExitYes;
    }

    if (app.got_subcommand(cmd_sim)) {
      itl::LabelledStructure x = itl::parse_structure(read_file(frame_path));
      auto errors = itl::validate_frame(x);
      if (!errors.empty()) {
        std::string all = "not a labelled frame:";
        for (const auto& e : errors) all += "\n  " + e;
        throw std::runtime_error(all);
      }
      auto w = x.world_index(world_id);
      if (!w) throw std::runtime_error("unknown world " + world_id);
      itl::Formula sim = itl::sim_formula(x, *w);
      if (want_simplify) sim = itl::simplify_units(sim);
      if (as_json) {
        json j;
        j["command"] = "sim";
        j["world"] = world_id;
        j["formula"] = itl::render(sim);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << itl::render(sim) << "\n";
      }
      return kExitYes;
    }

    if (app.got_subcommand(cmd_proof)) {
      itl::Proof p = itl::parse_proof(read_file(proof_path));
      auto err = itl::check_proof(p);
      if (as_json) {
        json j;
        j["command"] = "check-proof";
        j["file"] = proof_path;
        j["lines"] = p.lines.size();
        j["ok"] = !err.has_value();
        if (err) {
          j["error_line"] = err->line;
          j["reason"] = err->reason;
        } else {
          j["conclusion"] = itl::render(p.conclusion());
        }
        std::cout << j.dump(2) << "\n";
      } else if (err) {
        std::cout << "rejected at line " << err->line << ": " << err->reason << "\n";
      } else {
        std::cout << "ok: " << itl::render(p.conclusion()) << "\n";
      }
      return err ? kExitNo : kExitYes;
    }

    if (app.got_subcommand(cmd_oracle)) {
      itl::Formula f = itl::parse_formula(formula_text);
      auto witness = itl::oracle_falsifiable(f, max_worlds);
      if (witness && !dump_path.empty())
        write_file(dump_path, itl::dump_structure(*witness));
      if (as_json) {
        json j;
        j["command"] = "oracle";
        j["formula"] = itl::render(f);
        j["max_worlds"] = max_worlds;
        j["found"] = witness.has_value();
        if (witness) j["witness_size"] = witness->world_count();
        std::cout << j.dump(2) << "\n";
      } else if (witness) {
        std::cout << "falsified on a " << witness->world_count() << "-world quasimodel\n";
        if (dump_path.empty()) std::cout << itl::dump_structure(*witness);
      } else {
        std::cout << "no counter-quasimodel with at most " << max_worlds << " worlds\n";
      }
      return witness ? kExitYes : kExitNo;
    }
  } catch (const itl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.expected.empty()) {
      std::cerr << "expected:";
      for (const auto& t : e.expected) std::cerr << " " << t;
      std::cerr << "\n";
    }
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
