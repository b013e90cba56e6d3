#include "presb/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "presb/arch.hpp"
#include "presb/bfgames.hpp"
#include "presb/diagram.hpp"
#include "presb/error.hpp"
#include "presb/qe.hpp"
#include "presb/semantics.hpp"

namespace presb::cli {

namespace {

using nlohmann::json;

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {
    const char* level = std::getenv("PRESB_LOG");
    enabled_ = level != nullptr && *level != '\0' && std::string(level) != "0";
  }

  template <class... Parts>
  void trace(const Parts&... parts) const {
    if (!enabled_) return;
    err_ << "presb:";
    ((err_ << ' ' << parts), ...);
    err_ << '\n';
  }

 private:
  std::ostream& err_;
  bool enabled_ = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Inline JSON when the text looks like JSON, a file path otherwise.
json load_json(const std::string& text) {
  std::string src = text;
  auto first = src.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || (src[first] != '{' && src[first] != '[')) src = read_file(text);
  try {
    return json::parse(src);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

Model load_model(const std::string& text) {
  if (text.empty()) throw ConfigError("--model is required");
  return model_from_json(load_json(text));
}

Environment load_env(const Model& m, const std::string& text) {
  Environment env;
  if (text.empty()) return env;
  json j = load_json(text);
  if (!j.is_object()) throw ConfigError("--env must be a JSON object of variable -> element literal");
  for (const auto& [name, value] : j.items()) {
    std::string literal = value.is_string() ? value.get<std::string>() : value.dump();
    env[name] = m.parse_element(literal);
  }
  return env;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (cur.find_first_not_of(" \t") != std::string::npos) out.push_back(cur);
  }
  return out;
}

std::vector<GroupElement> parse_elements(const Model& m, const std::string& text) {
  std::vector<GroupElement> out;
  for (const auto& lit : split(text, ';')) out.push_back(m.parse_element(lit));
  return out;
}

Tuple parse_tuple(const std::string& text) {
  Tuple out;
  for (const auto& part : split(text, ',')) {
    try {
      out.push_back(std::stoull(part));
    } catch (const std::exception&) {
      throw ConfigError("bad tuple entry '" + part + "'");
    }
  }
  return out;
}

std::string show_set(const std::set<std::uint64_t>& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (auto k : s) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << "}";
  return out.str();
}

// Random elements plus the named elements every model family cares about.
std::vector<GroupElement> sample_model(const Model& m, std::uint64_t seed, std::size_t random_count) {
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> out;
  switch (m.kind()) {
    case Model::Kind::PL: {
      const auto& ord = m.order();
      std::size_t taken = 0;
      for (OrderIndex l = 0; taken < 16 && (!ord.size() || taken < *ord.size()); ++l) {
        if (!ord.contains(l)) continue;
        out.push_back(pi_embed(m, l));
        ++taken;
      }
      break;
    }
    case Model::Kind::ZAdjoin:
      out.push_back(m.adjoined());
      break;
    case Model::Kind::QuadSum: {
      const auto& s = m.quad_set();
      std::set<std::uint64_t> idx{0, 1, 2};
      if (s.members) idx.insert(s.members->begin(), s.members->end());
      for (auto n : idx) {
        QuadSumElem e;
        e.coords[n] = QuadCoord{1, 0};
        out.push_back(e);
        if (s.contains(n)) {
          QuadSumElem r;
          r.coords[n] = QuadCoord{0, 1};
          out.push_back(r);
        }
      }
      break;
    }
    case Model::Kind::Cut:
      out.push_back(CutElem{1, 0, 0});
      out.push_back(CutElem{0, 1, 0});
      break;
    case Model::Kind::StandardZ:
      break;
  }
  if (m.has_integer_part()) out.push_back(m.one());
  for (std::size_t i = 0; i < random_count; ++i) out.push_back(m.random_element(rng));
  return out;
}

std::string verdict(bool v) { return v ? "true" : "false"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Log log(err);
  CLI::App app{"Exact computation in countable models of Presburger arithmetic", "presb"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string model_text, target_text, env_text, order_text, set_text, formula, query, left, right, tuples;
  std::string basis_src_text, basis_dst_text, probes_text, facts_path, sequence_text;
  std::uint64_t enc_bound = 12, dec_bound = 40, iso_bound = 64, ax_bound = 12;
  std::uint64_t rank_budget = 1000, ax_budget = 40, diag_budget = 1000000, rank_seed = 1, ax_seed = 1;
  int alpha = 1;
  std::vector<std::uint64_t> members;

  auto flag_json = [&](CLI::App* sub) { sub->add_flag("--json", as_json, "Emit JSON"); };

  auto* decide = app.add_subcommand("decide", "Decide a Presburger sentence");
  decide->add_option("formula", formula, "Closed formula")->required();
  flag_json(decide);

  auto* qe = app.add_subcommand("qe", "Eliminate quantifiers");
  qe->add_option("formula", formula, "Formula")->required();
  flag_json(qe);

  auto* ev = app.add_subcommand("eval", "Evaluate a formula in a model");
  ev->add_option("formula", formula, "Formula")->required();
  ev->add_option("--model", model_text, "Model config (JSON text or file)")->required();
  ev->add_option("--env", env_text, "Variable assignment (JSON object text or file)");
  flag_json(ev);

  auto* ts = app.add_subcommand("translate-star", "Translate an order sentence to its starred form");
  ts->add_option("formula", formula, "Order formula")->required();
  flag_json(ts);

  auto* enc = app.add_subcommand("encode-set", "Residue table of the CRT encoding of a set");
  enc->add_option("members", members, "Set members");
  enc->add_option("--set", set_text, "Members as a comma separated list");
  enc->add_option("--bound", enc_bound, "Last modulus")->capture_default_str();
  flag_json(enc);

  auto* dec = app.add_subcommand("decode-set", "Decode a residue sequence into a set");
  dec->add_option("sequence", sequence_text, "Sequence JSON (text or file)")->required();
  dec->add_option("--bound", dec_bound, "Largest prime index")->capture_default_str();
  flag_json(dec);

  auto* game = app.add_subcommand("game", "Back-and-forth relation between two orders");
  game->add_option("--left", left, "Left order")->required();
  game->add_option("--right", right, "Right order")->required();
  game->add_option("--alpha", alpha, "Level")->default_val(1);
  game->add_option("--tuples", tuples, "Tuples as 'a1,a2:b1,b2'");
  flag_json(game);

  auto* rank = app.add_subcommand("arch-rank", "Recover the archimedean rank of a sampled model");
  rank->add_option("--model", model_text, "Model config")->required();
  rank->add_option("--budget", rank_budget, "Largest sample size")->capture_default_str();
  rank->add_option("--seed", rank_seed, "Sampling seed")->capture_default_str();
  flag_json(rank);

  auto* iso = app.add_subcommand("iso", "Extend a basis correspondence to probe elements");
  iso->add_option("--model", model_text, "Source model config")->required();
  iso->add_option("--target", target_text, "Target model config (default: source)");
  iso->add_option("--basis-src", basis_src_text, "Source basis, ';' separated")->required();
  iso->add_option("--basis-dst", basis_dst_text, "Target basis, ';' separated")->required();
  iso->add_option("--probes", probes_text, "Probe elements, ';' separated")->required();
  iso->add_option("--bound", iso_bound, "Residue bound")->capture_default_str();

  auto* ax = app.add_subcommand("axioms-check", "Check Pr, Plain and Psi on a sample");
  ax->add_option("--model", model_text, "Model config")->required();
  ax->add_option("--bound", ax_bound, "Largest modulus")->capture_default_str();
  ax->add_option("--budget", ax_budget, "Number of random sample elements")->capture_default_str();
  ax->add_option("--seed", ax_seed, "Sampling seed")->capture_default_str();
  flag_json(ax);

  auto* diag = app.add_subcommand("diagram-complete", "Answer an atomic query from a diagram enumeration");
  diag->add_option("facts", facts_path, "File with one fact per line")->required();
  diag->add_option("--query", query, "Atomic query, e.g. x1<x2")->required();
  diag->add_option("--budget", diag_budget, "Step budget")->capture_default_str();
  flag_json(diag);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (decide->parsed()) {
      log.trace("decide", formula);
      bool v = decide_sentence(parse_formula(formula));
      if (as_json) {
        out << json{{"result", v}}.dump() << "\n";
      } else {
        out << verdict(v) << "\n";
      }
    } else if (qe->parsed()) {
      log.trace("qe", formula);
      std::string r = print(eliminate_quantifiers(parse_formula(formula)));
      if (as_json) {
        out << json{{"result", r}}.dump() << "\n";
      } else {
        out << r << "\n";
      }
    } else if (ev->parsed()) {
      Model m = load_model(model_text);
      log.trace("eval", m.describe(), formula);
      bool v = eval(m, parse_formula(formula), load_env(m, env_text));
      if (as_json) {
        out << json{{"result", v}, {"model", m.describe()}}.dump() << "\n";
      } else {
        out << verdict(v) << "\n";
      }
    } else if (ts->parsed()) {
      std::string r = print(translate_star(parse_formula(formula)));
      if (as_json) {
        out << json{{"result", r}}.dump() << "\n";
      } else {
        out << r << "\n";
      }
    } else if (enc->parsed()) {
      std::set<std::uint64_t> s(members.begin(), members.end());
      for (const auto& part : split(set_text, ',')) s.insert(parse_tuple(part).at(0));
      if (enc_bound == 0) throw ConfigError("--bound must be positive");
      auto r = encode_set(s);
      log.trace("encode-set", show_set(s), "bound", enc_bound);
      if (as_json) {
        json table = json::array();
        for (std::uint64_t n = 1; n <= enc_bound; ++n) table.push_back({n, r.query(n)});
        out << json{{"sequence", to_json(r)}, {"table", table}}.dump() << "\n";
      } else {
        out << residue_table(r, enc_bound);
      }
    } else if (dec->parsed()) {
      auto r = residue_from_json(load_json(sequence_text));
      auto s = decode_set(r, dec_bound);
      if (as_json) {
        out << json{{"members", s}}.dump() << "\n";
      } else {
        out << show_set(s) << "\n";
      }
    } else if (game->parsed()) {
      auto a_order = OrderPresentation::parse(left);
      auto b_order = OrderPresentation::parse(right);
      Tuple a, b;
      if (!tuples.empty()) {
        auto colon = tuples.find(':');
        if (colon == std::string::npos) throw ConfigError("--tuples must look like 'a1,a2:b1,b2'");
        a = parse_tuple(tuples.substr(0, colon));
        b = parse_tuple(tuples.substr(colon + 1));
      }
      log.trace("game", left, right, "alpha", alpha);
      GameSolver solver;
      auto v = solver.explain(a_order, a, b_order, b, alpha);
      if (as_json) {
        json j{{"result", v.holds}, {"note", v.note}};
        if (v.unanswerable) j["unanswerable"] = *v.unanswerable;
        if (v.beta) j["level"] = *v.beta;
        out << j.dump() << "\n";
      } else {
        out << verdict(v.holds) << "\n";
        if (!v.note.empty()) out << v.note << "\n";
      }
    } else if (rank->parsed()) {
      Model m = load_model(model_text);
      if (m.kind() == Model::Kind::PL && !m.order().is_finite()) {
        throw BudgetExceeded("classes of " + m.describe() + " are still being discovered at any budget");
      }
      if (m.kind() == Model::Kind::QuadSum) {
        throw BudgetExceeded("classes of " + m.describe() + " are still being discovered at any budget");
      }
      auto sample = sample_model(m, rank_seed, 32);
      auto ord = recover_order(m, sample, rank_budget);
      if (as_json) {
        out << json{{"order", ord.spec()}}.dump() << "\n";
      } else {
        out << ord.spec() << "\n";
      }
    } else if (iso->parsed()) {
      Model src = load_model(model_text);
      Model dst = target_text.empty() ? src : load_model(target_text);
      IsomorphismOptions options;
      options.residue_bound = iso_bound;
      auto graph = build_isomorphism(src, dst, parse_elements(src, basis_src_text),
                                     parse_elements(dst, basis_dst_text), parse_elements(src, probes_text), options);
      json j = json::array();
      for (const auto& [p, img] : graph) j.push_back({{"probe", src.format(p)}, {"image", dst.format(img)}});
      out << j.dump() << "\n";
    } else if (ax->parsed()) {
      Model m = load_model(model_text);
      auto report = check_pr_plain_psi(m, sample_model(m, ax_seed, ax_budget), ax_bound);
      auto status = [](bool ok) { return ok ? "pass" : "fail"; };
      if (as_json) {
        out << json{{"pr", report.pr},
                    {"plain", report.plain},
                    {"plain_certified", report.plain_certified},
                    {"psi", report.psi},
                    {"notes", report.notes}}
                   .dump()
            << "\n";
      } else {
        out << "Pr: " << status(report.pr) << "\n";
        out << "Plain: " << status(report.plain) << (report.plain_certified ? "" : " (bounded)") << "\n";
        out << "Psi: " << status(report.psi) << "\n";
        for (const auto& note : report.notes) out << "  " << note << "\n";
      }
    } else if (diag->parsed()) {
      std::vector<DiagramFact> facts;
      std::stringstream in(read_file(facts_path));
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        facts.push_back(parse_fact(line));
      }
      auto answer = complete_diagram(stream_of(std::move(facts)), parse_fact(query), diag_budget);
      if (as_json) {
        out << json{{"result", answer.value}, {"steps", answer.steps}}.dump() << "\n";
      } else {
        out << verdict(answer.value) << "\n" << "steps: " << answer.steps << "\n";
      }
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace presb::cli
