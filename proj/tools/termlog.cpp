// termlog: termination prover for definite logic programs.
//
//   termlog analyze FILE [--mode rigid|wellmoded] [--order auto|rpo|listlen|termsize] [--emit PATH] [--verbose]
//   termlog run FILE QUERY [--depth N] [--trace]
//   termlog corpus DIR [--no-oracle]
//   termlog verify FILE CERT

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "termlog/termlog.hpp"

namespace fs = std::filesystem;
using namespace termlog;

namespace {

constexpr int kTerminating = 0;
constexpr int kUnknown = 1;
constexpr int kInputError = 2;

Program read_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Mode parse_mode(const std::string& s) { return s == "wellmoded" ? Mode::WellModed : Mode::Rigid; }

void print_analysis(std::ostream& os, const Analysis& a) {
  if (a.mode == Mode::Rigid) {
    os << "call set:\n";
    for (const auto& x : a.call_set.atoms) os << "  " << x << '\n';
  } else {
    os << "modes:\n";
    for (const auto& [s, outs] : a.modes) {
      os << "  " << s.name << '(';
      for (std::size_t i = 0; i < outs.size(); ++i) os << (i ? "," : "") << (outs[i] ? "out" : "in");
      os << ")\n";
    }
  }
  os << "ignored positions:";
  for (const auto& [s, ps] : a.filter.entries())
    for (auto i : ps) os << ' ' << s.str() << '#' << i;
  os << '\n';
  os << "constraints:\n";
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& o = a.outcomes[i];
    os << "  (" << i + 1 << ") " << a.constraints[i].str() << "    [" << (a.constraints[i].layered ? "layered" : o.route)
       << "]\n";
    for (const auto& d : o.demands) os << "        " << d.str() << '\n';
    for (const auto& ob : o.obligations) os << "        obligation " << ob.required.str() << '\n';
  }
  for (std::size_t i = 0; i < a.relations.size(); ++i) {
    os << "relation " << a.relations[i].str() << ":\n";
    for (const auto& d : a.relation_demands[i]) os << "  " << d.str() << '\n';
  }
  for (const auto& w : a.warnings) os << "warning: " << w << '\n';
}

std::string describe_order(const OrderSpec& o) {
  std::ostringstream os;
  os << o.describe();
  if (o.kind == OrderSpec::Kind::Rpo) {
    os << " precedence";
    for (const auto& [hi, lo] : o.precedence.pairs()) os << ' ' << hi.str() << ">" << lo.str();
  }
  return os.str();
}

int cmd_analyze(const std::string& file, const std::string& mode, const std::string& order, const std::string& emit,
                bool verbose) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  Program p;
  Analysis a;
  auto t0 = clock::now();
  try {
    p = read_program(file);
  } catch (const Error& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kInputError;
  }
  auto t1 = clock::now();
  try {
    a = prepare(p, parse_mode(mode));
  } catch (const Error& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kInputError;
  }
  auto t2 = clock::now();
  SolveOptions so;
  so.order = order;
  Verdict v = solve(p, a, so);
  auto t3 = clock::now();

  if (verbose) print_analysis(std::cout, a);
  if (v.terminating()) {
    std::cout << "Terminating  (order: " << describe_order(v.certificate->order) << ", candidates tried: "
              << v.candidates_tried << ")\n";
    if (verbose)
      for (const auto& j : v.certificate->per_constraint) {
        std::cout << "  (" << j.constraint + 1 << ") " << j.route << ':';
        for (const auto& l : j.lemmas) std::cout << "  " << l << ';';
        std::cout << '\n';
      }
    if (!emit.empty()) {
      try {
        save_certificate(*v.certificate, emit);
      } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
      }
      std::cout << "certificate: " << emit << '\n';
    }
  } else {
    std::cout << "Unknown: " << v.reason << '\n';
  }
  if (verbose)
    std::cout << "timings (ms): parse " << ms(t1 - t0) << ", constraints " << ms(t2 - t1) << ", search " << ms(t3 - t2)
              << '\n';
  return v.terminating() ? kTerminating : kUnknown;
}

int cmd_run(const std::string& file, const std::string& query, std::size_t depth, bool trace) {
  Program p;
  std::vector<Atom> goal;
  try {
    p = read_program(file);
    goal = parse_goal(query, 0);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
  std::vector<DerivationNode> nodes;
  ExploreOptions opt;
  if (trace) opt.trace = &nodes;
  auto out = ld_explore(p, goal, depth, opt);
  for (const auto& n : nodes) std::cout << format_node(n) << '\n';
  std::cout << to_string(out.kind);
  if (out.kind == ExplorationOutcome::Kind::FiniteTree)
    std::cout << " answers=" << out.answers << " nodes=" << out.nodes << " maxDepth=" << out.max_depth << '\n';
  else
    std::cout << (out.heuristic ? " (heuristic)" : "") << (out.budget_exhausted ? " (node budget)" : "")
              << " witness length=" << out.witness.size() << '\n';
  for (const auto& a : out.answer_instances) {
    std::cout << "  answer:";
    for (const auto& x : a) std::cout << ' ' << x;
    std::cout << '\n';
  }
  if (out.kind == ExplorationOutcome::Kind::LoopEvidence) {
    std::cout << "  directed sequence:";
    for (auto i : out.loop) std::cout << ' ' << out.witness[i].selected;
    std::cout << '\n';
  }
  return out.kind == ExplorationOutcome::Kind::FiniteTree ? 0 : 1;
}

struct CorpusRow {
  std::string file, mode, expected, actual, oracle;
  bool match = false;
};

CorpusRow corpus_row(const fs::path& path, const std::string& mode, const std::string& expected, bool oracle) {
  CorpusRow row{path.filename().string(), mode, expected, "", "-", false};
  try {
    Program p = read_program(path.string());
    Analysis a = prepare(p, parse_mode(mode));
    Verdict v = solve(p, a);
    row.actual = v.terminating() ? "terminating" : "unknown";
    if (v.terminating()) {
      auto check = verify_certificate(p, *v.certificate);
      if (!check) row.actual = "bad-certificate";
      if (oracle) {
        auto runs = termination_oracle(p);
        auto rels = relation_oracle(p, *v.certificate);
        row.oracle = std::to_string(runs.finite) + "/" + std::to_string(runs.runs) + " finite, " +
                     std::to_string(rels.finite) + "/" + std::to_string(rels.runs) + " relation";
        if (!runs.ok() || !rels.ok()) row.actual += "+oracle-disagrees";
      }
    }
  } catch (const Error& e) {
    row.actual = std::string("error: ") + e.what();
  }
  if (expected == "unknown-or-terminating")
    row.match = row.actual == "unknown" || row.actual == "terminating";
  else
    row.match = row.actual == expected;
  return row;
}

int cmd_corpus(const std::string& dir, bool oracle) {
  if (!fs::is_directory(dir)) {
    std::cerr << dir << ": not a directory\n";
    return kInputError;
  }
  std::map<std::string, std::pair<std::string, std::string>> manifest;
  fs::path mpath = fs::path(dir) / "MANIFEST";
  if (fs::exists(mpath)) {
    std::ifstream in(mpath);
    std::string line;
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      std::string f, m, e;
      if (!(ls >> f)) continue;
      if (!(ls >> m >> e)) {
        std::cerr << "MANIFEST: malformed line for " << f << '\n';
        return kInputError;
      }
      manifest[f] = {m, e};
    }
  }
  std::vector<fs::path> files;
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.path().extension() == ".pl") files.push_back(ent.path());
  std::sort(files.begin(), files.end());

  std::vector<std::future<CorpusRow>> jobs;
  std::vector<CorpusRow> rows;
  for (const auto& f : files) {
    auto it = manifest.find(f.filename().string());
    if (it == manifest.end()) {
      jobs.push_back(std::async(std::launch::deferred, [f] {
        return CorpusRow{f.filename().string(), "-", "(missing)", "no manifest entry", "-", false};
      }));
      continue;
    }
    auto [mode, expected] = it->second;
    jobs.push_back(std::async(std::launch::async, corpus_row, f, mode, expected, oracle));
  }
  for (auto& j : jobs) rows.push_back(j.get());

  int mismatches = 0;
  std::printf("%-28s %-10s %-24s %-18s %s\n", "file", "mode", "expected", "actual", "oracle");
  for (const auto& r : rows) {
    std::printf("%-28s %-10s %-24s %-18s %s%s\n", r.file.c_str(), r.mode.c_str(), r.expected.c_str(), r.actual.c_str(),
                r.oracle.c_str(), r.match ? "" : "   MISMATCH");
    if (!r.match) ++mismatches;
  }
  std::printf("%zu files, %d mismatches\n", rows.size(), mismatches);
  return mismatches ? 1 : 0;
}

int cmd_verify(const std::string& file, const std::string& cert_path) {
  try {
    Program p = read_program(file);
    std::vector<std::string> text;
    ProofCertificate c = load_certificate(cert_path, &text);
    auto r = verify_certificate(p, c, &text);
    if (r) {
      std::cout << "certificate verified\n";
      return 0;
    }
    std::cout << "certificate rejected: " << r.failure << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termination prover for definite logic programs"};
  app.require_subcommand(1);

  std::string file, mode = "rigid", order = "auto", emit, query, dir, cert;
  bool verbose = false, trace = false, no_oracle = false;
  std::size_t depth = 100;

  auto* analyze = app.add_subcommand("analyze", "prove termination for the queries declared in FILE");
  analyze->add_option("file", file, "program file")->required();
  analyze->add_option("--mode", mode, "rigid or wellmoded")->check(CLI::IsMember({"rigid", "wellmoded"}));
  analyze->add_option("--order", order, "order family to search")->check(CLI::IsMember({"auto", "rpo", "listlen", "termsize"}));
  analyze->add_option("--emit", emit, "write the certificate to this path");
  analyze->add_flag("--verbose,-v", verbose, "print constraints, demands and timings");

  auto* run = app.add_subcommand("run", "explore the LD-tree of QUERY");
  run->add_option("file", file, "program file")->required();
  run->add_option("query", query, "goal, e.g. \"permute([a,b],X)\"")->required();
  run->add_option("--depth", depth, "maximum number of resolution steps")->check(CLI::PositiveNumber);
  run->add_flag("--trace", trace, "dump one line per node");

  auto* corpus = app.add_subcommand("corpus", "analyze every program listed in DIR/MANIFEST");
  corpus->add_option("dir", dir, "corpus directory")->required();
  corpus->add_flag("--no-oracle", no_oracle, "skip the concrete cross-checks");

  auto* verify = app.add_subcommand("verify", "replay a certificate against FILE");
  verify->add_option("file", file, "program file")->required();
  verify->add_option("cert", cert, "certificate path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*analyze) return cmd_analyze(file, mode, order, emit, verbose);
  if (*run) return cmd_run(file, query, depth, trace);
  if (*corpus) return cmd_corpus(dir, !no_oracle);
  if (*verify) return cmd_verify(file, cert);
  return kInputError;
}
