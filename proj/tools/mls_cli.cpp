// mls: generate, inspect and reconstruct metric graphs from their marked
// length spectrum.
//
// Exit status: 0 ok / ACCEPT, 1 REJECT, 2 usage, parse or resource error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mls/mls.hpp"
#include "mls/oracle.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

mls::MetricGraph load_graph(const std::string& path) {
  mls::MetricGraph g = mls::read_graph_file(path);
  const auto report = mls::validate_graph(g);
  if (!report.ok()) {
    std::string msg = path + ": invalid graph";
    for (const auto& v : report.violations) msg += "; " + v;
    throw mls::FormatError(msg);
  }
  return g;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marked length spectrum rigidity for metric graphs"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Report timings on stderr");

  std::uint64_t gen_seed = 1;
  std::size_t gen_vertices = 5;
  std::size_t gen_extra = 3;
  std::int64_t gen_max_length = 10;
  std::int64_t gen_max_den = 4;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a random metric graph");
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--vertices", gen_vertices, "Vertex count")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--extra", gen_extra, "Edges beyond a spanning tree")->capture_default_str();
  gen->add_option("--max-length", gen_max_length, "Upper bound on edge lengths")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--max-denominator", gen_max_den, "Largest length denominator")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  std::string dis_in;
  std::uint64_t dis_seed = 1;
  std::string dis_graph;
  std::string dis_hom;
  mls::DisguiseOptions dis_opts;
  auto* dis = app.add_subcommand("disguise", "Write an isometric copy with its fundamental-group isomorphism");
  dis->add_option("in", dis_in, "Input graph")->required();
  dis->add_option("--seed", dis_seed, "Random seed")->capture_default_str();
  dis->add_option("--out-graph", dis_graph, "Disguised graph file")->required();
  dis->add_option("--out-hom", dis_hom, "Hom file with inverse and truth comments")->required();
  dis->add_option("--subdivisions", dis_opts.subdivisions, "Edge subdivisions")->capture_default_str();
  dis->add_option("--pendant-trees", dis_opts.pendant_trees, "Pendant trees to attach")->capture_default_str();

  std::string core_in;
  auto* core = app.add_subcommand("core", "Print the core with its segments");
  core->add_option("graph", core_in, "Graph file")->required();

  std::string spec_in;
  std::size_t spec_len = 3;
  std::string spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "Tabulate the marked length spectrum");
  spectrum->add_option("graph", spec_in, "Graph file")->required();
  spectrum->add_option("--max-len", spec_len, "Longest word")->check(CLI::Range(1, 8))->capture_default_str();
  spectrum->add_option("--out", spec_out, "TSV output (stdout if omitted)");

  std::string red_in;
  std::string red_path;
  std::optional<mls::VertexId> red_start;
  auto* reduce = app.add_subcommand("reduce", "Reduce an edge path");
  reduce->add_option("graph", red_in, "Graph file")->required();
  reduce->add_option("--path", red_path, "Path literal, e.g. \"e1 e2^-1\"")->required();
  reduce->add_option("--start", red_start, "Start vertex (needed for an empty path)");

  std::string rec_g1;
  std::string rec_g2;
  std::string rec_hom;
  std::size_t rec_sweep = 4;
  auto* rec = app.add_subcommand("reconstruct", "Certify an isometry inducing the given isomorphism");
  rec->add_option("g1", rec_g1, "First graph")->required();
  rec->add_option("g2", rec_g2, "Second graph")->required();
  rec->add_option("phi", rec_hom, "Hom file with inverse section")->required();
  rec->add_option("--sweep", rec_sweep, "Up-front spectrum sweep word length (0 disables)")->capture_default_str();

  std::string iso_g1;
  std::string iso_g2;
  auto* iso = app.add_subcommand("check-iso", "Brute-force isometry test of the cores");
  iso->add_option("g1", iso_g1, "First graph")->required();
  iso->add_option("g2", iso_g2, "Second graph")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int status = kOk;
  try {
    if (*gen) {
      mls::RandomGraphParams params{gen_vertices, gen_extra, gen_max_length, gen_max_den};
      write_text(gen_out, mls::format_graph(mls::random_graph(gen_seed, params)));
    } else if (*dis) {
      const auto g = load_graph(dis_in);
      if (mls::compute_core(g).empty()) {
        std::cerr << "error: core is empty (contractible input)\n";
        return kReject;
      }
      const auto d = mls::disguise(g, dis_seed, dis_opts);
      write_text(dis_graph, mls::format_graph(d.graph));
      write_text(dis_hom, mls::format_disguise_hom(d));
    } else if (*core) {
      const auto g = load_graph(core_in);
      const auto c = mls::compute_core(g);
      std::string text = mls::format_graph(c.core);
      for (const auto& s : c.segments) {
        text += "# segment " + std::to_string(s.x) + " " + std::to_string(s.y) + " " + s.length.str() + "\n";
      }
      std::cout << text;
    } else if (*spectrum) {
      const auto g = load_graph(spec_in);
      write_text(spec_out, mls::format_spectrum_tsv(mls::spectrum_table(mls::spanning_tree(g), spec_len)));
    } else if (*reduce) {
      const auto g = load_graph(red_in);
      const auto p = mls::reduce_path(mls::parse_path(g, red_path, red_start));
      std::cout << mls::format_path(p) << '\n';
      if (p.is_closed() && !p.empty()) {
        const auto cr = mls::cyclically_reduce(g, p);
        std::cout << "cyclic " << mls::format_cyclic(cr.core) << '\n';
        std::cout << "conjugator " << mls::format_path(cr.conjugator) << '\n';
      }
    } else if (*rec) {
      const auto g1 = load_graph(rec_g1);
      const auto g2 = load_graph(rec_g2);
      const auto phi = mls::read_hom_file(rec_hom);
      mls::ReconstructOptions opts;
      opts.sweep_length = rec_sweep;
      const auto cert = mls::reconstruct(g1, g2, phi, opts);
      std::cout << mls::format_certificate(cert);
      status = cert.accepted ? kOk : kReject;
    } else if (*iso) {
      const auto c1 = mls::compute_core(load_graph(iso_g1));
      const auto c2 = mls::compute_core(load_graph(iso_g2));
      const auto w = mls::brute_force_isometry(c1.core, c2.core);
      if (w) {
        for (const auto& [x, y] : w->vertex_map) std::cout << "branch " << x << " -> " << y << '\n';
        std::cout << "isometric\n";
      } else {
        std::cout << "not-isometric\n";
        status = kReject;
      }
    }
  } catch (const mls::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mls::HomError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mls::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (verbose) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    std::cerr << "elapsed " << ms << " ms\n";
  }
  return status;
}
