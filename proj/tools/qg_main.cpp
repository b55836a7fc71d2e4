#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <string>
#include <vector>

#include "qg/acceptance.hpp"
#include "qg/algebra.hpp"
#include "qg/gaplabel.hpp"
#include "qg/holefill.hpp"
#include "qg/json_io.hpp"
#include "qg/patch.hpp"
#include "qg/tfa.hpp"

namespace {

using namespace qg;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::string config_json(const std::string& command, std::uint64_t seed,
                        const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out = "{\"command\":\"" + command + "\",\"seed\":" + std::to_string(seed);
  for (const auto& [k, v] : kv) out += ",\"" + k + "\":" + v;
  out += "}";
  return out;
}

// report body + embedded run configuration
std::string with_config(std::string report, const std::string& config) {
  report.pop_back();  // trailing '}'
  return report + ",\"config\":" + config + "}";
}

struct GenerateArgs {
  std::string kind;
  std::string out = "pointset.json";
  double side = 20.0;
  std::string basis = "1,0,0,1";
  std::string scheme = "fibonacci_product";
  double alpha1 = std::sqrt(2.0) - 1.0;
  double alpha2 = std::sqrt(3.0) - 1.0;
  double beta = 0.5;
  std::string rule = "thue_morse_2d";
  std::string scale;
};

int cmd_generate(const GenerateArgs& a) {
  const Cube region{0.0, 0.0, a.side};
  PointSet ps;
  if (a.kind == "lattice") {
    const std::vector<double> b = parse_list(a.basis);
    if (b.size() != 4) throw CLI::ValidationError("--basis needs 4 comma-separated entries");
    ps = gen_lattice({b[0], b[1], b[2], b[3]}, region);
  } else if (a.kind == "cut_project") {
    if (a.scheme == "fibonacci")
      ps = gen_cut_project(fibonacci_scheme(), region);
    else if (a.scheme == "fibonacci_product")
      ps = gen_cut_project(fibonacci_product_scheme(), region);
    else
      throw CLI::ValidationError("unknown scheme: " + a.scheme);
  } else if (a.kind == "sturmian") {
    ps = gen_sturmian(a.alpha1, a.alpha2, a.beta, region);
  } else if (a.kind == "marked") {
    MarkParams mp;
    mp.alpha1 = a.alpha1;
    mp.alpha2 = a.alpha2;
    mp.beta = a.beta;
    ps = gen_marked_lattice(a.rule, mp, region);
  } else {
    throw CLI::ValidationError("unknown kind: " + a.kind);
  }
  if (!a.scale.empty()) {
    const std::vector<double> s = parse_list(a.scale);
    if (s.size() != 4) throw CLI::ValidationError("--scale needs 4 comma-separated entries");
    ps = apply_linear(ps, {s[0], s[1], s[2], s[3]});
  }
  ps.validate();
  write_file(a.out, pointset_json(ps));
  if (ps.warning_empty_window) std::fprintf(stderr, "warning: empty window, empty point set\n");
  std::printf("wrote %s (%zu points)\n", a.out.c_str(), ps.size());
  return 0;
}

struct AnalyzeArgs {
  std::string in;
  std::string out_dir = ".";
  bool hole = false;
  double grid_step = 0.01;
  double hole_side = 0.0;
  bool rel = false;
  std::string density_sides;
  double patches_r = 0.0;
  bool flc = false;
  std::uint64_t seed = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const PointSet ps = pointset_from_json(read_file(a.in));
  std::string body = "{";
  bool first = true;
  auto add = [&](const std::string& k, const std::string& v) {
    if (!first) body += ",";
    first = false;
    body += "\"" + k + "\":" + v;
  };
  if (a.hole) {
    const double side = a.hole_side > 0.0 ? a.hole_side : ps.region.side / 2.0;
    const HoleCertificate h = hole_radius(ps, Cube{0.0, 0.0, side}, a.grid_step);
    add("hole", "{\"lower\":" + fmt17(h.lower) + ",\"upper\":" + fmt17(h.upper) +
                    ",\"grid_step\":" + fmt17(h.grid_step) + "}");
  }
  if (a.rel) add("rel", std::to_string(relative_separation(ps)));
  if (!a.density_sides.empty()) {
    const DensityReport d = density(ps, parse_list(a.density_sides));
    std::string t = "[";
    for (size_t i = 0; i < d.table.size(); ++i) {
      if (i) t += ",";
      t += "[" + fmt17(d.table[i].first) + "," + fmt17(d.table[i].second) + "]";
    }
    t += "]";
    add("density", "{\"table\":" + t + ",\"estimate\":" + fmt17(d.estimate) +
                       ",\"ucf_deviation\":" + fmt17(d.ucf_deviation) + "}");
  }
  if (a.patches_r > 0.0) {
    const PatchTable t = enumerate_patches(ps, a.patches_r,
                                           Cube{0.0, 0.0, ps.region.side - 2.0 * a.patches_r});
    write_file(a.out_dir + "/patches.csv", patch_table_csv(t));
    add("patch_classes", std::to_string(t.entries.size()));
  }
  if (a.flc) {
    const double s = ps.region.side;
    const FlcReport r = flc_report(ps, 1.0, {s / 2.0, 2.0 * s / 3.0, s - 4.0});
    add("flc_stabilized", r.stabilized ? "true" : "false");
  }
  body += "}";
  const std::string cfg = config_json("analyze", a.seed, {{"in", "\"" + a.in + "\""}});
  write_file(a.out_dir + "/analyze.json", with_config(body, cfg));
  std::printf("wrote %s/analyze.json\n", a.out_dir.c_str());
  return 0;
}

struct HolefillArgs {
  std::string in;
  std::string out_dir = ".";
  double eps = 0.5;
  int max_iters = 16;
  std::uint64_t seed = 0;
};

int cmd_holefill(const HolefillArgs& a) {
  const PointSet ps = pointset_from_json(read_file(a.in));
  const FillReport rep = fill_holes(ps, a.eps, a.max_iters);
  const std::string cfg = config_json("holefill", a.seed,
                                      {{"in", "\"" + a.in + "\""},
                                       {"eps", fmt17(a.eps)},
                                       {"max_iters", std::to_string(a.max_iters)}});
  write_file(a.out_dir + "/holefill.json", with_config(fill_report_json(rep), cfg));
  std::printf("wrote %s/holefill.json (%zu translates)\n", a.out_dir.c_str(),
              rep.translates.size());
  return 0;
}

struct FrameArgs {
  std::string in;
  std::string out_dir = ".";
  std::string window = "gaussian";
  int n = 512;
  double L = 16.0;
  double x_half = 6.0;
  double region_side = 0.0;  // box truncation when > 0, else cylinder
  double interior = 0.5;
  std::string dual;  // "x,omega"
  std::string dump_s;
  std::uint64_t seed = 0;
};

std::vector<Window> make_windows(const std::string& names, const GridSpec& grid) {
  std::vector<Window> out;
  size_t pos = 0;
  while (pos < names.size()) {
    size_t next = names.find(',', pos);
    if (next == std::string::npos) next = names.size();
    const std::string name = names.substr(pos, next - pos);
    if (name == "gaussian")
      out.push_back(gaussian_window(grid));
    else if (name == "hermite1")
      out.push_back(hermite1_window(grid));
    else
      throw CLI::ValidationError("unknown window: " + name);
    pos = next + 1;
  }
  return out;
}

int cmd_frame(const FrameArgs& a) {
  const PointSet ps = pointset_from_json(read_file(a.in));
  const GridSpec grid{a.n, a.L};
  const std::vector<Window> windows = make_windows(a.window, grid);
  GaborSystem sys = a.region_side > 0.0
                        ? make_system(ps, windows, Cube{0.0, 0.0, a.region_side})
                        : make_system_cylinder(ps, windows, a.x_half);
  FrameAnalysis fa = frame_operator(sys);
  frame_bounds(fa, a.interior);
  if (!a.dump_s.empty()) dump_frame_operator(fa, a.dump_s);
  std::string extra;
  if (!a.dual.empty()) {
    const std::vector<double> z = parse_list(a.dual);
    const DualResult d = dual_window(sys, fa, {z[0], z[1]}, 0);
    write_file(a.out_dir + "/dual_window.json", window_json(d.window));
    extra = fmt17(d.residual);
  }
  const std::string cfg =
      config_json("frame", a.seed,
                  {{"in", "\"" + a.in + "\""},
                   {"window", "\"" + a.window + "\""},
                   {"n", std::to_string(a.n)},
                   {"L", fmt17(a.L)},
                   {"x_half", fmt17(a.x_half)},
                   {"interior", fmt17(a.interior)}});
  std::string rep = frame_report_json(fa);
  if (!extra.empty()) {
    rep.pop_back();
    rep += ",\"dual_residual\":" + extra + "}";
  }
  write_file(a.out_dir + "/frame.json", with_config(rep, cfg));
  std::printf("wrote %s/frame.json (A=%.6g B=%.6g)\n", a.out_dir.c_str(), fa.A, fa.B);
  return 0;
}

struct TraceArgs {
  std::string in;
  std::string out_dir = ".";
  std::string window = "gaussian";
  int n = 512;
  double L = 16.0;
  std::string k_ladder = "8,12";
  double r_supp = 6.0;
  double x_half = 8.0;
  bool idempotent = false;
  std::uint64_t seed = 0;
};

// diagonal lattice commensurate with the grid torus -> exact torus operator
bool torus_compatible(const PointSet& ps, const GridSpec& grid, double* a, double* b) {
  if (!ps.has_embedding() || ps.embedding->k != 2) return false;
  const auto& m = ps.embedding->basis;
  if (std::abs(m[1]) > 1e-12 || std::abs(m[2]) > 1e-12) return false;
  if (ps.provenance.rfind("lattice", 0) != 0) return false;
  const double nx = grid.L / m[0];
  const double nw = grid.band() / m[3];
  if (std::abs(nx - std::llround(nx)) > 1e-9 || std::abs(nw - std::llround(nw)) > 1e-9)
    return false;
  *a = m[0];
  *b = m[3];
  return true;
}

int cmd_trace(const TraceArgs& a) {
  const PointSet ps = pointset_from_json(read_file(a.in));
  const GridSpec grid{a.n, a.L};
  const std::vector<Window> windows = make_windows(a.window, grid);
  double la = 0.0, lb = 0.0;
  const bool torus = torus_compatible(ps, grid, &la, &lb);
  GaborSystem sys = torus ? make_full_torus_lattice(la, lb, grid, windows)
                          : make_system_cylinder(ps, windows, a.x_half);
  FrameAnalysis fa = frame_operator(sys);
  const std::vector<double> ks = parse_list(a.k_ladder);
  const auto rows = frame_measure(sys, fa, ps, ks);
  std::string csv = "k,value,deviation\n";
  const double last = rows.back().without_1_over_N;
  for (const auto& row : rows)
    csv += fmt17(row.k) + "," + fmt17(row.without_1_over_N) + "," +
           fmt17(std::abs(row.without_1_over_N - last)) + "\n";
  write_file(a.out_dir + "/trace.csv", csv);
  write_file(a.out_dir + "/trace.gp",
             "set datafile separator ','\n"
             "set xlabel 'cube side k'\n"
             "set ylabel 'frame measure'\n"
             "plot 'trace.csv' skip 1 using 1:2 with linespoints title 'average'\n");

  std::string body = "{\"frame_measure\":" + fmt17(last);
  if (a.idempotent) {
    const TransversalSample trans =
        torus ? TransversalSample::torus_lattice(la, lb, grid, ks.back())
              : TransversalSample::from_pointset(ps, ks.back());
    const IdempotentResult idem = gabor_idempotent(sys, fa, trans, a.r_supp);
    write_file(a.out_dir + "/kernel.json", kernel_json(idem.P));
    body += ",\"trace_unnormalized\":" + fmt17(idempotent_trace(idem.P, TraceMode::unnormalized));
    body += ",\"trace_normalized\":" + fmt17(idempotent_trace(idem.P, TraceMode::normalized));
    body += ",\"idempotency_residual\":" + fmt17(idem.idempotency_residual);
    body += ",\"selfadjoint_residual\":" + fmt17(idem.selfadjoint_residual);
  }
  body += "}";
  const std::string cfg = config_json("trace", a.seed,
                                      {{"in", "\"" + a.in + "\""},
                                       {"n", std::to_string(a.n)},
                                       {"L", fmt17(a.L)},
                                       {"k_ladder", "\"" + a.k_ladder + "\""},
                                       {"r_supp", fmt17(a.r_supp)},
                                       {"torus", torus ? "true" : "false"}});
  write_file(a.out_dir + "/trace.json", with_config(body, cfg));
  std::printf("wrote %s/trace.json (frame measure %.6g)\n", a.out_dir.c_str(), last);
  return 0;
}

struct GapArgs {
  std::string in;
  std::string out_dir = ".";
  double theta = 0.0;
  double radius = 1.0;
  std::uint64_t seed = 0;
};

int cmd_gaplabel(const GapArgs& a) {
  const PointSet ps = pointset_from_json(read_file(a.in));
  const GapLabelReport rep = gap_label_generators(ps, a.theta, a.radius);
  const std::string cfg = config_json("gaplabel", a.seed,
                                      {{"in", "\"" + a.in + "\""},
                                       {"theta", fmt17(a.theta)},
                                       {"radius", fmt17(a.radius)}});
  write_file(a.out_dir + "/gaplabel.json", with_config(gap_label_json(rep), cfg));
  std::printf("wrote %s/gaplabel.json (%zu generators)\n", a.out_dir.c_str(),
              rep.frequency_generators.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("QG_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"quasicrystal Gabor analysis workbench"};
  app.require_subcommand(1);
  app.set_config("--config");
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for randomized test vectors");

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "generate a point set file");
  gen->add_option("--kind", ga.kind, "lattice|cut_project|sturmian|marked")->required();
  gen->add_option("--out", ga.out);
  gen->add_option("--side", ga.side, "region cube side");
  gen->add_option("--basis", ga.basis, "lattice basis a,b,c,d");
  gen->add_option("--scheme", ga.scheme, "fibonacci|fibonacci_product");
  gen->add_option("--alpha1", ga.alpha1);
  gen->add_option("--alpha2", ga.alpha2);
  gen->add_option("--beta", ga.beta);
  gen->add_option("--rule", ga.rule, "thue_morse_2d|sturmian_mark");
  gen->add_option("--scale", ga.scale, "post linear map a,b,c,d");

  AnalyzeArgs aa;
  CLI::App* an = app.add_subcommand("analyze", "measure a point set");
  an->add_option("--in", aa.in)->required();
  an->add_option("--out-dir", aa.out_dir);
  an->add_flag("--hole", aa.hole);
  an->add_option("--grid-step", aa.grid_step);
  an->add_option("--hole-side", aa.hole_side);
  an->add_flag("--rel", aa.rel);
  an->add_option("--density", aa.density_sides, "cube sides s1,s2,...");
  an->add_option("--patches", aa.patches_r, "patch radius");
  an->add_flag("--flc", aa.flc);

  HolefillArgs ha;
  CLI::App* hf = app.add_subcommand("holefill", "fill holes with translates");
  hf->add_option("--in", ha.in)->required();
  hf->add_option("--out-dir", ha.out_dir);
  hf->add_option("--eps", ha.eps)->required();
  hf->add_option("--max-iters", ha.max_iters);

  FrameArgs fa;
  CLI::App* fr = app.add_subcommand("frame", "frame operator analysis");
  fr->add_option("--in", fa.in)->required();
  fr->add_option("--out-dir", fa.out_dir);
  fr->add_option("--window", fa.window, "gaussian|hermite1 (comma list)");
  fr->add_option("--n", fa.n);
  fr->add_option("--L", fa.L);
  fr->add_option("--x-half", fa.x_half);
  fr->add_option("--region", fa.region_side, "box truncation side (default: cylinder)");
  fr->add_option("--interior", fa.interior);
  fr->add_option("--dual", fa.dual, "dual window at x,omega");
  fr->add_option("--dump-s", fa.dump_s, "binary dump of S");

  TraceArgs ta;
  CLI::App* tr = app.add_subcommand("trace", "frame measure and Gabor idempotent trace");
  tr->add_option("--in", ta.in)->required();
  tr->add_option("--out-dir", ta.out_dir);
  tr->add_option("--window", ta.window);
  tr->add_option("--n", ta.n);
  tr->add_option("--L", ta.L);
  tr->add_option("--k-ladder", ta.k_ladder);
  tr->add_option("--r-supp", ta.r_supp);
  tr->add_option("--x-half", ta.x_half);
  tr->add_flag("--idempotent", ta.idempotent);

  GapArgs gla;
  CLI::App* gl = app.add_subcommand("gaplabel", "gap labeling group generators");
  gl->add_option("--in", gla.in)->required();
  gl->add_option("--out-dir", gla.out_dir);
  gl->add_option("--theta", gla.theta);
  gl->add_option("--radius", gla.radius);

  CLI::App* acc = app.add_subcommand("acceptance", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    aa.seed = ha.seed = fa.seed = ta.seed = gla.seed = seed;
    if (gen->parsed()) return cmd_generate(ga);
    if (an->parsed()) return cmd_analyze(aa);
    if (hf->parsed()) return cmd_holefill(ha);
    if (fr->parsed()) return cmd_frame(fa);
    if (tr->parsed()) return cmd_trace(ta);
    if (gl->parsed()) return cmd_gaplabel(gla);
    if (acc->parsed()) {
      const auto results = qg::acceptance::run_all();
      return qg::acceptance::print_results(results) == 0 ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const qg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
