#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qg/algebra.hpp"
#include "qg/gaplabel.hpp"
#include "qg/holefill.hpp"
#include "qg/json_io.hpp"
#include "qg/patch.hpp"
#include "qg/tfa.hpp"

namespace py = pybind11;
using namespace qg;

namespace {

std::vector<std::pair<double, double>> point_list(const PointSet& ps) {
  std::vector<std::pair<double, double>> out;
  out.reserve(ps.size());
  for (const auto& p : ps.points) out.emplace_back(p.x, p.y);
  return out;
}

Cube cube(double side) { return Cube{0.0, 0.0, side}; }

}  // namespace

PYBIND11_MODULE(quasigabor, m) {
  m.doc() = "quasicrystal point sets, non-uniform Gabor frames, twisted "
            "convolution algebras and gap labels";

  py::register_exception<Error>(m, "QgError");

  py::class_<PointSet>(m, "PointSet")
      .def_property_readonly("points", &point_list)
      .def_property_readonly("size", &PointSet::size)
      .def_property_readonly("marks",
                             [](const PointSet& ps) {
                               return ps.marks ? py::cast(*ps.marks) : py::object(py::none());
                             })
      .def_property_readonly("region_side", [](const PointSet& ps) { return ps.region.side; })
      .def_property_readonly("provenance", [](const PointSet& ps) { return ps.provenance; })
      .def("to_json", &pointset_json)
      .def("__repr__", [](const PointSet& ps) {
        return "<PointSet " + ps.provenance + ", " + std::to_string(ps.size()) + " points>";
      });

  m.def("lattice", [](double a, double b, double c, double d, double side) {
    return gen_lattice({a, b, c, d}, cube(side));
  });
  m.def("sturmian", [](double a1, double a2, double beta, double side) {
    return gen_sturmian(a1, a2, beta, cube(side));
  });
  m.def("marked_lattice", [](const std::string& rule, double a1, double a2, double beta,
                             double side) {
    MarkParams mp;
    mp.alpha1 = a1;
    mp.alpha2 = a2;
    mp.beta = beta;
    return gen_marked_lattice(rule, mp, cube(side));
  });
  m.def("fibonacci_product", [](double side) {
    return gen_cut_project(fibonacci_product_scheme(), cube(side));
  });
  m.def("apply_linear", [](const PointSet& ps, double a, double b, double c, double d) {
    return apply_linear(ps, {a, b, c, d});
  });
  m.def("pointset_from_json", &pointset_from_json);

  m.def("min_separation", &min_separation);
  m.def("relative_separation", &relative_separation);
  m.def("hole_radius", [](const PointSet& ps, double side, double step) {
    const HoleCertificate h = hole_radius(ps, cube(side), step);
    return std::make_pair(h.lower, h.upper);
  });
  m.def("density_estimate", [](const PointSet& ps, const std::vector<double>& sides) {
    return density(ps, sides).estimate;
  });
  m.def("hull_metric", &hull_metric);

  m.def("patch_class_count", [](const PointSet& ps, double r, double side) {
    return enumerate_patches(ps, r, cube(side)).entries.size();
  });
  m.def("patch_frequencies", [](const PointSet& ps, double r, double side) {
    std::vector<double> out;
    for (const auto& e : enumerate_patches(ps, r, cube(side)).entries)
      out.push_back(e.frequency);
    return out;
  });

  m.def("fill_holes", [](const PointSet& ps, double eps, int max_iters) {
    const FillReport rep = fill_holes(ps, eps, max_iters);
    std::vector<std::pair<double, double>> translates;
    for (const auto& t : rep.translates) translates.emplace_back(t.x, t.y);
    return py::make_tuple(translates, rep.hole_sequence.back().upper);
  });

  m.def("frame_bounds", [](const PointSet& ps, int n, double L, double x_half, double interior) {
    const GridSpec grid{n, L};
    GaborSystem sys = make_system_cylinder(ps, {gaussian_window(grid)}, x_half);
    FrameAnalysis fa = frame_operator(sys);
    return frame_bounds(fa, interior);
  });
  m.def("stft_gaussian", [](int n, double L, const std::vector<std::pair<double, double>>& pts) {
    const GridSpec grid{n, L};
    const Window g = gaussian_window(grid);
    std::vector<Vec2> zs;
    for (const auto& [x, w] : pts) zs.push_back({x, w});
    return stft(g, g, zs);
  });

  m.def("lattice_trace", [](double a, double b, int n, double L, double k, double r_supp) {
    const GridSpec grid{n, L};
    const Window g = gaussian_window(grid);
    const GaborSystem sys = make_full_torus_lattice(a, b, grid, {g});
    const FrameAnalysis fa = frame_operator(sys);
    const TransversalSample tr = TransversalSample::torus_lattice(a, b, grid, k);
    const IdempotentResult idem = gabor_idempotent(sys, fa, tr, r_supp);
    return py::make_tuple(idempotent_trace(idem.P, TraceMode::unnormalized),
                          idem.idempotency_residual);
  });

  m.def("gap_labels", [](const PointSet& ps, double theta, double r) {
    const GapLabelReport rep = gap_label_generators(ps, theta, r);
    return py::make_tuple(rep.frequency_generators, rep.twisted_generator, rep.density);
  });
  m.def("clopen_measure", &clopen_measure);
}
