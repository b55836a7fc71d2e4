#include "qg/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qg {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pointset_json(const PointSet& ps) {
  std::string out = "{\"dim\":2,\"points\":[";
  for (size_t i = 0; i < ps.points.size(); ++i) {
    if (i) out += ",";
    out += "[" + fmt17(ps.points[i].x) + "," + fmt17(ps.points[i].y) + "]";
  }
  out += "],\"embedding\":";
  if (ps.embedding) {
    const auto& e = *ps.embedding;
    out += "{\"basis\":[";
    for (int r = 0; r < 2; ++r) {
      if (r) out += ",";
      out += "[";
      for (int c = 0; c < e.k; ++c) {
        if (c) out += ",";
        out += fmt17(e.basis[static_cast<size_t>(r * e.k + c)]);
      }
      out += "]";
    }
    out += "],\"int_coords\":[";
    for (size_t i = 0; i < e.int_coords.size(); ++i) {
      if (i) out += ",";
      out += "[";
      for (int c = 0; c < e.k; ++c) {
        if (c) out += ",";
        out += std::to_string(e.int_coords[i][c]);
      }
      out += "]";
    }
    out += "],\"internal_coords\":";
    if (e.internal_coords) {
      out += "[";
      for (size_t i = 0; i < e.internal_coords->size(); ++i) {
        if (i) out += ",";
        out += "[";
        const auto& row = (*e.internal_coords)[i];
        for (size_t c = 0; c < row.size(); ++c) {
          if (c) out += ",";
          out += fmt17(row[c]);
        }
        out += "]";
      }
      out += "]";
    } else {
      out += "null";
    }
    out += "}";
  } else {
    out += "null";
  }
  out += ",\"marks\":";
  if (ps.marks) {
    out += "[";
    for (size_t i = 0; i < ps.marks->size(); ++i) {
      if (i) out += ",";
      out += std::to_string((*ps.marks)[i]);
    }
    out += "]";
  } else {
    out += "null";
  }
  out += ",\"region\":{\"side\":" + fmt17(ps.region.side) + "}";
  out += ",\"provenance\":\"" + ps.provenance + "\"}";
  return out;
}

PointSet pointset_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PointSet ps;
  ps.dim = j.at("dim").get<int>();
  for (const auto& p : j.at("points"))
    ps.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  if (!j.at("embedding").is_null()) {
    const auto& je = j.at("embedding");
    Embedding e;
    const auto& basis = je.at("basis");
    e.k = static_cast<int>(basis.at(0).size());
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < e.k; ++c) e.basis.push_back(basis.at(r).at(c).get<double>());
    for (const auto& row : je.at("int_coords")) {
      std::vector<std::int64_t> xs;
      for (const auto& v : row) xs.push_back(v.get<std::int64_t>());
      e.int_coords.push_back(IntVec::of(xs));
    }
    if (!je.at("internal_coords").is_null()) {
      e.internal_coords.emplace();
      for (const auto& row : je.at("internal_coords"))
        e.internal_coords->push_back(row.get<std::vector<double>>());
    }
    ps.embedding = std::move(e);
  }
  if (!j.at("marks").is_null()) ps.marks = j.at("marks").get<std::vector<int>>();
  ps.region = Cube{0.0, 0.0, j.at("region").at("side").get<double>()};
  ps.provenance = j.at("provenance").get<std::string>();
  ps.validate();
  return ps;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::bad_input, "cannot open for write: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::bad_input, "cannot open for read: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fill_report_json(const FillReport& rep) {
  std::string out = "{\"eps\":" + fmt17(rep.eps) + ",\"translates\":[";
  for (size_t i = 0; i < rep.translates.size(); ++i) {
    if (i) out += ",";
    out += "[" + fmt17(rep.translates[i].x) + "," + fmt17(rep.translates[i].y) + "]";
  }
  out += "],\"hole_sequence\":[";
  for (size_t i = 0; i < rep.hole_sequence.size(); ++i) {
    if (i) out += ",";
    out += "{\"lower\":" + fmt17(rep.hole_sequence[i].lower) +
           ",\"upper\":" + fmt17(rep.hole_sequence[i].upper) + "}";
  }
  out += "],\"iterations\":" + std::to_string(rep.iterations) + "}";
  return out;
}

std::string frame_report_json(const FrameAnalysis& fa) {
  const Eigen::VectorXd& lam = fa.eigenvalues();
  std::string out = "{\"A\":" + fmt17(fa.A) + ",\"B\":" + fmt17(fa.B);
  out += ",\"n\":" + std::to_string(fa.grid.n) + ",\"L\":" + fmt17(fa.grid.L);
  out += ",\"interior_fraction\":" + fmt17(fa.interior_fraction);
  out += ",\"eigen_extremes\":[" + fmt17(lam(0)) + "," + fmt17(lam(lam.size() - 1)) + "]";
  out += ",\"atoms\":" + std::to_string(fa.atom_count) + "}";
  return out;
}

std::string window_json(const Window& w) {
  std::string out = "{\"grid\":{\"n\":" + std::to_string(w.grid.n) + ",\"L\":" + fmt17(w.grid.L) +
                    "},\"values\":[";
  for (int j = 0; j < w.grid.n; ++j) {
    if (j) out += ",";
    out += "[" + fmt17(w.values[j].real()) + "," + fmt17(w.values[j].imag()) + "]";
  }
  out += "]}";
  return out;
}

}  // namespace qg
