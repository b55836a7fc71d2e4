#pragma once

#include <string>

#include "qg/holefill.hpp"
#include "qg/pointset.hpp"
#include "qg/tfa.hpp"

namespace qg {

// Fixed field order, floats at 17 significant digits.
std::string pointset_json(const PointSet& ps);
PointSet pointset_from_json(const std::string& text);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string fill_report_json(const FillReport& rep);
std::string frame_report_json(const FrameAnalysis& fa);
std::string window_json(const Window& w);

std::string fmt17(double v);

}  // namespace qg
