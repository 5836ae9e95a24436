// A stand-in quality tool. The score grows with the size of the distorted
// stream, scaled by the gain the mock encoder records in its first line:
//   quality = 100 * (1 - exp(-gain * bytes / scale))

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pacebench/atomic_file.h"

int main(int argc, char** argv) {
  std::string reference;
  std::string distorted;
  std::string report;
  double scale_bytes = 200000.0;
  int frames = 0;

  CLI::App app{"Mock quality tool for pacebench tests", "pacebench-mock-metric"};
  app.add_option("--reference", reference, "Reference video (unused)");
  app.add_option("--distorted", distorted, "Encoded stream")->required();
  app.add_option("--report", report, "Where to write the JSON report")->required();
  app.add_option("--scale-bytes", scale_bytes, "Byte count giving quality 63.2");
  app.add_option("--frames", frames, "Also emit this many per-frame scores");
  CLI11_PARSE(app, argc, argv);

  std::error_code ec;
  const auto bytes = std::filesystem::file_size(distorted, ec);
  if (ec) {
    std::cerr << "mock-metric: cannot stat " << distorted << std::endl;
    return 1;
  }
  double gain = 1.0;
  std::ifstream in(distorted, std::ios::binary);
  std::string first;
  if (std::getline(in, first) && first.rfind("PBMOCK ", 0) == 0) {
    gain = std::stod(first.substr(7));
  }

  const double quality = 100.0 * (1.0 - std::exp(-gain * static_cast<double>(bytes) / scale_bytes));
  nlohmann::json doc = {{"metric", "vmaf"}, {"pooled", quality}};
  if (frames > 0) doc["frames"] = std::vector<double>(frames, quality);
  pacebench::WriteFileAtomically(report, doc.dump(2) + "\n");
  return 0;
}
