#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgbm/keyvalue.hpp"
#include "sgbm/model.hpp"

namespace sgbm {

// Edge list: header "n k d seed", then one "i j" pair per line (1-based, i < j).
void write_edge_list(std::ostream& out, const SgbmInstance& instance);
void write_edge_list(std::ostream& out, const Matrix& adjacency, int k, int d, std::uint64_t seed);

struct EdgeListFile {
  int n = 0;
  int k = 0;
  int d = 0;
  std::uint64_t seed = 0;
  Matrix adjacency;
};

EdgeListFile read_edge_list(std::istream& in);

// Everything but the edges, as a key-value document.
KeyValueDoc instance_metadata(const SgbmInstance& instance);

// Kernel section <-> kernel. Custom kernels are written by name only.
void write_kernel(KeyValueDoc& doc, const std::string& section, const ConnectivityKernel& kernel);
ConnectivityKernel read_kernel(const KeyValueDoc& doc, const std::string& section);

// One label per line, 1-based.
void write_labels(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_labels(std::istream& in);

// Rebuilds an instance (points, labels, adjacency) from edge list + metadata.
SgbmInstance load_instance(const std::string& edge_path, const std::string& meta_path);

}  // namespace sgbm
