#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/coarse_map.hpp"
#include "coarse/matching.hpp"
#include "coarse/net.hpp"
#include "coarse/rectify.hpp"
#include "coarse/tree_partition.hpp"
#include "coarse/uf_flow.hpp"

namespace coarse {

// Line-oriented text formats. Writers are deterministic: the same object
// always produces the same bytes. Readers accept `#` comment lines and blank
// lines and throw Error(kParse) with the offending line number.

// `net v1 <n> <edges|lattice> <r0>`, `v <id> [coords]`, `e <u> <v> <len>`,
// and for windows `core <id>`. A file without core lines reads as a window
// whose core is every vertex.
Window read_window(std::istream& in);
Net read_net(std::istream& in);
void write_net(std::ostream& out, const Net& net);
void write_window(std::ostream& out, const Window& w);

// `map v1 <source-n> <target-n>`, then `m <x> <y>`.
CoarseMap read_map(std::istream& in, const Net& source, const Net& target);
void write_map(std::ostream& out, const CoarseMap& f);

// Map file with only some source vertices listed.
struct PartialMap {
  std::size_t source_size = 0;
  std::size_t target_size = 0;
  std::vector<Vertex> image;  // kNoVertex where unlisted
};
PartialMap read_partial_map(std::istream& in);
void write_bijection(std::ostream& out, const Bijection& b);

// `chain v1 <n>`, then `c <v> <int>` or `c <v> <num>/<den>`; unlisted
// vertices are zero.
Chain0 read_chain(std::istream& in);
void write_chain(std::ostream& out, const Chain0& c);

// `flow v1 <l> <M>` then `b <u> <v> <value>`, one per nonzero edge, u < v.
FlowAssignment read_flow(std::istream& in, std::size_t vertex_count);
void write_flow(std::ostream& out, const FlowAssignment& b);

// `cert v1 <kind>`, `param <key> <value>` lines, `S <id>` lines and one
// `numbers <lhs> <rhs>` line.
struct CertFile {
  std::string kind;
  std::map<std::string, std::string> params;
  VertexSet set;
  Rational lhs{0};
  Rational rhs{0};
};
CertFile read_cert(std::istream& in);
void write_cert(std::ostream& out, const CertFile& cert);

CertFile to_cert_file(const ObstructionCert& c);
CertFile to_cert_file(const ViolationCert& c);
CertFile to_cert_file(const DoublingDeficiency& c);
ObstructionCert obstruction_from(const CertFile& f);
ViolationCert violation_from(const CertFile& f);
DoublingDeficiency doubling_from(const CertFile& f);

std::string format_rational(const Rational& q);
Rational parse_rational(const std::string& text);

// Reads a whole file, throwing Error(kParse) when it cannot be opened.
std::string slurp(const std::filesystem::path& path);

}  // namespace coarse
