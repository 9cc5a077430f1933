#pragma once

#include <iosfwd>

#include "bgwr/config.hpp"
#include "bgwr/spatial_graph.hpp"

namespace bgwr::cli {

/// `bgwr <command> [--config FILE] [--key value ...]`. CLI11 errors propagate.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Graph distances from --adjacency/--patches, or Euclidean from --coords.
DistanceMatrix load_distances(const RunConfig& cfg);

/// Executes one command. Outputs go under cfg.out with fixed names; on any
/// error the files written so far are removed and a nonzero status returned.
int run(const RunConfig& cfg, std::ostream& log);

/// Parse + run with diagnostics on stderr.
int main(int argc, const char* const* argv);

}  // namespace bgwr::cli
