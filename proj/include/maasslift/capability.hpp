// Resource-feasibility limits for the exhaustive local enumerations.
//
// The brute-force engine enumerates symmetric matrices modulo p^j; its
// cost grows like p^(j * entries), so each (matrix size, p) pair carries a
// maximum exact depth j_max.  The table is configuration, not hardcode:
// the environment variable MAASSLIFT_CAPABILITY may name a JSON file
// {"2": {"2": 8, ...}, "4": {...}} that replaces the built-in defaults.
#pragma once

#include "maasslift/numbers.hpp"

#include <map>

namespace ml {

struct CapabilityTable {
  // (size, p) -> maximum depth for exact b-coefficients.
  std::map<std::pair<long, long>, long> jmax;
};

// Built-in defaults or the MAASSLIFT_CAPABILITY override, loaded once.
const CapabilityTable& capability_table();

// Maximum supported depth; throws CapabilityError if (size, p) is not
// covered at all.
long capability_jmax(long size, long p);

// Throws CapabilityError unless depth j is within the table.
void require_capability(long size, long p, long j);

// Depth policy for computing the local series of a form of the given size
// whose invariant has p-conductor exponent fp: deep enough to determine
// the answer, with margin for cross-verification where affordable.
// Throws CapabilityError when fp itself is out of reach.
long bruteforce_depth(long size, long p, long fp);

}  // namespace ml
