// JSON / CSV serialization for every artifact the command-line tool
// emits.  All output is deterministic: object keys are emitted in sorted
// order, collections follow the stored canonical orders, and no
// timestamps or machine-dependent data appear anywhere.
#pragma once

#include "maasslift/lift.hpp"
#include "maasslift/modforms.hpp"
#include "maasslift/phi.hpp"
#include "maasslift/siegel.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ml {

// Version stamp recorded in manifests.
extern const char* const kToolkitVersion;

// Coefficient table -> JSON array of {"form": canonical encoding,
// "value": "a/b"}, in the stored ascending (D, encoding) order.
std::string table_to_json(const CoefficientTable& t);
std::string table_to_csv(const CoefficientTable& t);

// Inverse: the weight is not part of the file format, so callers supply
// it when a downstream computation needs it (0 = unknown).  The class
// size and the covered range are recovered from the data.
CoefficientTable table_from_json(const std::string& text, long k);

// Relation parameter -> JSON array of {"m": m, "c": "a/b"}, ascending m.
std::string param_to_json(const MaassParameter& c);
MaassParameter param_from_json(const std::string& text, long k_parity);

// Half-integral expansion -> JSON array of [m, "c(m)"] pairs for every
// m < precision, ascending; CSV variant has an "m,c" header line.
std::string qexp_to_json(const QExpansion& q);
std::string qexp_to_csv(const QExpansion& q);

// Local report for one (form, p): {"form","p","b","F","Ftilde","phi_local"}
// with Ftilde as {"p": p, "terms": [[exponent, coefficient], ...]},
// exponents ascending, coefficients as {"rat":"a/b","irr":"c/d","p":p}.
std::string siegel_report_json(const LocalSiegelData& d,
                               const std::vector<Rational>& phi);

// Jacobi slice table: index lattice, bound, per-key entries
// {"a","w","disc","value"}, and the invariant-fiber summary.
std::string jacobi_to_json(const JacobiTable& jt, const MTypeReport& mt);

// manifest.json body: {"artifacts": {name: sha256-hex}, "config": <parsed
// config object>, "versions": {...}}.  config_json must itself be valid
// JSON (the CLI passes its flag record).
std::string manifest_json(
    const std::string& config_json,
    const std::vector<std::pair<std::string, std::string>>& artifact_hashes);

}  // namespace ml
