#include "maasslift/capability.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace ml {

namespace {

CapabilityTable builtin_table() {
  CapabilityTable t;
  t.jmax[{2, 2}] = 8;
  t.jmax[{2, 3}] = 5;
  t.jmax[{2, 5}] = 3;
  t.jmax[{2, 7}] = 3;
  t.jmax[{4, 2}] = 2;
  t.jmax[{4, 3}] = 2;
  t.jmax[{4, 5}] = 1;
  t.jmax[{4, 7}] = 1;
  return t;
}

CapabilityTable load_table() {
  const char* path = std::getenv("MAASSLIFT_CAPABILITY");
  if (!path || !*path) return builtin_table();
  std::ifstream in(path);
  if (!in) throw UsageError(std::string("capability table file not readable: ") + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("capability table parse error: ") + e.what());
  }
  CapabilityTable t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    long size = std::stol(it.key());
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
      t.jmax[{size, std::stol(jt.key())}] = jt.value().get<long>();
  }
  return t;
}

}  // namespace

const CapabilityTable& capability_table() {
  static const CapabilityTable t = load_table();
  return t;
}

long capability_jmax(long size, long p) {
  const auto& t = capability_table();
  auto it = t.jmax.find({size, p});
  if (it == t.jmax.end())
    throw CapabilityError("no enumeration capability for size " + std::to_string(size) +
                          " at p = " + std::to_string(p));
  return it->second;
}

void require_capability(long size, long p, long j) {
  long cap = capability_jmax(size, p);
  if (j > cap)
    throw CapabilityError("depth " + std::to_string(j) + " exceeds capability " +
                          std::to_string(cap) + " for size " + std::to_string(size) +
                          " at p = " + std::to_string(p));
}

long bruteforce_depth(long size, long p, long fp) {
  long cap = capability_jmax(size, p);
  if (fp > cap)
    throw CapabilityError("conductor exponent " + std::to_string(fp) +
                          " at p = " + std::to_string(p) + " needs depth beyond capability " +
                          std::to_string(cap) + " for size " + std::to_string(size));
  if (size == 2) {
    long want = 2 * fp + 2;  // margin: extra coefficients double-check the answer
    return want < cap ? want : cap;
  }
  // size 4: the closed-form evaluators cover depth max(fp, 1).
  long want = fp > 1 ? fp : 1;
  return want < cap ? want : cap;
}

}  // namespace ml
