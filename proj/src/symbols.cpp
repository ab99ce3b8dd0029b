#include "f2v/symbols.hpp"

#include <map>
#include <mutex>

namespace f2v {

namespace {

struct Registry {
  std::mutex mu;
  std::vector<std::string> names;
  std::map<std::string, uint32_t> ids;

  Registry() {
    // Reserve the core coordinates so is_core() can test the raw id.
    for (const char* n : {"t", "v", "y"}) {
      ids.emplace(n, static_cast<uint32_t>(names.size()));
      names.emplace_back(n);
    }
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

VarId VarId::intern(const std::string& name) {
  if (name.empty()) throw F2VError("empty variable name");
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(name);
  if (it != r.ids.end()) return VarId(it->second);
  uint32_t id = static_cast<uint32_t>(r.names.size());
  r.names.push_back(name);
  r.ids.emplace(name, id);
  return VarId(id);
}

const std::string& VarId::name() const {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.names.at(id_);
}

bool VarId::canonical_less(VarId a, VarId b) {
  if (a.id_ == b.id_) return false;
  bool ca = a.is_core(), cb = b.is_core();
  if (ca != cb) return ca;
  if (ca) return a.id_ < b.id_;  // t < v < y by construction
  return a.name() < b.name();
}

}  // namespace f2v
