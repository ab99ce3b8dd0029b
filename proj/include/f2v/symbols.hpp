#pragma once

// Interned variable symbols. The three chart coordinates t, v, y are fixed;
// everything else (epsilon, solver unknowns, lift parameters, ambient model
// coordinates) is an auxiliary symbol created on demand.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace f2v {

struct F2VError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : F2VError {
  using F2VError::F2VError;
};
struct NonInvertibleSubstitution : F2VError {
  using F2VError::F2VError;
};
struct NegativeTExponent : F2VError {
  using F2VError::F2VError;
};
struct DimensionMismatch : F2VError {
  using F2VError::F2VError;
};
struct ChartMismatch : F2VError {
  using F2VError::F2VError;
};
struct InternalCheckFailure : F2VError {
  using F2VError::F2VError;
};

class VarId {
 public:
  VarId() : id_(0) {}

  static VarId intern(const std::string& name);

  const std::string& name() const;
  uint32_t raw() const { return id_; }

  bool is_core() const { return id_ < 3; }

  bool operator==(const VarId& o) const { return id_ == o.id_; }
  bool operator!=(const VarId& o) const { return id_ != o.id_; }

  // Canonical order: t before v before y before auxiliary symbols, auxiliary
  // symbols by name. This is the order monomial keys and printed factors use.
  static bool canonical_less(VarId a, VarId b);

 private:
  explicit VarId(uint32_t id) : id_(id) {}
  uint32_t id_;
};

inline VarId var_t() { return VarId::intern("t"); }
inline VarId var_v() { return VarId::intern("v"); }
inline VarId var_y() { return VarId::intern("y"); }
inline VarId var_eps() { return VarId::intern("eps"); }

struct VarLess {
  bool operator()(VarId a, VarId b) const { return VarId::canonical_less(a, b); }
};

}  // namespace f2v
