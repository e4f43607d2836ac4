#pragma once

#include <stdexcept>
#include <string>

namespace secgraph {

enum class Errc {
  constraint_violation,
  duplicate_user,
  duplicate_label,
  duplicate_group,
  empty_spec,
  unknown_user,
  unknown_group,
  unknown_snode,
  duplicate_pair,
  self_connection,
  no_such_request,
  not_owner,
  not_connected,
  threshold_exceeded,
  secretary_busy,
  invalid_permission_set,
  domain_error,
  too_large,
  inconsistent_knowledge,
  version_mismatch,
  malformed_input,
  parse_error,
  validation_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

  /// Keeps `what` verbatim, for wrapping a cause whose message is already
  /// prefixed with its code name.
  static Error raw(Errc code, const std::string& what) { return Error(what, code); }

 private:
  Error(const std::string& what, Errc code) : std::runtime_error(what), code_(code) {}

  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace secgraph
