#include "secgraph/errors.hpp"

namespace secgraph {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::constraint_violation:   return "ConstraintViolation";
    case Errc::duplicate_user:         return "DuplicateUser";
    case Errc::duplicate_label:        return "DuplicateLabel";
    case Errc::duplicate_group:        return "DuplicateGroup";
    case Errc::empty_spec:             return "EmptySpec";
    case Errc::unknown_user:           return "UnknownUser";
    case Errc::unknown_group:          return "UnknownGroup";
    case Errc::unknown_snode:          return "UnknownSnode";
    case Errc::duplicate_pair:         return "DuplicatePair";
    case Errc::self_connection:        return "SelfConnection";
    case Errc::no_such_request:        return "NoSuchRequest";
    case Errc::not_owner:              return "NotOwner";
    case Errc::not_connected:          return "NotConnected";
    case Errc::threshold_exceeded:     return "ThresholdExceeded";
    case Errc::secretary_busy:         return "SecretaryBusy";
    case Errc::invalid_permission_set: return "InvalidPermissionSet";
    case Errc::domain_error:           return "DomainError";
    case Errc::too_large:              return "TooLarge";
    case Errc::inconsistent_knowledge: return "InconsistentKnowledge";
    case Errc::version_mismatch:       return "VersionMismatch";
    case Errc::malformed_input:        return "MalformedInput";
    case Errc::parse_error:            return "ParseError";
    case Errc::validation_error:       return "ValidationError";
  }
  return "Error";
}

}  // namespace secgraph
