#ifndef EPINET_ERROR_HPP
#define EPINET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace epinet {

enum class ErrorKind {
  InvalidArgument,  // precondition or invariant violated by caller input
  Parse,            // malformed spec document
  Capacity,         // instance exceeds a configured size cap
  Numerical,        // a numerical procedure failed to meet its contract
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond)
    fail(ErrorKind::InvalidArgument, msg);
}

}  // namespace epinet

#endif
