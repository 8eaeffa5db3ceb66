#pragma once

#include <stdexcept>
#include <string>

namespace fbm {

// All library failures derive from fbm::error so callers (the CLI in
// particular) can map them onto exit codes.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Array shape or grid mismatch.
class dimension_error : public error {
  public:
    using error::error;
};

// Argument outside the mathematical domain of an operation (t < 0, p < 1, ...).
class domain_error : public error {
  public:
    using error::error;
};

// Inconsistent configuration; the message names the offending key.
class config_error : public error {
  public:
    using error::error;
};

// Index outside a resolved band (dyadic block k, radius, ...).
class range_error : public error {
  public:
    using error::error;
};

// Unknown symbol name.
class catalog_error : public error {
  public:
    using error::error;
};

// Violated precondition of a check (e.g. support hypothesis of Bernstein).
class precondition_error : public error {
  public:
    using error::error;
};

// Requested feature deliberately unsupported (non-dyadic rescaling, ...).
class unsupported_error : public error {
  public:
    using error::error;
};

class numerical_blowup : public error {
  public:
    numerical_blowup(const std::string& what, double time)
        : error(what), time_(time) {}
    double time() const noexcept { return time_; }

  private:
    double time_;
};

class non_contraction : public error {
  public:
    non_contraction(const std::string& what, double ratio)
        : error(what), ratio_(ratio) {}
    double ratio() const noexcept { return ratio_; }

  private:
    double ratio_;
};

} // namespace fbm
