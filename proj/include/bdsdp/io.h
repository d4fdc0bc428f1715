#pragma once

#include "bdsdp/staircase.h"

#include <json.hpp>

#include <chrono>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace bdsdp {

/// Malformed input; `line` is 1-based (0 when not tied to a line).
class ParseError : public InvalidArgument {
public:
  ParseError(const std::string &what, Index line);
  Index line() const { return line_; }

private:
  Index line_;
};

// Problem file:
//
//   bdsdp 1
//   m d
//   linear | pseudo-huber <eps> | smoothed-lud <eps>
//   row col value          (1-based, row <= col, one entry per line)
//
// Lines starting with '#' and blank lines are ignored. For the measurement
// costs the diagonal blocks are I_d; entries listed there must agree.
struct ProblemFile {
  BlockSpec spec;
  std::string kind = "linear";
  Scalar eps = 0;
  /// 0-based upper-triangle entries, sorted by (row, col); for measurement
  /// costs, entries inside diagonal blocks are left out.
  std::vector<Triplet> entries;

  bool is_measurement() const { return kind != "linear"; }
  /// C for linear costs, H (with identity diagonal blocks) otherwise.
  SymBlockMatrix matrix() const;
  std::unique_ptr<CostModel> make_cost() const;
};

ProblemFile parse_problem(std::istream &in);
ProblemFile read_problem_file(const std::string &path);
void write_problem(std::ostream &out, const ProblemFile &pf);
void write_problem_file(const std::string &path, const ProblemFile &pf);

/// Builds a problem file from C (linear) or H (measurement costs).
ProblemFile make_problem_file(const std::string &kind, Scalar eps,
                              const SymBlockMatrix &M);

// Factor file:
//
//   bdsdp-factor 1
//   m d p
//   n rows of p numbers
void write_factor(std::ostream &out, const StiefelPoint &Y);
void write_factor_file(const std::string &path, const StiefelPoint &Y);
/// Throws ParseError on malformed input and InvalidArgument when the slices
/// are not orthonormal to `tol`.
StiefelPoint parse_factor(std::istream &in, Scalar tol = 1e-8);
StiefelPoint read_factor_file(const std::string &path, Scalar tol = 1e-8);

nlohmann::json report_to_json(const SolveReport &rep);
SolveReport report_from_json(const nlohmann::json &j);

/// Doubles are stored as JSON numbers; non-finite values as the strings
/// "inf", "-inf" and "nan".
nlohmann::json number_to_json(Scalar v);
Scalar number_from_json(const nlohmann::json &j);

inline constexpr const char *kTraceHeader = "iter,p,cost,grad_norm,radius,time";

/// Per-iteration CSV trace, usable as an RTR progress callback.
class TraceWriter {
public:
  explicit TraceWriter(std::ostream &out);
  void operator()(const RtrProgress &pr);

private:
  std::ostream *out_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace bdsdp
