#include "bdsdp/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace bdsdp {

using nlohmann::json;

ParseError::ParseError(const std::string &what, Index line)
    : InvalidArgument(line > 0 ? "line " + std::to_string(line) + ": " + what
                               : what),
      line_(line) {}

namespace {

std::string fmt(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool skip_line(const std::string &s) {
  const auto p = s.find_first_not_of(" \t\r");
  return p == std::string::npos || s[p] == '#';
}

// Next meaningful line; false at end of input.
bool next_line(std::istream &in, std::string &line, Index &lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!skip_line(line))
      return true;
  }
  return false;
}

template <typename T>
T read_token(std::istringstream &ss, const char *what, Index lineno) {
  T v{};
  if (!(ss >> v))
    throw ParseError(std::string("expected ") + what, lineno);
  return v;
}

void expect_end(std::istringstream &ss, Index lineno) {
  std::string extra;
  if (ss >> extra)
    throw ParseError("unexpected trailing token '" + extra + "'", lineno);
}

Scalar parse_number(const std::string &tok, Index lineno) {
  std::size_t pos = 0;
  Scalar v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception &) {
    throw ParseError("invalid number '" + tok + "'", lineno);
  }
  if (pos != tok.size() || !std::isfinite(v))
    throw ParseError("invalid number '" + tok + "'", lineno);
  return v;
}

bool in_diagonal_block(Index r, Index c, Index d) { return r / d == c / d; }

} // namespace

SymBlockMatrix ProblemFile::matrix() const {
  std::vector<Triplet> t = entries;
  if (is_measurement())
    for (Index k = 0; k < spec.n(); ++k)
      t.push_back({k, k, 1.0});
  return SymBlockMatrix::from_triplets(spec, t);
}

std::unique_ptr<CostModel> ProblemFile::make_cost() const {
  if (kind == "linear")
    return std::make_unique<LinearCost>(matrix());
  if (kind == "pseudo-huber")
    return std::make_unique<PseudoHuberCost>(matrix(), eps);
  if (kind == "smoothed-lud")
    return std::make_unique<SmoothedLUDCost>(matrix(), eps);
  throw InvalidArgument("unknown cost kind '" + kind + "'");
}

ProblemFile parse_problem(std::istream &in) {
  ProblemFile pf;
  std::string line;
  Index lineno = 0;

  if (!next_line(in, line, lineno))
    throw ParseError("empty problem file", 0);
  {
    std::istringstream ss(line);
    const auto tag = read_token<std::string>(ss, "format tag", lineno);
    const auto ver = read_token<std::string>(ss, "format version", lineno);
    if (tag != "bdsdp" || ver != "1")
      throw ParseError("expected header 'bdsdp 1'", lineno);
    expect_end(ss, lineno);
  }
  if (!next_line(in, line, lineno))
    throw ParseError("missing dimension line", lineno);
  {
    std::istringstream ss(line);
    const auto m = read_token<long long>(ss, "m", lineno);
    const auto d = read_token<long long>(ss, "d", lineno);
    expect_end(ss, lineno);
    if (m < 1 || d < 1)
      throw ParseError("m and d must be positive", lineno);
    pf.spec = BlockSpec(m, d);
  }
  if (!next_line(in, line, lineno))
    throw ParseError("missing cost line", lineno);
  {
    std::istringstream ss(line);
    pf.kind = read_token<std::string>(ss, "cost kind", lineno);
    if (pf.kind == "pseudo-huber" || pf.kind == "smoothed-lud") {
      pf.eps = parse_number(read_token<std::string>(ss, "eps", lineno), lineno);
      if (!(pf.eps > 0))
        throw ParseError("eps must be positive", lineno);
    } else if (pf.kind != "linear") {
      throw ParseError("unknown cost kind '" + pf.kind + "'", lineno);
    }
    expect_end(ss, lineno);
  }

  const Index n = pf.spec.n(), d = pf.spec.d;
  std::map<std::pair<Index, Index>, Scalar> seen;
  while (next_line(in, line, lineno)) {
    std::istringstream ss(line);
    const auto r = read_token<long long>(ss, "row index", lineno);
    const auto c = read_token<long long>(ss, "column index", lineno);
    const Scalar v = parse_number(read_token<std::string>(ss, "value", lineno), lineno);
    expect_end(ss, lineno);
    if (r < 1 || c < 1 || r > n || c > n)
      throw ParseError("index out of range [1, " + std::to_string(n) + "]", lineno);
    if (r > c)
      throw ParseError("lower-triangle entry (" + std::to_string(r) + ", " +
                           std::to_string(c) + ")",
                       lineno);
    const Index r0 = r - 1, c0 = c - 1;
    if (!seen.emplace(std::make_pair(r0, c0), v).second)
      throw ParseError("duplicate entry", lineno);
    if (pf.is_measurement() && in_diagonal_block(r0, c0, d)) {
      if (v != (r0 == c0 ? 1.0 : 0.0))
        throw ParseError("diagonal blocks of measurements must be identity", lineno);
      continue;
    }
    pf.entries.push_back({r0, c0, v});
  }
  std::sort(pf.entries.begin(), pf.entries.end(),
            [](const Triplet &a, const Triplet &b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  return pf;
}

ProblemFile read_problem_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "'", 0);
  return parse_problem(in);
}

void write_problem(std::ostream &out, const ProblemFile &pf) {
  out << "bdsdp 1\n" << pf.spec.m << ' ' << pf.spec.d << '\n' << pf.kind;
  if (pf.is_measurement())
    out << ' ' << fmt(pf.eps);
  out << '\n';
  for (const Triplet &t : pf.entries)
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << fmt(t.value) << '\n';
}

void write_problem_file(const std::string &path, const ProblemFile &pf) {
  std::ofstream out(path);
  if (!out)
    throw InvalidArgument("cannot write '" + path + "'");
  write_problem(out, pf);
}

ProblemFile make_problem_file(const std::string &kind, Scalar eps,
                              const SymBlockMatrix &M) {
  ProblemFile pf;
  pf.spec = M.spec();
  pf.kind = kind;
  pf.eps = eps;
  const Index d = pf.spec.d;
  if (pf.is_measurement()) {
    for (Index i = 0; i < pf.spec.m; ++i)
      if (M.block(i, i) != Matrix::Identity(d, d))
        throw InvalidArgument("make_problem_file: diagonal blocks must be I_d");
  }
  for (const Triplet &t : M.upper_triplets())
    if (!(pf.is_measurement() && in_diagonal_block(t.row, t.col, d)))
      pf.entries.push_back(t);
  return pf;
}

void write_factor(std::ostream &out, const StiefelPoint &Y) {
  const Matrix &M = Y.matrix();
  out << "bdsdp-factor 1\n"
      << Y.manifold().m() << ' ' << Y.manifold().d() << ' ' << Y.p() << '\n';
  for (Index r = 0; r < M.rows(); ++r) {
    for (Index c = 0; c < M.cols(); ++c)
      out << (c ? " " : "") << fmt(M(r, c));
    out << '\n';
  }
}

void write_factor_file(const std::string &path, const StiefelPoint &Y) {
  std::ofstream out(path);
  if (!out)
    throw InvalidArgument("cannot write '" + path + "'");
  write_factor(out, Y);
}

StiefelPoint parse_factor(std::istream &in, Scalar tol) {
  std::string line;
  Index lineno = 0;
  if (!next_line(in, line, lineno) || line.find("bdsdp-factor 1") != 0)
    throw ParseError("expected header 'bdsdp-factor 1'", lineno);
  if (!next_line(in, line, lineno))
    throw ParseError("missing dimension line", lineno);
  std::istringstream ss(line);
  const auto m = read_token<long long>(ss, "m", lineno);
  const auto d = read_token<long long>(ss, "d", lineno);
  const auto p = read_token<long long>(ss, "p", lineno);
  expect_end(ss, lineno);
  if (m < 1 || d < 1 || p < d || p > m * d)
    throw ParseError("invalid factor dimensions", lineno);
  const ManifoldSpec M(BlockSpec(m, d), p);
  Matrix Y(M.n(), p);
  for (Index r = 0; r < M.n(); ++r) {
    if (!next_line(in, line, lineno))
      throw ParseError("missing factor row " + std::to_string(r + 1), lineno);
    std::istringstream rs(line);
    for (Index c = 0; c < p; ++c)
      Y(r, c) = parse_number(read_token<std::string>(rs, "factor entry", lineno), lineno);
    expect_end(rs, lineno);
  }
  if (next_line(in, line, lineno))
    throw ParseError("trailing data after factor", lineno);
  const Scalar err = feasibility_error(Y, d);
  if (!(err <= tol))
    throw InvalidArgument("factor is not feasible (error " + fmt(err) + ")");
  return StiefelPoint::unchecked(M, std::move(Y));
}

StiefelPoint read_factor_file(const std::string &path, Scalar tol) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "'", 0);
  return parse_factor(in, tol);
}

// ------------------------------------------------------------------ JSON

json number_to_json(Scalar v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return v;
}

Scalar number_from_json(const json &j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan")
      return std::numeric_limits<Scalar>::quiet_NaN();
    if (s == "inf")
      return std::numeric_limits<Scalar>::infinity();
    if (s == "-inf")
      return -std::numeric_limits<Scalar>::infinity();
    throw ParseError("invalid number string '" + s + "'", 0);
  }
  return j.get<Scalar>();
}

namespace {

json matrix_to_json(const Matrix &M) {
  json rows = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c)
      row.push_back(number_to_json(M(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json &j) {
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j.at(r).size()) != cols)
      throw ParseError("ragged matrix in report", 0);
    for (Index c = 0; c < cols; ++c)
      M(r, c) = number_from_json(j.at(r).at(c));
  }
  return M;
}

template <typename T>
json optional_to_json(const std::optional<T> &v) {
  if (!v)
    return nullptr;
  if constexpr (std::is_floating_point_v<T>)
    return number_to_json(*v);
  else
    return *v;
}

json stage_to_json(const StageRecord &s) {
  return {{"p", s.p},
          {"rtr_iterations", s.rtr_iterations},
          {"rtr_status", to_string(s.rtr_status)},
          {"cost_start", number_to_json(s.cost_start)},
          {"cost_end", number_to_json(s.cost_end)},
          {"grad_norm", number_to_json(s.grad_norm)},
          {"lambda_min_S", number_to_json(s.lambda_min_S)},
          {"lambda_min_hess", optional_to_json(s.lambda_min_hess)},
          {"cond", number_to_json(s.cond)},
          {"numerical_rank", s.numerical_rank},
          {"escape_taken", s.escape_taken},
          {"escape_mode", s.escape_mode},
          {"escape_t", number_to_json(s.escape_t)},
          {"cost_after_escape", number_to_json(s.cost_after_escape)}};
}

RtrStatus status_from_string(const std::string &s) {
  if (s == "converged")
    return RtrStatus::Converged;
  if (s == "max_iter")
    return RtrStatus::MaxIter;
  if (s == "stalled")
    return RtrStatus::Stalled;
  throw ParseError("unknown rtr status '" + s + "'", 0);
}

StageRecord stage_from_json(const json &j) {
  StageRecord s;
  s.p = j.at("p").get<Index>();
  s.rtr_iterations = j.at("rtr_iterations").get<int>();
  s.rtr_status = status_from_string(j.at("rtr_status").get<std::string>());
  s.cost_start = number_from_json(j.at("cost_start"));
  s.cost_end = number_from_json(j.at("cost_end"));
  s.grad_norm = number_from_json(j.at("grad_norm"));
  s.lambda_min_S = number_from_json(j.at("lambda_min_S"));
  if (!j.at("lambda_min_hess").is_null())
    s.lambda_min_hess = number_from_json(j.at("lambda_min_hess"));
  s.cond = number_from_json(j.at("cond"));
  s.numerical_rank = j.at("numerical_rank").get<Index>();
  s.escape_taken = j.at("escape_taken").get<bool>();
  s.escape_mode = j.at("escape_mode").get<std::string>();
  s.escape_t = number_from_json(j.at("escape_t"));
  s.cost_after_escape = number_from_json(j.at("cost_after_escape"));
  return s;
}

json face_to_json(const FaceReport &f) {
  return {{"p", f.p},
          {"delta", f.delta},
          {"dim_face", f.dim_face},
          {"p_star", number_to_json(f.p_star)},
          {"upper_bound", number_to_json(f.upper_bound)},
          {"is_extreme", f.is_extreme},
          {"h_min", number_to_json(f.h_min)},
          {"h_max", number_to_json(f.h_max)}};
}

FaceReport face_from_json(const json &j) {
  FaceReport f;
  f.p = j.at("p").get<Index>();
  f.delta = j.at("delta").get<Index>();
  f.dim_face = j.at("dim_face").get<Index>();
  f.p_star = number_from_json(j.at("p_star"));
  f.upper_bound = number_from_json(j.at("upper_bound"));
  f.is_extreme = j.at("is_extreme").get<bool>();
  f.h_min = number_from_json(j.at("h_min"));
  f.h_max = number_from_json(j.at("h_max"));
  return f;
}

} // namespace

json report_to_json(const SolveReport &rep) {
  json j;
  j["m"] = rep.Y.manifold().m();
  j["d"] = rep.Y.manifold().d();
  j["p"] = rep.p;
  j["p_cap"] = rep.p_cap;
  j["kkt"] = rep.kkt;
  j["cost"] = number_to_json(rep.cost);
  j["grad_norm"] = number_to_json(rep.grad_norm);
  j["lambda_min_S"] = number_to_json(rep.lambda_min_S);
  j["kkt_threshold"] = number_to_json(rep.kkt_threshold);
  j["numerical_rank"] = rep.numerical_rank;
  j["s_rank"] = optional_to_json(rep.s_rank);
  j["strict_complementarity"] = optional_to_json(rep.strict_complementarity);
  if (rep.bounds)
    j["bounds"] = {{"upper", number_to_json(rep.bounds->upper)},
                   {"lower", number_to_json(rep.bounds->lower)},
                   {"gap", number_to_json(rep.bounds->gap)},
                   {"lambda_min", number_to_json(rep.bounds->lambda_min)}};
  else
    j["bounds"] = nullptr;
  j["face"] = rep.face ? face_to_json(*rep.face) : json(nullptr);
  j["wall_time"] = number_to_json(rep.wall_time);
  j["seed"] = rep.seed;
  j["message"] = rep.message;
  j["cost_kind"] = rep.cost_kind;
  j["convexity"] = rep.convexity;
  json stages = json::array();
  for (const StageRecord &s : rep.stages)
    stages.push_back(stage_to_json(s));
  j["stages"] = std::move(stages);
  j["Y"] = matrix_to_json(rep.Y.matrix());
  return j;
}

SolveReport report_from_json(const json &j) {
  SolveReport rep;
  try {
    const BlockSpec spec(j.at("m").get<Index>(), j.at("d").get<Index>());
    rep.p = j.at("p").get<Index>();
    rep.Y = StiefelPoint::unchecked(ManifoldSpec(spec, rep.p),
                                    matrix_from_json(j.at("Y")));
    rep.p_cap = j.at("p_cap").get<Index>();
    rep.kkt = j.at("kkt").get<bool>();
    rep.cost = number_from_json(j.at("cost"));
    rep.grad_norm = number_from_json(j.at("grad_norm"));
    rep.lambda_min_S = number_from_json(j.at("lambda_min_S"));
    rep.kkt_threshold = number_from_json(j.at("kkt_threshold"));
    rep.numerical_rank = j.at("numerical_rank").get<Index>();
    if (!j.at("s_rank").is_null())
      rep.s_rank = j.at("s_rank").get<Index>();
    if (!j.at("strict_complementarity").is_null())
      rep.strict_complementarity = j.at("strict_complementarity").get<bool>();
    if (!j.at("bounds").is_null()) {
      const json &b = j.at("bounds");
      rep.bounds = SdpBounds{number_from_json(b.at("upper")),
                             number_from_json(b.at("lower")),
                             number_from_json(b.at("gap")),
                             number_from_json(b.at("lambda_min"))};
    }
    if (!j.at("face").is_null())
      rep.face = face_from_json(j.at("face"));
    rep.wall_time = number_from_json(j.at("wall_time"));
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.message = j.at("message").get<std::string>();
    rep.cost_kind = j.at("cost_kind").get<std::string>();
    rep.convexity = j.at("convexity").get<std::string>();
    for (const json &s : j.at("stages"))
      rep.stages.push_back(stage_from_json(s));
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  }
  return rep;
}

TraceWriter::TraceWriter(std::ostream &out)
    : out_(&out), start_(std::chrono::steady_clock::now()) {
  *out_ << kTraceHeader << '\n';
}

void TraceWriter::operator()(const RtrProgress &pr) {
  const double t =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  *out_ << pr.iteration << ',' << pr.p << ',' << fmt(pr.cost) << ','
        << fmt(pr.grad_norm) << ',' << fmt(pr.radius) << ',' << fmt(t) << '\n';
}

} // namespace bdsdp
