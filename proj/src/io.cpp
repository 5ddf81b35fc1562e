#include "qdisc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc::io {

namespace {

const Json& require_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number, got " + j.dump());
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": non-finite number");
  return x;
}

Index require_dim(const Json& doc) {
  const Json& d = require_field(doc, "dim", "document");
  if (!d.is_number_integer() || d.get<long long>() < 1) {
    throw ParseError("dim: expected a positive integer, got " + d.dump());
  }
  return static_cast<Index>(d.get<long long>());
}

void emit(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        emit(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line so matrices remain readable.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) {
        return x.is_object() || (x.is_array() && !x.empty() && x.front().is_array());
      });
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << (flat ? "" : nl);
      bool first = true;
      for (const auto& x : j) {
        if (!first) os << ',' << (flat ? (indent > 0 ? " " : "") : nl);
        first = false;
        if (!flat) os << pad;
        emit(os, x, flat ? 0 : indent, depth + 1);
      }
      os << (flat ? "" : nl) << (flat ? "" : close_pad) << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  ComplexMatrix m(rows, rows);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != rows) {
      throw ParseError(rw + ": expected a row of " + std::to_string(rows) + " entries");
    }
    for (Index c = 0; c < rows; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      const std::string zw = rw + "[" + std::to_string(c) + "]";
      if (z.is_number()) {
        m(r, c) = Complex(require_number(z, zw), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        m(r, c) = Complex(require_number(z[0], zw + "[0]"), require_number(z[1], zw + "[1]"));
      } else {
        throw ParseError(zw + ": expected [re, im], got " + z.dump());
      }
    }
  }
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Ensemble parse_ensemble(const Json& doc, Check check) {
  const Index dim = require_dim(doc);
  const Json& states = require_field(doc, "states", "document");
  if (!states.is_array() || states.empty()) throw ParseError("states: expected a non-empty array");

  std::vector<std::pair<HermitianMatrix, double>> weighted;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string where = "states[" + std::to_string(k) + "]";
    const Json& s = states[k];
    const double prior = require_number(require_field(s, "prior", where), where + ".prior");
    ComplexMatrix sigma = matrix_from_json(require_field(s, "matrix", where), where + ".matrix");
    if (sigma.rows() != dim) {
      throw ParseError(where + ".matrix: dimension " + std::to_string(sigma.rows()) +
                       " does not match dim " + std::to_string(dim));
    }
    std::string label = std::to_string(k);
    if (auto it = s.find("label"); it != s.end()) {
      if (!it->is_string()) throw ParseError(where + ".label: expected a string");
      label = it->get<std::string>();
    }
    HermitianMatrix h;
    try {
      h = HermitianMatrix(sigma);
    } catch (const NotHermitianError& ex) {
      throw ValidationError(where + ".matrix: " + ex.what());
    }
    if (check == Check::full) {
      if (prior < 0.0) throw ValidationError(where + ".prior: negative prior " + std::to_string(prior));
      const double tr = h.trace();
      if (std::abs(tr - 1.0) > 1e-9) {
        throw ValidationError(where + ".matrix: density matrix has trace " + std::to_string(tr) +
                              ", expected 1");
      }
    }
    weighted.emplace_back(std::move(h), prior);
    labels.push_back(std::move(label));
  }
  Ensemble e = Ensemble::from_priors(weighted, std::move(labels));
  if (check == Check::full) {
    const ValidationReport rep = validate(e);
    if (!rep.ok()) {
      const CheckResult& f = *rep.first_failure();
      throw ValidationError("ensemble " + f.name + " failed: " + f.detail);
    }
  }
  return e;
}

Povm parse_povm(const Json& doc, Check check) {
  const Index dim = require_dim(doc);
  const Json& elements = require_field(doc, "elements", "document");
  if (!elements.is_array() || elements.empty()) throw ParseError("elements: expected a non-empty array");
  std::vector<HermitianMatrix> ms;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const std::string where = "elements[" + std::to_string(k) + "]";
    ComplexMatrix m = matrix_from_json(require_field(elements[k], "matrix", where), where + ".matrix");
    if (m.rows() != dim) throw ParseError(where + ".matrix: dimension does not match dim");
    try {
      ms.emplace_back(m);
    } catch (const NotHermitianError& ex) {
      throw ValidationError(where + ".matrix: " + ex.what());
    }
  }
  Povm povm(std::move(ms));
  if (check == Check::full) {
    const ValidationReport rep = validate(povm);
    if (!rep.ok()) {
      const CheckResult& f = *rep.first_failure();
      throw ValidationError("POVM " + f.name + " failed: residual " + format_double(f.residual));
    }
  }
  return povm;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
}

Ensemble parse_ensemble_file(const std::filesystem::path& path, Check check) {
  const Json doc = read_json(path);
  try {
    return parse_ensemble(doc, check);
  } catch (const ParseError& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
}

Povm parse_povm_file(const std::filesystem::path& path, Check check) {
  const Json doc = read_json(path);
  try {
    return parse_povm(doc, check);
  } catch (const ParseError& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
}

Json ensemble_to_json(const Ensemble& e) {
  Json states = Json::array();
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double prior = e.prior(k);
    const ComplexMatrix sigma =
        prior > 0.0 ? ComplexMatrix(e.state(k).matrix() / prior) : ComplexMatrix(e.state(k).matrix());
    states.push_back(Json{{"label", e.label(k)}, {"prior", prior}, {"matrix", matrix_to_json(sigma)}});
  }
  return Json{{"dim", e.dim()}, {"states", std::move(states)}};
}

Json povm_to_json(const Povm& m, const Ensemble* labels_from) {
  Json elements = Json::array();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const std::string label = labels_from ? labels_from->label(k) : std::to_string(k);
    elements.push_back(Json{{"label", label}, {"matrix", matrix_to_json(m.element(k).matrix())}});
  }
  return Json{{"dim", m.dim()}, {"elements", std::move(elements)}};
}

Json certificate_to_json(const CertificateDoc& doc) {
  Json j{{"p_succ", doc.p_succ},
         {"gap_lower", doc.certificate.lower},
         {"gap_upper", doc.certificate.upper},
         {"alpha_scalar", doc.certificate.alpha_scalar},
         {"p_used", doc.certificate.p_used},
         {"dim_used", doc.certificate.dim_used},
         {"projector_rank", doc.certificate.projector_rank},
         {"t_max", doc.t_max},
         {"argmax_ell", doc.argmax_ell}};
  if (doc.termination_reason.empty()) {
    j["termination_reason"] = nullptr;
  } else {
    j["termination_reason"] = doc.termination_reason;
    j["steps"] = doc.steps;
  }
  return j;
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  return os.str();
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << dump(j) << '\n';
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "step,p_succ,t_max,ell,alpha,wall_ms\n";
  for (const StepRecord& s : trace.steps) {
    os << s.step_index << ',' << format_double(s.p_succ_after) << ',' << format_double(s.t_max)
       << ',' << s.ell << ',' << format_double(s.alpha_used) << ','
       << format_double(s.wall_time.count()) << '\n';
  }
}

}  // namespace qdisc::io
