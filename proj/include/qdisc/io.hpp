#pragma once

// On-disk formats. Complex entries are [re, im] pairs; matrices are arrays
// of rows. Floating-point output uses 17 significant digits.
//
// Ensemble: {"dim": d, "states": [{"label": s, "prior": p, "matrix": σ}]}
//   σ is the unit-trace density matrix; the loaded state is p·σ.
// POVM:     {"dim": d, "elements": [{"label": s, "matrix": M}]}

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qdisc/iteration.hpp"
#include "qdisc/model.hpp"
#include "qdisc/optimality.hpp"

namespace qdisc::io {

using Json = nlohmann::ordered_json;

enum class Check { structure_only, full };

/// Throws ParseError on malformed documents (with the offending field path)
/// and, under Check::full, ValidationError when the ensemble violates its
/// invariants.
Ensemble parse_ensemble(const Json& doc, Check check = Check::full);
Ensemble parse_ensemble_file(const std::filesystem::path& path, Check check = Check::full);

Povm parse_povm(const Json& doc, Check check = Check::full);
Povm parse_povm_file(const std::filesystem::path& path, Check check = Check::full);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);

Json ensemble_to_json(const Ensemble& e);
Json povm_to_json(const Povm& m, const Ensemble* labels_from = nullptr);

struct CertificateDoc {
  double p_succ = 0.0;
  GapCertificate certificate;
  double t_max = 0.0;
  std::size_t argmax_ell = 0;
  /// Empty for certify runs.
  std::string termination_reason;
  std::size_t steps = 0;
};
Json certificate_to_json(const CertificateDoc& doc);

/// Serializes with every float printed as %.17g.
std::string dump(const Json& j, int indent = 2);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// step,p_succ,t_max,ell,alpha,wall_ms — one row per step; p_succ is the
/// value after the step, t_max the residual that drove it.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

std::string format_double(double x);

}  // namespace qdisc::io
