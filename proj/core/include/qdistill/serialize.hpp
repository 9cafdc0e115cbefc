#pragma once
//
// JSON serialization of every externally visible object.  The public surface
// is string-based so that consumers of the installed library do not inherit a
// JSON dependency; the strings are stable: identical inputs serialize to
// identical bytes.
//
// Matrix/ket exchange format ("QSM-JSON"): an object with
//   dims    - per-qudit dimensions
//   entries - [re, im] pairs; length prod(dims) for kets,
//             prod(dims)^2 (row-major) for operators.
// Infinite entropy values serialize as the string "infinite".

#include "qdistill/distill.hpp"
#include "qdistill/entropy.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/locc.hpp"
#include "qdistill/mixtures.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/separability.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qdistill {

std::string qsm_json(const Ket& ket);
std::string qsm_json(const DensityOperator& rho);
std::string qsm_json(const Matrix& m, const std::vector<int>& dims);

/// Parses QSM-JSON with prod(dims) entries into amplitudes + dims.
std::pair<CVector, std::vector<int>> parse_qsm_ket(const std::string& text);
/// Parses QSM-JSON with prod(dims)^2 entries into a matrix + dims.
std::pair<Matrix, std::vector<int>> parse_qsm_matrix(const std::string& text);

std::string label_distribution_json(const LabelDistribution& dist);
LabelDistribution parse_label_distribution(const std::string& text);

std::string entropy_result_json(const EntropyResult& result);

std::string ppt_report_json(const PptReport& report);

/// JSON lines: one header line carrying the seed, then one event per line.
std::string transcript_jsonl(const LoccTranscript& transcript);

std::string er_candidate_report_json(const ErCandidateReport& report);

std::string distillation_report_json(const DistillationReport& report);
std::string distillation_csv_header();
std::string distillation_csv_row(const DistillationReport& report);

}  // namespace qdistill
