#include "qdistill/serialize.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace qdistill {

using nlohmann::json;

namespace {

json entries_of(const CVector& v) {
  json entries = json::array();
  for (long i = 0; i < v.size(); ++i) {
    entries.push_back(json::array({v(i).real(), v(i).imag()}));
  }
  return entries;
}

json entries_of(const Matrix& m) {
  json entries = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      entries.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return entries;
}

long dims_product(const std::vector<int>& dims) {
  long n = 1;
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("QSM-JSON: dims entries must be >= 2");
    n *= d;
  }
  return n;
}

json parse_object(const std::string& text, const char* where) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument(std::string(where) + ": malformed JSON");
  }
  return j;
}

std::vector<int> parse_dims(const json& j, const char* where) {
  if (!j.contains("dims") || !j["dims"].is_array()) {
    throw std::invalid_argument(std::string(where) + ": missing dims");
  }
  std::vector<int> dims;
  for (const auto& d : j["dims"]) dims.push_back(d.get<int>());
  return dims;
}

std::vector<Complex> parse_entries(const json& j, const char* where) {
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw std::invalid_argument(std::string(where) + ": missing entries");
  }
  std::vector<Complex> out;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument(std::string(where) + ": entries must be [re, im] pairs");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace

std::string qsm_json(const Ket& ket) {
  json j;
  j["dims"] = ket.layout.dims;
  j["entries"] = entries_of(ket.amps);
  return j.dump();
}

std::string qsm_json(const DensityOperator& rho) {
  json j;
  j["dims"] = rho.layout.dims;
  j["entries"] = entries_of(rho.mat);
  return j.dump();
}

std::string qsm_json(const Matrix& m, const std::vector<int>& dims) {
  const long n = dims_product(dims);
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument("qsm_json: matrix dimension does not match dims");
  }
  json j;
  j["dims"] = dims;
  j["entries"] = entries_of(m);
  return j.dump();
}

std::pair<CVector, std::vector<int>> parse_qsm_ket(const std::string& text) {
  const json j = parse_object(text, "parse_qsm_ket");
  const auto dims = parse_dims(j, "parse_qsm_ket");
  const auto entries = parse_entries(j, "parse_qsm_ket");
  const long n = dims_product(dims);
  if (static_cast<long>(entries.size()) != n) {
    throw std::invalid_argument("parse_qsm_ket: expected prod(dims) entries");
  }
  CVector v(n);
  for (long i = 0; i < n; ++i) v(i) = entries[i];
  return {std::move(v), dims};
}

std::pair<Matrix, std::vector<int>> parse_qsm_matrix(const std::string& text) {
  const json j = parse_object(text, "parse_qsm_matrix");
  const auto dims = parse_dims(j, "parse_qsm_matrix");
  const auto entries = parse_entries(j, "parse_qsm_matrix");
  const long n = dims_product(dims);
  if (static_cast<long>(entries.size()) != n * n) {
    throw std::invalid_argument("parse_qsm_matrix: expected prod(dims)^2 entries");
  }
  Matrix m(n, n);
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) m(r, c) = entries[r * n + c];
  }
  return {std::move(m), dims};
}

std::string label_distribution_json(const LabelDistribution& dist) {
  json j;
  j["d"] = dist.d;
  j["biparties"] = dist.num_biparties;
  json support = json::array();
  for (const auto& [s, p] : dist.support) {
    json labels = json::array();
    for (const auto& lab : s) labels.push_back(json::array({lab.n, lab.m}));
    support.push_back(json{{"labels", labels}, {"p", p}});
  }
  j["support"] = support;
  return j.dump();
}

LabelDistribution parse_label_distribution(const std::string& text) {
  const json j = parse_object(text, "parse_label_distribution");
  LabelDistribution out;
  out.d = j.at("d").get<int>();
  out.num_biparties = j.at("biparties").get<int>();
  for (const auto& item : j.at("support")) {
    LabelString s;
    for (const auto& lab : item.at("labels")) {
      s.push_back({lab.at(0).get<int>(), lab.at(1).get<int>(), out.d});
    }
    out.support[std::move(s)] = item.at("p").get<double>();
  }
  out.validate();
  return out;
}

namespace {

json entropy_result_to_json(const EntropyResult& result) {
  json j;
  if (result.infinite) {
    j["value_bits"] = "infinite";
  } else {
    j["value_bits"] = result.value_bits;
  }
  j["method"] = result.method == EntropyResult::Method::Dense ? "dense" : "label";
  j["support_contained"] = result.support_contained;
  return j;
}

json label_string_to_json(const LabelString& s) {
  json labels = json::array();
  for (const auto& lab : s) labels.push_back(json::array({lab.n, lab.m}));
  return labels;
}

}  // namespace

std::string entropy_result_json(const EntropyResult& result) {
  return entropy_result_to_json(result).dump();
}

std::string ppt_report_json(const PptReport& report) {
  json j;
  j["cut"] = report.cut.name();
  j["min_pt_eig"] = report.min_eigenvalue;
  j["verdict"] = report.ppt ? "PPT" : "NPT";
  j["negativity"] = report.negativity;
  return j.dump();
}

std::string transcript_jsonl(const LoccTranscript& transcript) {
  std::ostringstream out;
  json header;
  header["type"] = "header";
  header["seed"] = transcript.seed;
  header["events"] = transcript.events.size();
  out << header.dump() << "\n";
  for (const auto& e : transcript.events) {
    json j;
    if (e.kind == TranscriptEvent::Kind::Measurement) {
      j["type"] = "measurement";
      j["party"] = e.party;
      j["basis"] = e.basis;
      j["outcome"] = e.outcome;
      j["probability"] = e.probability;
      j["born"] = e.outcome_probabilities;
    } else {
      j["type"] = "broadcast";
      j["party"] = e.party;
      j["message"] = e.message;
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string er_candidate_report_json(const ErCandidateReport& report) {
  json j;
  j["target"] = report.target;
  j["candidate"] = report.candidate;
  j["kl"] = entropy_result_to_json(report.kl);
  j["formal_count_raw_bits"] = report.formal_count_raw_bits;
  j["halving_applied"] = report.halving_applied;
  if (report.bound_infinite) {
    j["bound_bits"] = "infinite";
  } else {
    j["bound_bits"] = report.bound_bits;
  }
  j["formal_count_bits"] = report.formal_count_bits;
  j["method"] = report.method;
  if (report.witness) j["witness"] = label_string_to_json(*report.witness);
  return j.dump();
}

std::string distillation_report_json(const DistillationReport& report) {
  json j;
  j["kind"] = report.kind;
  j["d"] = report.d;
  j["n"] = report.n;
  j["seed"] = report.seed;
  j["yield_bits"] = report.yield_bits;
  j["surviving_biparties"] = report.surviving_biparties;
  j["per_biparty_fidelity"] = report.per_biparty_fidelity;
  j["protocol_exact"] = report.protocol_exact;
  j["branches_checked"] = report.branches_checked;
  j["candidate"] = report.candidate;
  if (report.upper_infinite) {
    j["upper_bound_bits"] = "infinite";
  } else {
    j["upper_bound_bits"] = report.upper_bound_bits;
  }
  j["halving_applied"] = report.halving_applied;
  j["formal_count_bits"] = report.formal_count_bits;
  j["lower_bound_bits"] = report.lower_bound_bits;
  j["closed_form_bits"] = report.closed_form_bits;
  j["agreement"] = report.agreement;
  if (!report.reason.empty()) j["reason"] = report.reason;
  if (!report.family.empty()) j["family"] = report.family;
  if (report.witness) j["witness"] = label_string_to_json(*report.witness);
  return j.dump();
}

std::string distillation_csv_header() {
  return "d,n,lower_bits,upper_bits,formal_bits,closed_form_bits,agreement";
}

std::string distillation_csv_row(const DistillationReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << report.d << "," << report.n << "," << report.lower_bound_bits << ",";
  if (report.upper_infinite) {
    out << "infinite";
  } else {
    out << report.upper_bound_bits;
  }
  out << "," << report.formal_count_bits << "," << report.closed_form_bits << ","
      << (report.agreement ? "true" : "false");
  return out.str();
}

}  // namespace qdistill
