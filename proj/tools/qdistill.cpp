// qdistill: command-line front end for the entanglement-distillation toolkit.
//
// Subcommands: bell, state, ed, ppt, discriminate, teleport, verify.
// Exit codes: 0 success, 1 verification mismatch, 2 usage error.
// JSON output is byte-identical for identical configuration and seed.

#include <CLI11.hpp>
#include <json.hpp>

#include "qdistill/distill.hpp"
#include "qdistill/entropy.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/locc.hpp"
#include "qdistill/mixtures.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/rng.hpp"
#include "qdistill/separability.hpp"
#include "qdistill/serialize.hpp"
#include "qdistill/verify.hpp"
#include "qdistill/version.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace qdistill;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Options {
  int d = 2;
  int n = 1;
  bool fourparty = false;
  int power = 1;
  std::string kind = "four-party";
  std::string label = "0,0";
  std::string channel = "0,0";
  std::string corrections;
  std::string family;
  std::string cut;
  std::string format = "text";
  std::string out;
  std::string input;
  std::string transcript_path;
  std::uint64_t seed = 0;
  bool table = false;
  int table_n_max = 5;
  int d_max = 0;
  int n_max = 0;
  int criterion = 0;
  bool inject_perturbation = false;
  int dense_cap_override = 0;
};

void emit(const std::string& text, const std::string& out_path) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  file << body;
}

json tolerances_json() {
  json j;
  j["branch_prune_probability"] = kBranchPruneProb;
  j["dense_cap"] = dense_cap();
  j["hermitian_construct"] = kHermitianTolConstruct;
  j["hermitian_derived"] = kHermitianTolDerived;
  j["psd"] = kPsdTol;
  j["support_threshold"] = kSupportThreshold;
  return j;
}

json envelope(const std::string& command, json config, std::uint64_t seed, json report) {
  json j;
  j["command"] = command;
  j["config"] = std::move(config);
  j["report"] = std::move(report);
  j["seed"] = seed;
  j["tolerances"] = tolerances_json();
  j["version"] = kVersion;
  return j;
}

BellLabel parse_label(const std::string& text, int d, const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument(flag + " expects the form n,m");
  }
  BellLabel label{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)), d};
  validate_label(label);
  return label;
}

MesFamily parse_family(const std::string& text, int d) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int fixed = 0;
  if (colon != std::string::npos) fixed = std::stoi(text.substr(colon + 1));
  if (fixed < 0 || fixed >= d) {
    throw std::invalid_argument("--family fixed index must lie in 0..d-1");
  }
  if (kind == "shift") return MesFamily::shift(d, fixed);
  if (kind == "phase") return MesFamily::phase(d, fixed);
  throw std::invalid_argument("--family expects shift[:k] or phase[:k]");
}

std::vector<std::string> parse_cut_side(const std::string& text,
                                        const SubsystemLayout& layout) {
  std::vector<std::string> names;
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string name;
    while (std::getline(in, name, ',')) {
      if (!name.empty()) names.push_back(name);
    }
    return names;
  }
  bool single_char_names = true;
  for (const auto& party : layout.parties()) {
    if (party.size() != 1) single_char_names = false;
  }
  if (single_char_names) {
    for (char c : text) names.emplace_back(1, c);
  } else {
    names.push_back(text);
  }
  return names;
}

Cut parse_cut(const std::string& text, const SubsystemLayout& layout) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw std::invalid_argument("--cut expects the form LEFT|RIGHT, e.g. AC|BD");
  }
  Cut cut = Cut::between(parse_cut_side(text.substr(0, bar), layout),
                         parse_cut_side(text.substr(bar + 1), layout));
  cut.validate_against(layout);
  return cut;
}

StateDescriptor descriptor_from(const Options& opt) {
  if (opt.kind == "four-party") {
    std::optional<MesFamily> family;
    if (!opt.family.empty()) family = parse_family(opt.family, opt.d);
    return StateDescriptor::four_party(opt.d, family);
  }
  if (opt.kind == "full-mixture") return StateDescriptor::full_mixture(opt.d);
  if (opt.kind == "multi-copy") return StateDescriptor::multi_copy(opt.d, opt.n, opt.power);
  throw std::invalid_argument("--kind expects four-party, full-mixture, or multi-copy");
}

json transcript_events_json(const LoccTranscript& transcript) {
  json events = json::array();
  std::istringstream in(transcript_jsonl(transcript));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    events.push_back(json::parse(line));
  }
  return events;
}

void maybe_write_transcript(const Options& opt, const LoccTranscript& transcript) {
  if (!opt.transcript_path.empty()) {
    emit(transcript_jsonl(transcript), opt.transcript_path);
  }
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

std::string bits(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

// --- bell ---------------------------------------------------------------------

int run_bell(const Options& opt, bool format_given) {
  const BellLabel label = parse_label(opt.label, opt.d, "--label");
  const Ket psi = bell_state(label);
  // Default: human-readable on stdout, QSM-JSON when writing a state file.
  const bool text = format_given ? opt.format == "text" : opt.out.empty();
  if (text) {
    std::ostringstream out;
    out << "bell state (" << label.n << "," << label.m << ") in d=" << opt.d << "\n";
    for (long idx = 0; idx < psi.amps.size(); ++idx) {
      const Complex a = psi.amps(idx);
      if (std::abs(a) < 1e-15) continue;
      const auto digits = decompose_index(idx, psi.layout.dims);
      out << "  |" << digits[0] << digits[1] << ">  " << std::setprecision(12) << a.real();
      out << (a.imag() < 0 ? " - " : " + ") << std::abs(a.imag()) << "i\n";
    }
    emit(out.str(), opt.out);
  } else {
    emit(qsm_json(psi), opt.out);
  }
  return kExitOk;
}

// --- state --------------------------------------------------------------------

int run_state(const Options& opt) {
  const auto descriptor = descriptor_from(opt);
  const auto labels = descriptor.resolve_labels();
  std::string omitted;
  const auto dense = descriptor.resolve_dense(&omitted);

  if (opt.format == "text") {
    std::ostringstream out;
    out << descriptor.describe() << "\n";
    out << "  biparties: " << labels.num_biparties << ", support size: " << labels.support.size()
        << "\n";
    for (const auto& [s, p] : labels.support) {
      out << "  " << label_string_repr(s) << "  p = " << std::setprecision(12) << p << "\n";
    }
    if (dense) {
      out << "  dense dimension: " << dense->mat.rows() << "\n";
    } else {
      out << "  " << omitted << "\n";
    }
    emit(out.str(), opt.out);
    return kExitOk;
  }

  json config;
  config["d"] = opt.d;
  config["kind"] = opt.kind;
  if (opt.kind == "multi-copy") {
    config["n"] = opt.n;
    config["power"] = opt.power;
  }
  if (!opt.family.empty()) config["family"] = opt.family;
  config["format"] = opt.format;

  json report;
  report["descriptor"] = descriptor.describe();
  report["labels"] = json::parse(label_distribution_json(labels));
  if (dense) {
    report["dense"] = json::parse(qsm_json(*dense));
  } else {
    report["dense_omitted"] = omitted;
  }
  emit(envelope("state", std::move(config), opt.seed, std::move(report)).dump(2), opt.out);
  return kExitOk;
}

// --- ed -----------------------------------------------------------------------

json ed_config(const Options& opt) {
  json config;
  config["d"] = opt.d;
  if (opt.fourparty) {
    config["fourparty"] = true;
  } else {
    config["n"] = opt.n;
  }
  if (!opt.family.empty()) config["family"] = opt.family;
  config["format"] = opt.format;
  return config;
}

std::string ed_text(const DistillationReport& report) {
  std::ostringstream out;
  out << "distillation report: " << report.kind << ", d=" << report.d;
  if (report.kind != "four_party") out << ", n=" << report.n;
  out << ", seed=" << report.seed << "\n";
  if (!report.reason.empty()) out << "  reason:          " << report.reason << "\n";
  if (!report.family.empty()) out << "  family:          " << report.family << "\n";
  out << "  yield:           " << bits(report.yield_bits) << " bits from "
      << report.surviving_biparties << " surviving biparties\n";
  out << "  protocol exact:  " << yes_no(report.protocol_exact) << " ("
      << report.branches_checked << " branches)\n";
  out << "  lower bound:     " << bits(report.lower_bound_bits) << " bits\n";
  out << "  upper bound:     "
      << (report.upper_infinite ? std::string("infinite") : bits(report.upper_bound_bits) + " bits")
      << "  (candidate " << report.candidate << ")\n";
  if (report.witness) {
    out << "  support witness: " << label_string_repr(*report.witness) << "\n";
  }
  out << "  formal count:    " << bits(report.formal_count_bits) << " bits"
      << (report.halving_applied ? " (halved)" : "") << "\n";
  out << "  closed form:     " << bits(report.closed_form_bits) << " bits\n";
  out << "  agreement:       " << yes_no(report.agreement) << "\n";
  return out.str();
}

int run_ed(const Options& opt) {
  std::optional<MesFamily> family;
  if (!opt.family.empty()) family = parse_family(opt.family, opt.d);

  if (opt.table) {
    std::ostringstream out;
    out << "# qdistill " << kVersion << " ed table: d=" << opt.d << " n=1.." << opt.table_n_max
        << " seed=" << opt.seed << " dense_cap=" << dense_cap() << "\n";
    out << distillation_csv_header() << "\n";
    bool all_agree = true;
    for (int n = 1; n <= opt.table_n_max; ++n) {
      const auto report = ed_summary(opt.d, n, opt.seed, family);
      all_agree = all_agree && report.agreement;
      out << distillation_csv_row(report) << "\n";
    }
    emit(out.str(), opt.out);
    return all_agree ? kExitOk : kExitMismatch;
  }

  const auto report =
      ed_summary(opt.d, opt.fourparty ? std::nullopt : std::optional<int>(opt.n), opt.seed, family);
  if (opt.format == "json") {
    emit(envelope("ed", ed_config(opt), opt.seed, json::parse(distillation_report_json(report)))
             .dump(2),
         opt.out);
  } else if (opt.format == "csv") {
    std::ostringstream out;
    out << "# qdistill " << kVersion << " ed: d=" << opt.d << " seed=" << opt.seed
        << " dense_cap=" << dense_cap() << "\n";
    out << distillation_csv_header() << "\n" << distillation_csv_row(report) << "\n";
    emit(out.str(), opt.out);
  } else {
    emit(ed_text(report), opt.out);
  }
  return report.agreement ? kExitOk : kExitMismatch;
}

// --- ppt ----------------------------------------------------------------------

int run_ppt(const Options& opt) {
  const auto descriptor = descriptor_from(opt);
  std::string omitted;
  const auto dense = [&] {
    if (opt.kind == "four-party") return four_party_state(
        {opt.d, opt.family.empty() ? MesFamily::phase(opt.d, 0) : parse_family(opt.family, opt.d)});
    if (opt.kind == "full-mixture") return uniform_full_mixture(opt.d);
    return multi_copy_state(opt.d, opt.n);
  }();
  if (!dense.dense) {
    throw std::invalid_argument("ppt: " + dense.dense_omitted_reason);
  }
  const auto& rho = *dense.dense;

  std::vector<Cut> cuts;
  if (!opt.cut.empty()) {
    cuts.push_back(parse_cut(opt.cut, rho.layout));
  } else {
    cuts = enumerate_cuts(rho.layout);
  }

  json reports = json::array();
  std::ostringstream text;
  text << "ppt evidence for " << descriptor.describe() << "\n";
  for (const auto& cut : cuts) {
    const auto report = ppt_check(rho, cut);
    reports.push_back(json::parse(ppt_report_json(report)));
    text << "  " << cut.name() << ": " << (report.ppt ? "PPT" : "NPT") << "  (min eigenvalue "
         << std::setprecision(6) << report.min_eigenvalue << ", negativity " << report.negativity
         << (cut.balanced_two_party ? ", balanced cut" : "") << ")\n";
  }

  if (opt.format == "json") {
    json config;
    config["d"] = opt.d;
    config["kind"] = opt.kind;
    if (opt.kind == "multi-copy") config["n"] = opt.n;
    if (!opt.family.empty()) config["family"] = opt.family;
    if (!opt.cut.empty()) config["cut"] = opt.cut;
    config["format"] = opt.format;
    emit(envelope("ppt", std::move(config), opt.seed, std::move(reports)).dump(2), opt.out);
  } else {
    emit(text.str(), opt.out);
  }
  return kExitOk;
}

// --- discriminate ---------------------------------------------------------------

int run_discriminate(const Options& opt, bool two_copy) {
  const BellLabel hidden = parse_label(opt.label, opt.d, "--label");
  DiscriminationResult result;
  std::string protocol;
  if (two_copy) {
    result = discriminate_two_copy(hidden, opt.seed);
    protocol = "two-copy";
  } else {
    const MesFamily family =
        opt.family.empty() ? MesFamily::phase(opt.d, 0) : parse_family(opt.family, opt.d);
    result = discriminate_single_copy(family, hidden, opt.seed);
    protocol = "single-copy " + family.describe();
  }
  maybe_write_transcript(opt, result.transcript);

  if (opt.format == "json") {
    json config;
    config["d"] = opt.d;
    config["label"] = {hidden.n, hidden.m};
    config["protocol"] = protocol;
    if (!opt.family.empty()) config["family"] = opt.family;
    config["format"] = opt.format;
    json report;
    report["correct"] = result.correct;
    report["hidden"] = {hidden.n, hidden.m};
    report["inferred"] = {result.inferred.n, result.inferred.m};
    report["transcript"] = transcript_events_json(result.transcript);
    emit(envelope("discriminate", std::move(config), opt.seed, std::move(report)).dump(2),
         opt.out);
  } else {
    std::ostringstream out;
    out << protocol << " discrimination, d=" << opt.d << ", seed=" << opt.seed << "\n";
    out << "  hidden:   (" << hidden.n << "," << hidden.m << ")\n";
    out << "  inferred: (" << result.inferred.n << "," << result.inferred.m << ")\n";
    out << "  correct:  " << yes_no(result.correct) << "\n";
    for (const auto& event : result.transcript.events) {
      if (event.kind == TranscriptEvent::Kind::Measurement) {
        out << "  " << event.party << " measured " << event.basis << " -> " << event.outcome
            << " (p = " << std::setprecision(6) << event.probability << ")\n";
      } else {
        out << "  " << event.party << " broadcast \"" << event.message << "\"\n";
      }
    }
    emit(out.str(), opt.out);
  }
  return result.correct ? kExitOk : kExitMismatch;
}

// --- teleport --------------------------------------------------------------------

int run_teleport(const Options& opt) {
  const BellLabel channel = parse_label(opt.channel, opt.d, "--channel");
  const BellLabel corrections =
      opt.corrections.empty() ? channel : parse_label(opt.corrections, opt.d, "--corrections");

  Ket input = [&] {
    if (!opt.input.empty()) {
      std::ifstream file(opt.input, std::ios::binary);
      if (!file) throw std::invalid_argument("cannot read input state: " + opt.input);
      std::stringstream buffer;
      buffer << file.rdbuf();
      auto [amps, dims] = parse_qsm_ket(buffer.str());
      if (dims.size() != 1 || dims[0] != opt.d) {
        throw std::invalid_argument("teleport input must be a single qudit of dimension d");
      }
      return make_ket(std::move(amps), SubsystemLayout::single_qudit(dims[0]));
    }
    Rng rng(opt.seed);
    CVector amps(opt.d);
    double norm2 = 0.0;
    do {
      for (int j = 0; j < opt.d; ++j) {
        amps(j) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      }
      norm2 = amps.squaredNorm();
    } while (norm2 < 1e-6);
    amps /= std::sqrt(norm2);
    return make_ket(std::move(amps), SubsystemLayout::single_qudit(opt.d));
  }();

  const auto result = teleport(input, channel, corrections, opt.seed);
  maybe_write_transcript(opt, result.transcript);
  const bool matched = channel == corrections;
  const double fid = fidelity(result.output, input);

  if (opt.format == "json") {
    json config;
    config["channel"] = {channel.n, channel.m};
    config["corrections"] = {corrections.n, corrections.m};
    config["d"] = opt.d;
    config["format"] = opt.format;
    if (!opt.input.empty()) config["input"] = opt.input;
    json report;
    report["fidelity_with_input"] = fid;
    report["matched_corrections"] = matched;
    report["measured"] = {result.measured.n, result.measured.m};
    report["output"] = json::parse(qsm_json(result.output));
    report["transcript"] = transcript_events_json(result.transcript);
    emit(envelope("teleport", std::move(config), opt.seed, std::move(report)).dump(2), opt.out);
  } else {
    std::ostringstream out;
    out << "teleportation, d=" << opt.d << ", channel (" << channel.n << "," << channel.m
        << "), corrections for (" << corrections.n << "," << corrections.m << "), seed="
        << opt.seed << "\n";
    out << "  measured outcome: (" << result.measured.n << "," << result.measured.m << ")\n";
    out << "  fidelity with input: " << std::setprecision(12) << fid << "\n";
    if (!matched) {
      out << "  (mismatched corrections: output is the input twisted by a fixed Weyl operator)\n";
    }
    emit(out.str(), opt.out);
  }
  if (matched && fid < 1.0 - 1e-10) return kExitMismatch;
  return kExitOk;
}

// --- verify ----------------------------------------------------------------------

int run_verify(const Options& opt) {
  VerifyOptions vo;
  vo.d_max = opt.d_max;
  vo.n_max = opt.n_max;
  vo.seed = opt.seed;
  vo.inject_perturbation = opt.inject_perturbation;

  std::vector<CriterionResult> results;
  if (opt.criterion > 0) {
    results.push_back(run_criterion(opt.criterion, vo));
  } else {
    results = run_all_criteria(vo);
  }

  if (opt.format == "json") {
    json config;
    if (opt.criterion > 0) config["criterion"] = opt.criterion;
    if (opt.d_max > 0) config["d_max"] = opt.d_max;
    config["format"] = opt.format;
    config["inject_perturbation"] = opt.inject_perturbation;
    if (opt.n_max > 0) config["n_max"] = opt.n_max;
    json report = json::array();
    for (const auto& r : results) {
      json item;
      item["details"] = r.details;
      item["index"] = r.index;
      item["name"] = r.name;
      item["passed"] = r.passed;
      report.push_back(std::move(item));
    }
    emit(envelope("verify", std::move(config), opt.seed, std::move(report)).dump(2), opt.out);
  } else {
    std::ostringstream out;
    int passed = 0;
    double total = 0.0;
    for (const auto& r : results) {
      out << criterion_line(r) << "\n";
      if (r.passed) ++passed;
      total += r.runtime_seconds;
    }
    out << "verify: " << passed << "/" << results.size() << " criteria passed ("
        << std::fixed << std::setprecision(3) << total << " s total)\n";
    emit(out.str(), opt.out);
  }
  return all_passed(results) ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Bell-state mixtures in d (x) d: construction, entropy bounds, LOCC "
               "discrimination, teleportation, and distillation protocols."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--seed", opt.seed, "Random seed (echoed in every report)");
    cmd->add_option("--out", opt.out, "Write the report to a file instead of stdout");
    if (with_format) {
      cmd->add_option("--format", opt.format, "Output format")
          ->check(CLI::IsMember({"text", "json", "csv"}));
    }
    cmd->add_option("--dense-cap", opt.dense_cap_override,
                    "Override the dense-dimension cap for this run");
  };

  auto* bell = app.add_subcommand("bell", "Emit one generalized Bell state as QSM-JSON");
  bell->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  bell->add_option("--label", opt.label, "Bell label n,m");
  add_common(bell);

  auto* state = app.add_subcommand("state", "Emit a mixture in label and dense form");
  state->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  state->add_option("--kind", opt.kind, "four-party | full-mixture | multi-copy");
  state->add_option("--n", opt.n, "Copies (multi-copy)")->check(CLI::Range(1, 64));
  state->add_option("--power", opt.power, "Tensor power of the resolved form")
      ->check(CLI::Range(1, 8));
  state->add_option("--family", opt.family, "shift[:k] or phase[:k]");
  add_common(state);

  auto* ed = app.add_subcommand("ed", "Distillation bounds and protocol yield");
  ed->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  auto* ed_n = ed->add_option("--n", opt.n, "Number of copies")->check(CLI::Range(1, 64));
  ed->add_flag("--fourparty", opt.fourparty, "Four-party correlated mixture")->excludes(ed_n);
  ed->add_option("--family", opt.family, "shift[:k] or phase[:k] (four-party)");
  ed->add_flag("--table", opt.table, "CSV sweep over n = 1..n-max at this d");
  ed->add_option("--n-max", opt.table_n_max, "Upper end of the --table sweep")
      ->check(CLI::Range(1, 16));
  add_common(ed);

  auto* ppt = app.add_subcommand("ppt", "PPT / negativity evidence across party cuts");
  ppt->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  ppt->add_option("--kind", opt.kind, "four-party | full-mixture | multi-copy");
  ppt->add_option("--n", opt.n, "Copies (multi-copy)")->check(CLI::Range(1, 64));
  ppt->add_option("--family", opt.family, "shift[:k] or phase[:k]");
  ppt->add_option("--cut", opt.cut, "Single cut, e.g. AC|BD or A1,A2|B1,B2 (default: all)");
  add_common(ppt);

  auto* disc = app.add_subcommand("discriminate", "LOCC discrimination of a hidden Bell label");
  disc->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  disc->add_option("--label", opt.label, "Hidden Bell label n,m");
  disc->add_option("--family", opt.family, "Family for the single-copy protocol");
  bool two_copy = false;
  disc->add_flag("--two-copy", two_copy, "Two-copy protocol (any of the d^2 labels)");
  disc->add_option("--transcript", opt.transcript_path, "Write the transcript as JSONL");
  add_common(disc);

  auto* tele = app.add_subcommand("teleport", "Teleport a qudit through a Bell channel");
  tele->add_option("--d", opt.d, "Qudit dimension")->check(CLI::Range(2, 1 << 12));
  tele->add_option("--channel", opt.channel, "Channel Bell label n,m");
  tele->add_option("--corrections", opt.corrections,
                   "Label the receiver corrects for (default: the channel label)");
  tele->add_option("--input", opt.input, "QSM-JSON ket file (default: seeded random state)");
  tele->add_option("--transcript", opt.transcript_path, "Write the transcript as JSONL");
  add_common(tele);

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria grid");
  verify->add_option("--d-max", opt.d_max, "Clamp every dimension grid")
      ->check(CLI::Range(2, 1 << 12));
  verify->add_option("--n-max", opt.n_max, "Clamp every copy-count grid")
      ->check(CLI::Range(1, 64));
  verify->add_option("--criterion", opt.criterion, "Run a single criterion by index")
      ->check(CLI::Range(1, criterion_count()));
  verify->add_flag("--inject-perturbation", opt.inject_perturbation,
                   "Sensitivity probe: flip one Bell amplitude by 1e-3");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (opt.dense_cap_override > 0) {
    setenv("QDISTILL_DENSE_CAP", std::to_string(opt.dense_cap_override).c_str(), 1);
  }

  try {
    if (bell->parsed()) return run_bell(opt, bell->get_option("--format")->count() > 0);
    if (state->parsed()) return run_state(opt);
    if (ed->parsed()) return run_ed(opt);
    if (ppt->parsed()) return run_ppt(opt);
    if (disc->parsed()) return run_discriminate(opt, two_copy);
    if (tele->parsed()) return run_teleport(opt);
    if (verify->parsed()) return run_verify(opt);
  } catch (const std::exception& e) {
    std::cerr << "qdistill: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
