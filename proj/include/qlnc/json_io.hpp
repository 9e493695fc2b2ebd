#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "qlnc/montecarlo.hpp"

namespace qlnc {

/// All emitted JSON keeps insertion order so reruns are byte-identical.
using json = nlohmann::ordered_json;

json field_to_json(const FieldCtxPtr& cx);
/// {"p": int, "t": int, "alpha": int} with optional explicit "base_poly"
/// (t+1 ints, lowest power first) and "ext_poly" (alpha+1 entries, each an
/// int or an array of t ints).
FieldCtxPtr field_from_json(const json& j);

/// Single int when the element is one word wide, otherwise the flat
/// coordinate array (lowest power first).
json elem_to_json(const FieldCtxPtr& cx, const FieldElem& x);
FieldElem elem_from_json(const FieldCtxPtr& cx, Level lv, const json& j);

/// Row-major array of rows; entries per elem_to_json.
json mat_to_json(const Mat& M);
Mat mat_from_json(const FieldCtxPtr& cx, Level lv, const json& j);

json network_to_json(const NetworkSpec& spec);
/// {"field": {...}, "pairs": [...], "nodes": [{"wires": [...], "matrix":
/// [[...]]}]}. A "transfer" matrix may replace "nodes": it becomes the single
/// node acting on all wires.
NetworkSpec network_from_json(const json& j);
NetworkSpec load_network(const std::string& path);

json config_to_json(const CodeConfig& cfg);

json report_to_json(const FieldCtxPtr& cx, const CodeConfig& cfg, const TrialReport& r);
std::string report_csv_header();
std::string report_csv_row(const FieldCtxPtr& cx, const CodeConfig& cfg, const TrialReport& r);

/// Frozen cross-language test vector: everything needed to replay one
/// encode/decode round.
json codec_vector_json(uint64_t seed, const FieldCtxPtr& cx, const CodeConfig& cfg,
                       const CodeRandomness& rnd, const BitBranch& branch, const Mat& codeword,
                       const DecodeOutcome& outcome);
json codec_vector_json(uint64_t seed, const FieldCtxPtr& cx, const CodeConfig& cfg,
                       const CodeRandomness& rnd, const PhaseBranch& branch, const Mat& codeword,
                       const DecodeOutcome& outcome);

std::string solve_status_name(SolveStatus s);

}  // namespace qlnc
