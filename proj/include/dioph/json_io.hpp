#pragma once

#include <string>

#include <json.hpp>

#include "dioph/bestapprox.hpp"
#include "dioph/cantor.hpp"
#include "dioph/dimension.hpp"
#include "dioph/exponents.hpp"
#include "dioph/lattice.hpp"

namespace dioph::json_io {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kArtifactVersion = 1;

// Every numeric goes through exact strings: integers and rationals as
// canonical "p/q" text, interval endpoints as {"lo", "hi"} pairs. Decimal
// mirrors (outward-rounded, deterministic) ride along for human reading.
ordered_json ival(const Interval& x);
Interval ival_from(const ordered_json& j);
ordered_json ival_dec(const Interval& x);

ordered_json seq_to_json(const BestApproxSequence& seq);
BestApproxSequence seq_from_json(const ordered_json& j);

ordered_json tree_to_json(const CantorTree& tree);
CantorTree tree_from_json(const ordered_json& j);

ordered_json estimate_to_json(const ExponentEstimate& e);
ordered_json transfer_to_json(const TransferReport& r);
ordered_json lattice_to_json(const TorusLattice& L);
ordered_json membership_to_json(const MembershipReport& r);
ordered_json structure_to_json(const StructureReport& r);
ordered_json lemma2_to_json(const Lemma2Report& r);
ordered_json massbound_to_json(const MassBound& b);
ordered_json dimension_to_json(const DimensionReport& rep, const mpq_class& s,
                               const mpq_class& v);

// Canonical byte form: two-space indent plus trailing newline, so identical
// structures always hash identically.
std::string dump(const ordered_json& j);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);
ordered_json load_json(const std::string& path);

} // namespace dioph::json_io
