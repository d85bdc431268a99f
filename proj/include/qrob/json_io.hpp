#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qrob/scan.hpp"
#include "qrob/sdp.hpp"
#include "qrob/separability.hpp"
#include "qrob/tomo.hpp"

namespace qrob::io {

using nlohmann::json;

// Repo-wide matrix encoding: {"dim": d, "re": [...], "im": [...]}, row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// States add "dims"; kets are {"dims", "re", "im"} vectors.
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);  // validates the invariants
json ket_to_json(const Ket& k);
Ket ket_from_json(const json& j);

// Either a ket or a density matrix; kets are converted to projectors.
// is_pure reports which form the file used.
DensityMatrix state_or_ket_from_json(const json& j, bool* is_pure = nullptr,
                                     Ket* ket_out = nullptr);

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& j);

json robustness_result_to_json(const RobustnessResult& r);
json kink_report_to_json(const KinkReport& k);
json phase_to_json(const PhaseInterval& p);

// Debug dump of a cone program.
json problem_to_json(const sdp::Problem& p);
sdp::Problem problem_from_json(const json& j);
json cert_report_to_json(const sdp::CertReport& r);

json counts_to_json(const CountsRecord& r);
CountsRecord counts_from_json(const json& j);

// CSV writers; exact column orders fixed by the interface contract.
std::string scan_csv(const ScanResult& scan);                       // q,quantifier,model,value,dual_value,gap,status,witness_jump
std::string experiment_csv(const std::vector<ExperimentRow>& rows); // q,estimate,stderr,truth,N,seed

// Family file: {"name": ..., "dims": [...], "entries": [{"q":..., "state": {...}}, ...]}
StateFamily family_from_json(const json& j);

// Shortest-round-trip, locale-independent double formatting.
std::string fmt_double(double v);

void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
json read_json_file(const std::string& path);

}  // namespace qrob::io
