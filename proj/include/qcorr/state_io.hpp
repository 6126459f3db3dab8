#pragma once

#include "qcorr/state.hpp"

#include <string>

namespace qcorr {

// On-disk state format (JSON):
//   {
//     "dims":   [2, 2],
//     "labels": ["A", "B"],
//     "kind":   "density" | "pure",
//     "data":   [[re, im], ...]   row-major; dim*dim pairs for a density
//                                 matrix, dim pairs for a pure vector
//   }
// Loading runs the full physical validation (Hermitian, unit trace, PSD,
// or unit norm). Every declared dimension must be at least 2.
LoadedState load_state_file(const std::string& path);

std::string state_to_json(const MultipartiteState& s);
std::string state_to_json(const PureState& s);

void save_state_file(const std::string& path, const MultipartiteState& s);
void save_state_file(const std::string& path, const PureState& s);

// Named descriptor when it parses as one, otherwise a file path.
LoadedState resolve_state(const std::string& descriptor_or_path);

}  // namespace qcorr
