#pragma once

// Sparse SDPA (".dat-s") export and import in the convention
//   maximize tr(C X)  subject to  tr(A_k X) = a_k,  X PSD (block diagonal).
// Block 1 is the Gram matrix; free scalars w_k = w+_k - w-_k occupy a diagonal
// block of size 2q (pair k at diagonal positions 2k-1, 2k); inequality rows get
// a diagonal slack block. Diagonal blocks are written with negative sizes.

#include <string>

#include "admmlab/sdp.hpp"

namespace admmlab {

std::string write_sdpa(const SdpProblem& sdp);
// Throws IoError when the file cannot be written.
void export_sdpa(const SdpProblem& sdp, const std::string& path);

// Inverse of write_sdpa. Names and labels are not stored in the format and
// come back generic. Throws InvalidInput on malformed text.
SdpProblem read_sdpa(const std::string& text);

}  // namespace admmlab
