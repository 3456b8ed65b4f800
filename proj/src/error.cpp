#include "latembed/error.hpp"

namespace latembed {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "out_of_domain";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::StencilOutOfDomain: return "stencil_out_of_domain";
    case ErrorCode::DegeneratePlane: return "degenerate_plane";
    case ErrorCode::BadResolution: return "bad_resolution";
    case ErrorCode::AllPairsDegenerate: return "all_pairs_degenerate";
    case ErrorCode::EmptyLattice: return "empty_lattice";
    case ErrorCode::OutOfHull: return "out_of_hull";
    case ErrorCode::NoSolution: return "no_solution";
    case ErrorCode::Indeterminate: return "indeterminate";
    case ErrorCode::LineSearchStall: return "line_search_stall";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::UnknownKey: return "unknown_key";
    case ErrorCode::TypeMismatch: return "type_mismatch";
    case ErrorCode::MissingRequired: return "missing_required";
    case ErrorCode::ParseError: return "parse_error";
  }
  return "unknown";
}

}  // namespace latembed
