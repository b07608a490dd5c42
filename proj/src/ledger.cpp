#include "qsm/ledger.hpp"

namespace qsm {

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::preprocess: return "preprocess";
    case Phase::block_search: return "block_search";
    case Phase::in_block: return "in_block";
    case Phase::none: break;
  }
  return "none";
}

}  // namespace qsm
