#include "ldp/core/types.hpp"

namespace ldp {

void ActionChunk::validate() const {
    if (horizon <= 0 || action_dim <= 0) throw DomainError("ActionChunk: nonpositive shape");
    if (values.rows() != horizon || values.cols() != action_dim)
        throw DomainError("ActionChunk: values shape mismatch");
    if (static_cast<int>(pad_mask.size()) != horizon)
        throw DomainError("ActionChunk: pad_mask length mismatch");
    if (static_cast<int>(dim_valid.size()) != action_dim)
        throw DomainError("ActionChunk: dim_valid length mismatch");
    bool seen_pad = false;
    for (auto m : pad_mask) {
        if (m && seen_pad) throw DomainError("ActionChunk: pad_mask must be a prefix of real steps");
        if (!m) seen_pad = true;
    }
    for (int i = 0; i < values.rows(); ++i)
        for (int j = 0; j < values.cols(); ++j) {
            double v = values(i, j);
            if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12)
                throw DomainError("ActionChunk: value outside [-1,1]");
        }
}

}  // namespace ldp
