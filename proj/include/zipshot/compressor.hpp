#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zipshot/bytes.hpp"
#include "zipshot/deflate.hpp"

namespace zipshot {

enum class CodecId : uint8_t { deflate, store, custom };

// Store codec output: 4-byte length prefix + raw payload, so the length is
// 8*|x| + kStoreHeaderBits exactly and every slack reduces to separator and
// header arithmetic.
constexpr int64_t kStoreHeaderBits = 32;

// A deterministic lossless codec identity. Same codec_id + level + input
// gives the same compressed length on every machine; normality_epsilon is
// the measured slack in the normal-compressor axioms on a reference corpus.
struct CompressorProfile {
    CodecId codec_id = CodecId::deflate;
    int level = 6;
    int64_t normality_epsilon = 0;  // bits
    // Only consulted when codec_id == custom: maps payload -> compressed bytes.
    std::function<size_t(std::span<const uint8_t>)> custom_size;

    static CompressorProfile deflate_default() { return {CodecId::deflate, 6, 0, nullptr}; }
    static CompressorProfile store() { return {CodecId::store, 0, 0, nullptr}; }

    std::string describe() const {
        switch (codec_id) {
            case CodecId::deflate: return "deflate-" + std::to_string(level);
            case CodecId::store: return "store";
            case CodecId::custom: return "custom";
        }
        return "?";
    }
};

// C(x) in bits: 8 * compressed byte count.
inline int64_t compressed_length(const CompressorProfile& c, const ByteSequence& x) {
    switch (c.codec_id) {
        case CodecId::store:
            return 8 * static_cast<int64_t>(x.size()) + kStoreHeaderBits;
        case CodecId::deflate:
            return 8 * static_cast<int64_t>(deflate::compressed_size(x.bytes(), c.level));
        case CodecId::custom:
            if (!c.custom_size) throw std::invalid_argument("custom codec without size function");
            return 8 * static_cast<int64_t>(c.custom_size(x.bytes()));
    }
    throw std::logic_error("unknown codec");
}

// C(x ++ sep ++ y). The one-byte separator keeps the tail of x from gluing
// onto the head of y; its cost is absorbed into normality_epsilon.
inline int64_t pair_length(const CompressorProfile& c, const ByteSequence& x,
                           const ByteSequence& y) {
    return compressed_length(c, concat_with_separator(x, y));
}

struct NormalityReport {
    int64_t idempotency_slack = 0;   // max |C(xx) - C(x)|
    int64_t monotonicity_slack = 0;  // max max(0, C(x) - C(xy))
    int64_t symmetry_slack = 0;      // max |C(xy) - C(yx)|

    int64_t epsilon() const {
        return std::max({idempotency_slack, monotonicity_slack, symmetry_slack});
    }
};

// Empirical stand-in for the normal-compressor axioms, measured over all
// ordered pairs of the corpus. The returned epsilon is what makes the
// distance approximation meaningful for this codec.
inline NormalityReport check_normality(const CompressorProfile& c,
                                       const std::vector<ByteSequence>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    NormalityReport r;
    std::vector<int64_t> single(corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) single[i] = compressed_length(c, corpus[i]);
    for (size_t i = 0; i < corpus.size(); ++i) {
        const int64_t cxx = pair_length(c, corpus[i], corpus[i]);
        r.idempotency_slack = std::max(r.idempotency_slack, std::abs(cxx - single[i]));
        for (size_t j = 0; j < corpus.size(); ++j) {
            if (i == j) continue;
            const int64_t cxy = pair_length(c, corpus[i], corpus[j]);
            const int64_t cyx = pair_length(c, corpus[j], corpus[i]);
            r.monotonicity_slack = std::max(r.monotonicity_slack, single[i] - cxy);
            if (i < j) r.symmetry_slack = std::max(r.symmetry_slack, std::abs(cxy - cyx));
        }
    }
    r.monotonicity_slack = std::max<int64_t>(r.monotonicity_slack, 0);
    return r;
}

}  // namespace zipshot
