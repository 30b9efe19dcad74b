#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

// Self-contained RFC 1951 encoder. The library never calls a system zlib:
// compressed lengths feed distance computations, so the encoder behavior is
// pinned here and identical on every platform. Raw stream only, no
// zlib/gzip framing.
namespace zipshot::deflate {

namespace detail {

constexpr int kMinMatch = 3;
constexpr int kMaxMatch = 258;
constexpr int kWindowSize = 32768;
constexpr int kTooFar = 4096;
constexpr int kHashBits = 15;
constexpr int kHashSize = 1 << kHashBits;
constexpr int kBlockTokens = 16384;
constexpr int kNumLitCodes = 286;
constexpr int kNumDistCodes = 30;
constexpr int kNumClCodes = 19;

struct LevelParams {
    unsigned good, lazy, nice, chain;
};

// Match-finder effort table indexed by level 1..9.
inline LevelParams level_params(int level) {
    static constexpr LevelParams table[10] = {
        {0, 0, 0, 0},        // unused (level 0 is the store codec)
        {4, 4, 8, 4},        {4, 5, 16, 8},    {4, 6, 32, 32},
        {4, 4, 16, 16},      {8, 16, 32, 32},  {8, 16, 128, 128},
        {8, 32, 128, 256},   {32, 128, 258, 1024}, {32, 258, 258, 4096},
    };
    return table[std::clamp(level, 1, 9)];
}

// Length code 257+i: base match length and extra bits.
constexpr uint16_t kLenBase[29] = {3,  4,  5,  6,  7,  8,  9,  10, 11,  13,
                                   15, 17, 19, 23, 27, 31, 35, 43, 51,  59,
                                   67, 83, 99, 115, 131, 163, 195, 227, 258};
constexpr uint8_t kLenExtra[29] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                                   2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};

constexpr uint16_t kDistBase[30] = {
    1,    2,    3,    4,    5,    7,     9,     13,    17,   25,
    33,   49,   65,   97,   129,  193,   257,   385,   513,  769,
    1025, 1537, 2049, 3073, 4097, 6145,  8193,  12289, 16385, 24577};
constexpr uint8_t kDistExtra[30] = {0, 0, 0,  0,  1,  1,  2,  2,  3,  3,
                                    4, 4, 5,  5,  6,  6,  7,  7,  8,  8,
                                    9, 9, 10, 10, 11, 11, 12, 12, 13, 13};

// Order in which code-length-code lengths are stored in a dynamic header.
constexpr uint8_t kClOrder[19] = {16, 17, 18, 0, 8,  7, 9,  6, 10, 5,
                                  11, 4,  12, 3, 13, 2, 14, 1, 15};

struct LenCodeTables {
    std::array<uint8_t, 256> code;  // match length - 3 -> length code - 257
    std::array<uint16_t, 512> dist; // small/large distance -> distance code
};

inline const LenCodeTables& len_code_tables() {
    static const LenCodeTables t = [] {
        LenCodeTables t{};
        for (int c = 0; c < 29; ++c) {
            int hi = (c < 28) ? kLenBase[c + 1] : kLenBase[28] + 1;
            for (int l = kLenBase[c]; l < hi && l <= kMaxMatch; ++l)
                t.code[l - kMinMatch] = static_cast<uint8_t>(c);
        }
        t.code[kMaxMatch - kMinMatch] = 28;
        // dist[0..255]  : codes for distances 1..256
        // dist[256..511]: codes for distances 257..32768, indexed by (d-1)>>7
        for (int c = 0; c < 30; ++c) {
            int hi = (c < 29) ? kDistBase[c + 1] : kWindowSize + 1;
            for (int d = kDistBase[c]; d < hi; ++d) {
                if (d <= 256) t.dist[d - 1] = static_cast<uint16_t>(c);
                else t.dist[256 + ((d - 1) >> 7)] = static_cast<uint16_t>(c);
            }
        }
        return t;
    }();
    return t;
}

inline int length_code(int len) { return 257 + len_code_tables().code[len - kMinMatch]; }
inline int dist_code(int dist) {
    const auto& t = len_code_tables();
    return dist <= 256 ? t.dist[dist - 1] : t.dist[256 + ((dist - 1) >> 7)];
}

class BitWriter {
public:
    void put(uint32_t bits, int count) {
        acc_ |= static_cast<uint64_t>(bits) << filled_;
        filled_ += count;
        while (filled_ >= 8) {
            out_.push_back(static_cast<uint8_t>(acc_));
            acc_ >>= 8;
            filled_ -= 8;
        }
    }

    void align_to_byte() {
        if (filled_ > 0) put(0, 8 - filled_);
    }

    void put_bytes(const uint8_t* p, size_t n) {
        assert(filled_ == 0);
        out_.insert(out_.end(), p, p + n);
    }

    size_t bit_position() const { return out_.size() * 8 + filled_; }

    std::vector<uint8_t> finish() {
        align_to_byte();
        return std::move(out_);
    }

private:
    std::vector<uint8_t> out_;
    uint64_t acc_ = 0;
    int filled_ = 0;
};

struct HuffCode {
    uint16_t bits = 0;  // bit-reversed, ready for LSB-first emission
    uint8_t len = 0;
};

inline uint16_t reverse_bits(uint16_t v, int n) {
    uint16_t r = 0;
    for (int i = 0; i < n; ++i) r = static_cast<uint16_t>((r << 1) | ((v >> i) & 1));
    return r;
}

// Optimal length-limited code lengths via package-merge. Ties are broken by
// symbol index so the result is identical on every platform.
inline std::vector<uint8_t> limited_code_lengths(std::span<const uint32_t> freq, int max_len) {
    const int n = static_cast<int>(freq.size());
    std::vector<uint8_t> lens(n, 0);
    std::vector<int> active;
    for (int s = 0; s < n; ++s)
        if (freq[s] > 0) active.push_back(s);
    if (active.empty()) return lens;
    if (active.size() == 1) {
        lens[active[0]] = 1;
        return lens;
    }

    struct Item {
        uint64_t weight;
        int32_t sym;          // >= 0: leaf
        int32_t left, right;  // indices into the previous level when sym < 0
    };
    std::vector<Item> leaves;
    leaves.reserve(active.size());
    for (int s : active) leaves.push_back({freq[s], s, -1, -1});
    std::sort(leaves.begin(), leaves.end(), [](const Item& a, const Item& b) {
        return a.weight != b.weight ? a.weight < b.weight : a.sym < b.sym;
    });

    std::vector<std::vector<Item>> levels(max_len);
    levels[0] = leaves;
    for (int l = 1; l < max_len; ++l) {
        const auto& prev = levels[l - 1];
        std::vector<Item> merged;
        merged.reserve(leaves.size() + prev.size() / 2);
        size_t li = 0, pi = 0;
        const size_t npkg = prev.size() / 2;
        while (li < leaves.size() || pi < npkg) {
            uint64_t pw = pi < npkg ? prev[2 * pi].weight + prev[2 * pi + 1].weight : UINT64_MAX;
            if (li < leaves.size() && leaves[li].weight <= pw) {
                merged.push_back(leaves[li++]);
            } else {
                merged.push_back({pw, -1, static_cast<int32_t>(2 * pi),
                                  static_cast<int32_t>(2 * pi + 1)});
                ++pi;
            }
        }
        levels[l] = std::move(merged);
    }

    // Expand the first 2(m-1) items of the deepest list; each leaf occurrence
    // adds one to its symbol's code length.
    const size_t take = 2 * (active.size() - 1);
    std::vector<std::pair<int, int32_t>> stack;  // (level, index)
    for (size_t i = 0; i < take; ++i) stack.push_back({max_len - 1, static_cast<int32_t>(i)});
    while (!stack.empty()) {
        auto [lvl, idx] = stack.back();
        stack.pop_back();
        const Item& it = levels[lvl][idx];
        if (it.sym >= 0) {
            ++lens[it.sym];
        } else {
            stack.push_back({lvl - 1, it.left});
            stack.push_back({lvl - 1, it.right});
        }
    }
    return lens;
}

inline std::vector<HuffCode> canonical_codes(std::span<const uint8_t> lens) {
    std::vector<HuffCode> codes(lens.size());
    std::array<uint16_t, 16> count{};
    for (uint8_t l : lens)
        if (l) ++count[l];
    std::array<uint16_t, 16> next{};
    uint16_t code = 0;
    for (int l = 1; l <= 15; ++l) {
        code = static_cast<uint16_t>((code + count[l - 1]) << 1);
        next[l] = code;
    }
    for (size_t s = 0; s < lens.size(); ++s) {
        if (lens[s]) {
            codes[s].len = lens[s];
            codes[s].bits = reverse_bits(next[lens[s]]++, lens[s]);
        }
    }
    return codes;
}

// Code-length alphabet run; extra < 0 means a plain length symbol.
struct ClSym {
    uint8_t sym;
    int16_t extra;
};

inline void rle_code_lengths(std::span<const uint8_t> lens, std::vector<ClSym>& out) {
    size_t i = 0;
    while (i < lens.size()) {
        const uint8_t len = lens[i];
        size_t run = 1;
        while (i + run < lens.size() && lens[i + run] == len) ++run;
        i += run;
        if (len == 0) {
            while (run >= 11) {
                size_t j = std::min<size_t>(run, 138);
                out.push_back({18, static_cast<int16_t>(j - 11)});
                run -= j;
            }
            if (run >= 3) {
                out.push_back({17, static_cast<int16_t>(run - 3)});
                run = 0;
            }
            while (run--) out.push_back({0, -1});
        } else {
            out.push_back({len, -1});
            --run;
            while (run >= 3) {
                size_t j = std::min<size_t>(run, 6);
                out.push_back({16, static_cast<int16_t>(j - 3)});
                run -= j;
            }
            while (run--) out.push_back({len, -1});
        }
    }
}

struct Token {
    uint16_t dist;        // 0: literal
    uint16_t len_or_lit;  // literal byte or match length
};

class Encoder {
public:
    Encoder(std::span<const uint8_t> input, int level)
        : in_(input), params_(level_params(level)), greedy_(level < 4) {
        head_.assign(kHashSize, -1);
        prev_.assign(kWindowSize, -1);
        lit_freq_.fill(0);
        dist_freq_.fill(0);
        tokens_.reserve(kBlockTokens);
    }

    std::vector<uint8_t> run() {
        if (greedy_) deflate_fast();
        else deflate_lazy();
        flush_block(true);
        return writer_.finish();
    }

private:
    void insert(size_t pos) {
        if (pos + kMinMatch > in_.size()) return;
        const int h = hash_at(pos);
        prev_[pos & (kWindowSize - 1)] = head_[h];
        head_[h] = static_cast<int64_t>(pos);
    }

    int hash_at(size_t pos) const {
        uint32_t w = static_cast<uint32_t>(in_[pos]) |
                     (static_cast<uint32_t>(in_[pos + 1]) << 8) |
                     (static_cast<uint32_t>(in_[pos + 2]) << 16);
        return static_cast<int>((w * 2654435761u) >> (32 - kHashBits));
    }

    // Longest match at pos that is strictly longer than best_so_far.
    std::pair<int, int> longest_match(size_t pos, int64_t cand, int best_so_far) {
        const int max_len = static_cast<int>(std::min<size_t>(kMaxMatch, in_.size() - pos));
        const int nice = static_cast<int>(std::min<unsigned>(params_.nice, max_len));
        unsigned chain = params_.chain;
        if (best_so_far >= static_cast<int>(params_.good)) chain >>= 2;
        const int64_t limit =
            pos > static_cast<size_t>(kWindowSize) ? static_cast<int64_t>(pos) - kWindowSize : 0;

        int best_len = best_so_far;
        int best_dist = 0;
        const uint8_t* cur = in_.data() + pos;
        while (cand >= limit && chain-- > 0) {
            const uint8_t* match = in_.data() + cand;
            // quick tail check before a full compare
            if (best_len < max_len && match[best_len] == cur[best_len] &&
                match[0] == cur[0] && match[1] == cur[1]) {
                int len = 2;
                while (len < max_len && match[len] == cur[len]) ++len;
                if (len > best_len) {
                    best_len = len;
                    best_dist = static_cast<int>(pos - cand);
                    if (len >= nice) break;
                }
            }
            cand = prev_[cand & (kWindowSize - 1)];
        }
        if (best_dist == 0) return {0, 0};
        return {best_len, best_dist};
    }

    std::pair<int, int> find_match(size_t pos, int best_so_far) {
        if (pos + kMinMatch > in_.size()) return {0, 0};
        const int64_t cand = head_[hash_at(pos)];
        if (cand < 0) return {0, 0};
        auto [len, dist] = longest_match(pos, cand, best_so_far);
        if (len == kMinMatch && dist > kTooFar) return {0, 0};
        return {len, dist};
    }

    void deflate_fast() {
        size_t pos = 0;
        while (pos < in_.size()) {
            auto [len, dist] = find_match(pos, kMinMatch - 1);
            insert(pos);
            if (len >= kMinMatch) {
                emit_match(len, dist);
                for (size_t k = pos + 1; k < pos + static_cast<size_t>(len); ++k) insert(k);
                pos += static_cast<size_t>(len);
            } else {
                emit_literal(in_[pos]);
                ++pos;
            }
        }
    }

    void deflate_lazy() {
        size_t pos = 0;
        int prev_len = 0, prev_dist = 0;
        bool match_available = false;
        while (pos < in_.size()) {
            int cur_len = 0, cur_dist = 0;
            if (prev_len < static_cast<int>(params_.lazy)) {
                std::tie(cur_len, cur_dist) = find_match(pos, std::max(prev_len, kMinMatch - 1));
            }
            insert(pos);
            if (prev_len >= kMinMatch && cur_len <= prev_len) {
                // previous match wins; it started at pos-1
                emit_match(prev_len, prev_dist);
                const size_t match_end = pos - 1 + static_cast<size_t>(prev_len);
                for (size_t k = pos + 1; k < match_end; ++k) insert(k);
                pos = match_end;
                prev_len = 0;
                match_available = false;
            } else {
                if (match_available) emit_literal(in_[pos - 1]);
                match_available = true;
                prev_len = cur_len;
                prev_dist = cur_dist;
                ++pos;
            }
        }
        if (match_available) emit_literal(in_.back());
    }

    void emit_literal(uint8_t lit) {
        tokens_.push_back({0, lit});
        ++lit_freq_[lit];
        block_raw_len_ += 1;
        if (tokens_.size() >= kBlockTokens) flush_block(false);
    }

    void emit_match(int len, int dist) {
        tokens_.push_back({static_cast<uint16_t>(dist), static_cast<uint16_t>(len)});
        ++lit_freq_[length_code(len)];
        ++dist_freq_[dist_code(dist)];
        extra_bits_ += kLenExtra[length_code(len) - 257] + kDistExtra[dist_code(dist)];
        block_raw_len_ += static_cast<size_t>(len);
        if (tokens_.size() >= kBlockTokens) flush_block(false);
    }

    // Codes with fewer than two used symbols are padded so every emitted tree
    // is complete; decoders expect this shape.
    static void ensure_two_symbols(std::vector<uint8_t>& lens) {
        int used = 0;
        for (uint8_t l : lens) used += l != 0;
        for (size_t s = 0; s < lens.size() && used < 2; ++s) {
            if (lens[s] == 0) {
                lens[s] = 1;
                ++used;
            } else if (lens[s] > 1) {
                lens[s] = 1;
            }
        }
    }

    struct DynamicPlan {
        std::vector<uint8_t> lit_lens, dist_lens, cl_lens;
        std::vector<ClSym> cl_syms;
        int hlit = 0, hdist = 0, hclen = 0;
        size_t header_bits = 0;
        size_t body_bits = 0;
    };

    DynamicPlan plan_dynamic() {
        DynamicPlan p;
        ++lit_freq_[256];  // end-of-block participates in the tree
        p.lit_lens = limited_code_lengths({lit_freq_.data(), lit_freq_.size()}, 15);
        --lit_freq_[256];
        p.dist_lens = limited_code_lengths({dist_freq_.data(), dist_freq_.size()}, 15);
        ensure_two_symbols(p.lit_lens);
        ensure_two_symbols(p.dist_lens);

        int hlit = kNumLitCodes;
        while (hlit > 257 && p.lit_lens[hlit - 1] == 0) --hlit;
        int hdist = kNumDistCodes;
        while (hdist > 1 && p.dist_lens[hdist - 1] == 0) --hdist;
        p.hlit = hlit;
        p.hdist = hdist;

        rle_code_lengths({p.lit_lens.data(), static_cast<size_t>(hlit)}, p.cl_syms);
        rle_code_lengths({p.dist_lens.data(), static_cast<size_t>(hdist)}, p.cl_syms);

        std::array<uint32_t, kNumClCodes> cl_freq{};
        for (const auto& cs : p.cl_syms) ++cl_freq[cs.sym];
        p.cl_lens = limited_code_lengths({cl_freq.data(), cl_freq.size()}, 7);

        int hclen = kNumClCodes;
        while (hclen > 4 && p.cl_lens[kClOrder[hclen - 1]] == 0) --hclen;
        p.hclen = hclen;

        p.header_bits = 5 + 5 + 4 + 3 * static_cast<size_t>(hclen);
        for (const auto& cs : p.cl_syms) {
            p.header_bits += p.cl_lens[cs.sym];
            if (cs.sym == 16) p.header_bits += 2;
            else if (cs.sym == 17) p.header_bits += 3;
            else if (cs.sym == 18) p.header_bits += 7;
        }
        size_t body = 0;
        for (int s = 0; s < kNumLitCodes; ++s) body += static_cast<size_t>(lit_freq_[s]) * p.lit_lens[s];
        body += p.lit_lens[256];
        for (int s = 0; s < kNumDistCodes; ++s) body += static_cast<size_t>(dist_freq_[s]) * p.dist_lens[s];
        p.body_bits = body + extra_bits_;
        return p;
    }

    size_t static_cost_bits() const {
        size_t bits = 0;
        for (int s = 0; s < kNumLitCodes; ++s) {
            const int len = s < 144 ? 8 : s < 256 ? 9 : s < 280 ? 7 : 8;
            bits += static_cast<size_t>(lit_freq_[s]) * static_cast<size_t>(len);
        }
        bits += 7;  // end-of-block in the fixed tree
        for (int s = 0; s < kNumDistCodes; ++s) bits += static_cast<size_t>(dist_freq_[s]) * 5;
        return bits + extra_bits_;
    }

    size_t stored_cost_bits() const {
        const size_t align = (8 - ((writer_.bit_position() + 3) & 7)) & 7;
        const size_t blocks = std::max<size_t>(1, (block_raw_len_ + 65534) / 65535);
        return 3 + align + 32 + (blocks - 1) * 40 + 8 * block_raw_len_;
    }

    static const std::array<HuffCode, kNumLitCodes>& fixed_lit_codes() {
        static const auto codes = [] {
            std::vector<uint8_t> lens(288);
            for (int s = 0; s < 288; ++s)
                lens[s] = s < 144 ? 8 : s < 256 ? 9 : s < 280 ? 7 : 8;
            auto all = canonical_codes(lens);
            std::array<HuffCode, kNumLitCodes> out{};
            std::copy_n(all.begin(), kNumLitCodes, out.begin());
            return out;
        }();
        return codes;
    }

    static const std::array<HuffCode, kNumDistCodes>& fixed_dist_codes() {
        static const auto codes = [] {
            std::vector<uint8_t> lens(kNumDistCodes, 5);
            auto all = canonical_codes(lens);
            std::array<HuffCode, kNumDistCodes> out{};
            std::copy_n(all.begin(), kNumDistCodes, out.begin());
            return out;
        }();
        return codes;
    }

    void emit_tokens(const std::vector<HuffCode>& lit, const std::vector<HuffCode>& dist) {
        for (const Token& t : tokens_) {
            if (t.dist == 0) {
                writer_.put(lit[t.len_or_lit].bits, lit[t.len_or_lit].len);
            } else {
                const int lc = length_code(t.len_or_lit);
                writer_.put(lit[lc].bits, lit[lc].len);
                writer_.put(static_cast<uint32_t>(t.len_or_lit - kLenBase[lc - 257]),
                            kLenExtra[lc - 257]);
                const int dc = dist_code(t.dist);
                writer_.put(dist[dc].bits, dist[dc].len);
                writer_.put(static_cast<uint32_t>(t.dist - kDistBase[dc]), kDistExtra[dc]);
            }
        }
        writer_.put(lit[256].bits, lit[256].len);
    }

    void flush_block(bool last) {
        if (tokens_.empty() && !last) return;

        const DynamicPlan plan = plan_dynamic();
        const size_t dynamic_cost = 3 + plan.header_bits + plan.body_bits;
        const size_t static_cost = 3 + static_cost_bits();
        const size_t stored_cost = stored_cost_bits();

        if (stored_cost < dynamic_cost && stored_cost < static_cost) {
            emit_stored(last);
        } else if (static_cost <= dynamic_cost) {
            writer_.put(last ? 1 : 0, 1);
            writer_.put(1, 2);  // BTYPE=01 fixed
            std::vector<HuffCode> lit(fixed_lit_codes().begin(), fixed_lit_codes().end());
            std::vector<HuffCode> dist(fixed_dist_codes().begin(), fixed_dist_codes().end());
            emit_tokens(lit, dist);
        } else {
            writer_.put(last ? 1 : 0, 1);
            writer_.put(2, 2);  // BTYPE=10 dynamic
            writer_.put(static_cast<uint32_t>(plan.hlit - 257), 5);
            writer_.put(static_cast<uint32_t>(plan.hdist - 1), 5);
            writer_.put(static_cast<uint32_t>(plan.hclen - 4), 4);
            auto cl_codes = canonical_codes(plan.cl_lens);
            for (int i = 0; i < plan.hclen; ++i)
                writer_.put(plan.cl_lens[kClOrder[i]], 3);
            for (const auto& cs : plan.cl_syms) {
                writer_.put(cl_codes[cs.sym].bits, cl_codes[cs.sym].len);
                if (cs.sym == 16) writer_.put(static_cast<uint32_t>(cs.extra), 2);
                else if (cs.sym == 17) writer_.put(static_cast<uint32_t>(cs.extra), 3);
                else if (cs.sym == 18) writer_.put(static_cast<uint32_t>(cs.extra), 7);
            }
            emit_tokens(canonical_codes(plan.lit_lens), canonical_codes(plan.dist_lens));
        }

        block_raw_start_ += block_raw_len_;
        block_raw_len_ = 0;
        tokens_.clear();
        lit_freq_.fill(0);
        dist_freq_.fill(0);
        extra_bits_ = 0;
    }

    void emit_stored(bool last) {
        size_t off = block_raw_start_;
        size_t remaining = block_raw_len_;
        do {
            const size_t chunk = std::min<size_t>(remaining, 65535);
            const bool final_chunk = last && chunk == remaining;
            writer_.put(final_chunk ? 1 : 0, 1);
            writer_.put(0, 2);  // BTYPE=00 stored
            writer_.align_to_byte();
            writer_.put(static_cast<uint32_t>(chunk), 16);
            writer_.put(static_cast<uint32_t>(~chunk & 0xFFFF), 16);
            writer_.put_bytes(in_.data() + off, chunk);
            off += chunk;
            remaining -= chunk;
        } while (remaining > 0);
    }

    std::span<const uint8_t> in_;
    LevelParams params_;
    bool greedy_;
    std::vector<int64_t> head_, prev_;
    std::vector<Token> tokens_;
    std::array<uint32_t, kNumLitCodes> lit_freq_{};
    std::array<uint32_t, kNumDistCodes> dist_freq_{};
    size_t extra_bits_ = 0;
    size_t block_raw_start_ = 0;
    size_t block_raw_len_ = 0;
    BitWriter writer_;
};

}  // namespace detail

inline std::vector<uint8_t> compress(std::span<const uint8_t> input, int level = 6) {
    detail::Encoder enc(input, level);
    return enc.run();
}

inline size_t compressed_size(std::span<const uint8_t> input, int level = 6) {
    return compress(input, level).size();
}

}  // namespace zipshot::deflate
