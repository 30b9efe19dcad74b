#pragma once

// Test-only raw DEFLATE decoder. Deliberately independent of the encoder in
// include/zipshot/deflate.hpp: round-trip tests decode through this path and
// compare against the original input. Slow bit-by-bit decoding is fine here.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace testsupport {

class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> data) : data_(data) {}

    uint32_t bits(int n) {
        uint32_t v = 0;
        for (int i = 0; i < n; ++i) {
            if (pos_ >= data_.size() * 8) throw std::runtime_error("inflate: out of input");
            const uint32_t bit = (data_[pos_ >> 3] >> (pos_ & 7)) & 1;
            v |= bit << i;
            ++pos_;
        }
        return v;
    }

    void align_byte() { pos_ = (pos_ + 7) & ~size_t{7}; }

    uint8_t byte() {
        if (pos_ & 7) throw std::runtime_error("inflate: misaligned byte read");
        if (pos_ >= data_.size() * 8) throw std::runtime_error("inflate: out of input");
        uint8_t b = data_[pos_ >> 3];
        pos_ += 8;
        return b;
    }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

// Canonical Huffman decoding table: symbol list sorted by (length, symbol).
struct HuffTree {
    std::vector<int> count;    // codes per length
    std::vector<int> symbols;  // symbols in canonical order

    static HuffTree from_lengths(std::span<const uint8_t> lens) {
        HuffTree t;
        t.count.assign(16, 0);
        for (uint8_t l : lens)
            if (l) ++t.count[l];
        for (size_t s = 0; s < lens.size(); ++s)
            if (lens[s]) t.symbols.push_back(static_cast<int>(s));
        std::stable_sort(t.symbols.begin(), t.symbols.end(), [&](int a, int b) {
            return lens[a] != lens[b] ? lens[a] < lens[b] : a < b;
        });
        return t;
    }

    int decode(BitReader& br) const {
        int code = 0, first = 0, index = 0;
        for (int len = 1; len <= 15; ++len) {
            code |= static_cast<int>(br.bits(1));
            const int n = count[len];
            if (code - first < n) return symbols[index + (code - first)];
            index += n;
            first = (first + n) << 1;
            code <<= 1;
        }
        throw std::runtime_error("inflate: bad code");
    }
};

inline std::vector<uint8_t> inflate(std::span<const uint8_t> stream) {
    static constexpr uint16_t len_base[29] = {3,  4,  5,  6,  7,  8,  9,  10, 11,  13,
                                              15, 17, 19, 23, 27, 31, 35, 43, 51,  59,
                                              67, 83, 99, 115, 131, 163, 195, 227, 258};
    static constexpr uint8_t len_extra[29] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                                              2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};
    static constexpr uint16_t dist_base[30] = {
        1,    2,    3,    4,    5,    7,     9,     13,    17,   25,
        33,   49,   65,   97,   129,  193,   257,   385,   513,  769,
        1025, 1537, 2049, 3073, 4097, 6145,  8193,  12289, 16385, 24577};
    static constexpr uint8_t dist_extra[30] = {0, 0, 0,  0,  1,  1,  2,  2,  3,  3,
                                               4, 4, 5,  5,  6,  6,  7,  7,  8,  8,
                                               9, 9, 10, 10, 11, 11, 12, 12, 13, 13};
    static constexpr uint8_t cl_order[19] = {16, 17, 18, 0, 8,  7, 9,  6, 10, 5,
                                             11, 4,  12, 3, 13, 2, 14, 1, 15};

    BitReader br(stream);
    std::vector<uint8_t> out;
    bool final_block = false;
    while (!final_block) {
        final_block = br.bits(1) != 0;
        const uint32_t btype = br.bits(2);
        if (btype == 0) {
            br.align_byte();
            uint32_t len = br.byte();
            len |= static_cast<uint32_t>(br.byte()) << 8;
            uint32_t nlen = br.byte();
            nlen |= static_cast<uint32_t>(br.byte()) << 8;
            if ((len ^ nlen) != 0xFFFF) throw std::runtime_error("inflate: bad stored length");
            for (uint32_t i = 0; i < len; ++i) out.push_back(br.byte());
            continue;
        }
        HuffTree lit, dist;
        if (btype == 1) {
            std::vector<uint8_t> lit_lens(288);
            for (int s = 0; s < 288; ++s)
                lit_lens[s] = s < 144 ? 8 : s < 256 ? 9 : s < 280 ? 7 : 8;
            lit = HuffTree::from_lengths(lit_lens);
            std::vector<uint8_t> dist_lens(30, 5);
            dist = HuffTree::from_lengths(dist_lens);
        } else if (btype == 2) {
            const int hlit = static_cast<int>(br.bits(5)) + 257;
            const int hdist = static_cast<int>(br.bits(5)) + 1;
            const int hclen = static_cast<int>(br.bits(4)) + 4;
            std::vector<uint8_t> cl_lens(19, 0);
            for (int i = 0; i < hclen; ++i)
                cl_lens[cl_order[i]] = static_cast<uint8_t>(br.bits(3));
            HuffTree cl = HuffTree::from_lengths(cl_lens);
            std::vector<uint8_t> lens;
            while (static_cast<int>(lens.size()) < hlit + hdist) {
                const int sym = cl.decode(br);
                if (sym < 16) {
                    lens.push_back(static_cast<uint8_t>(sym));
                } else if (sym == 16) {
                    if (lens.empty()) throw std::runtime_error("inflate: repeat at start");
                    const uint8_t prev = lens.back();
                    for (uint32_t r = br.bits(2) + 3; r > 0; --r) lens.push_back(prev);
                } else if (sym == 17) {
                    for (uint32_t r = br.bits(3) + 3; r > 0; --r) lens.push_back(0);
                } else {
                    for (uint32_t r = br.bits(7) + 11; r > 0; --r) lens.push_back(0);
                }
            }
            if (static_cast<int>(lens.size()) != hlit + hdist)
                throw std::runtime_error("inflate: code length overflow");
            lit = HuffTree::from_lengths({lens.data(), static_cast<size_t>(hlit)});
            dist = HuffTree::from_lengths({lens.data() + hlit, static_cast<size_t>(hdist)});
        } else {
            throw std::runtime_error("inflate: bad block type");
        }
        for (;;) {
            const int sym = lit.decode(br);
            if (sym < 256) {
                out.push_back(static_cast<uint8_t>(sym));
            } else if (sym == 256) {
                break;
            } else {
                if (sym > 285) throw std::runtime_error("inflate: bad length symbol");
                const int len = len_base[sym - 257] + static_cast<int>(br.bits(len_extra[sym - 257]));
                const int dsym = dist.decode(br);
                if (dsym > 29) throw std::runtime_error("inflate: bad distance symbol");
                const int d = dist_base[dsym] + static_cast<int>(br.bits(dist_extra[dsym]));
                if (d <= 0 || static_cast<size_t>(d) > out.size())
                    throw std::runtime_error("inflate: distance too far");
                for (int i = 0; i < len; ++i) out.push_back(out[out.size() - d]);
            }
        }
    }
    return out;
}

}  // namespace testsupport
