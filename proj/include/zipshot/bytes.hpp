#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zipshot {

enum class Origin : uint8_t { text, image, synthetic };

// Immutable byte payload of one sample. Everything the distance core
// compares is first serialized into one of these.
class ByteSequence {
public:
    ByteSequence() = default;
    ByteSequence(std::vector<uint8_t> bytes, Origin origin)
        : bytes_(std::move(bytes)), origin_(origin) {}

    static ByteSequence from_text(std::string_view s) {
        return ByteSequence(std::vector<uint8_t>(s.begin(), s.end()), Origin::text);
    }
    static ByteSequence from_bytes(std::vector<uint8_t> b, Origin origin = Origin::synthetic) {
        return ByteSequence(std::move(b), origin);
    }
    static ByteSequence from_file(const std::string& path, Origin origin = Origin::text) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open file: " + path);
        std::vector<uint8_t> b((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        return ByteSequence(std::move(b), origin);
    }

    std::span<const uint8_t> bytes() const { return bytes_; }
    size_t size() const { return bytes_.size(); }
    bool empty() const { return bytes_.empty(); }
    Origin origin() const { return origin_; }

    std::string_view as_view() const {
        return {reinterpret_cast<const char*>(bytes_.data()), bytes_.size()};
    }

    friend bool operator==(const ByteSequence& a, const ByteSequence& b) {
        return a.bytes_ == b.bytes_;
    }

private:
    std::vector<uint8_t> bytes_;
    Origin origin_ = Origin::synthetic;
};

// x ++ sep ++ y, keeping the origin convention of the pair: the text
// separator is only used when both sides are text.
inline ByteSequence concat_with_separator(const ByteSequence& x, const ByteSequence& y) {
    const bool both_text = x.origin() == Origin::text && y.origin() == Origin::text;
    const uint8_t sep = both_text ? 0x20 : 0x00;
    std::vector<uint8_t> out;
    out.reserve(x.size() + 1 + y.size());
    out.insert(out.end(), x.bytes().begin(), x.bytes().end());
    out.push_back(sep);
    out.insert(out.end(), y.bytes().begin(), y.bytes().end());
    return ByteSequence::from_bytes(std::move(out), both_text ? Origin::text : x.origin());
}

}  // namespace zipshot
