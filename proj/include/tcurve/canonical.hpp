#pragma once

#include "tcurve/origami.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tcurve {

// Byte key layout: for k = 0..n-1 the pair r'(k), u'(k) of 0-based canonical
// labels, each stored little-endian in key_width(n) bytes. Comparing keys
// bytewise is not the ordering used to pick the minimum; the minimum is over
// the sequence of label pairs.
int key_width(int n);
std::size_t key_bytes(int n);

struct CanonicalForm {
    int n = 0;
    std::vector<int> r, u;  // 0-based, canonical labelling
    std::string key;

    Origami origami() const;
    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.key == b.key; }
};

// Reusable scratch space; not thread-safe, keep one per worker.
class Canonicalizer {
public:
    explicit Canonicalizer(int n);
    // r, u: 0-based images. Writes key_bytes(n) bytes to out.
    void canonical_key(const int* r, const int* u, std::uint8_t* out);
    int size() const { return n_; }

private:
    int n_;
    int width_;
    std::vector<int> label_, order_;
    std::vector<int> best_, cur_;  // interleaved pairs
};

CanonicalForm canonical_form(const Origami& o);
void decode_key(const std::uint8_t* key, int n, int* r, int* u);

Origami act_T(const Origami& o);  // (r, u r^-1)
Origami act_S(const Origami& o);  // (u^-1, r)

}  // namespace tcurve
