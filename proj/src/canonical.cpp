#include "tcurve/canonical.hpp"

#include <stdexcept>

namespace tcurve {

int key_width(int n) { return n <= 256 ? 1 : 2; }

std::size_t key_bytes(int n) { return static_cast<std::size_t>(2 * n * key_width(n)); }

Origami CanonicalForm::origami() const
{
    return Origami(Permutation(r), Permutation(u));
}

Canonicalizer::Canonicalizer(int n)
    : n_(n), width_(key_width(n)), label_(n, -1), order_(n), best_(2 * n), cur_(2 * n)
{
    if (n < 1 || n > 65536)
        throw std::invalid_argument("square count out of range for canonical keys");
}

void Canonicalizer::canonical_key(const int* r, const int* u, std::uint8_t* out)
{
    const int n = n_;
    bool have_best = false;
    for (int s = 0; s < n; ++s) {
        // 0: tied with best so far, -1: already smaller
        int state = have_best ? 0 : -1;
        std::fill(label_.begin(), label_.end(), -1);
        label_[s] = 0;
        order_[0] = s;
        int next = 1;
        bool aborted = false;
        for (int k = 0; k < n; ++k) {
            if (k >= next)
                throw std::invalid_argument("canonical form of a disconnected origami");
            int x = order_[k];
            int rx = r[x], ux = u[x];
            if (label_[rx] < 0) {
                label_[rx] = next;
                order_[next++] = rx;
            }
            if (label_[ux] < 0) {
                label_[ux] = next;
                order_[next++] = ux;
            }
            int a = label_[rx], b = label_[ux];
            if (state == 0) {
                int ba = best_[2 * k], bb = best_[2 * k + 1];
                if (a > ba || (a == ba && b > bb)) {
                    aborted = true;
                    break;
                }
                if (a < ba || b < bb)
                    state = -1;
            }
            cur_[2 * k] = a;
            cur_[2 * k + 1] = b;
        }
        if (!aborted && state == -1) {
            best_.swap(cur_);
            have_best = true;
        }
    }
    if (width_ == 1) {
        for (int k = 0; k < 2 * n; ++k)
            out[k] = static_cast<std::uint8_t>(best_[k]);
    } else {
        for (int k = 0; k < 2 * n; ++k) {
            out[2 * k] = static_cast<std::uint8_t>(best_[k] & 0xff);
            out[2 * k + 1] = static_cast<std::uint8_t>(best_[k] >> 8);
        }
    }
}

void decode_key(const std::uint8_t* key, int n, int* r, int* u)
{
    if (key_width(n) == 1) {
        for (int k = 0; k < n; ++k) {
            r[k] = key[2 * k];
            u[k] = key[2 * k + 1];
        }
    } else {
        for (int k = 0; k < n; ++k) {
            r[k] = key[4 * k] | (key[4 * k + 1] << 8);
            u[k] = key[4 * k + 2] | (key[4 * k + 3] << 8);
        }
    }
}

CanonicalForm canonical_form(const Origami& o)
{
    int n = o.size();
    Canonicalizer c(n);
    CanonicalForm f;
    f.n = n;
    f.key.resize(key_bytes(n));
    c.canonical_key(o.r.images().data(), o.u.images().data(),
                    reinterpret_cast<std::uint8_t*>(f.key.data()));
    f.r.resize(n);
    f.u.resize(n);
    decode_key(reinterpret_cast<const std::uint8_t*>(f.key.data()), n, f.r.data(), f.u.data());
    return f;
}

Origami act_T(const Origami& o) { return Origami(o.r, o.u * o.r.inverse()); }

Origami act_S(const Origami& o) { return Origami(o.u.inverse(), o.r); }

}  // namespace tcurve
