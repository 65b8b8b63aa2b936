#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace exrec {

// Packed GF(2) vector. Bit i lives in word i/64 at position i%64.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }

    bool get(size_t i) const {
        assert(i < n_);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v) {
        assert(i < n_);
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(size_t i) {
        assert(i < n_);
        w_[i >> 6] ^= uint64_t(1) << (i & 63);
    }

    BitVec &operator^=(const BitVec &o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); i++)
            w_[i] ^= o.w_[i];
        return *this;
    }
    BitVec operator^(const BitVec &o) const {
        BitVec r = *this;
        r ^= o;
        return r;
    }
    BitVec operator&(const BitVec &o) const {
        assert(n_ == o.n_);
        BitVec r = *this;
        for (size_t i = 0; i < w_.size(); i++)
            r.w_[i] &= o.w_[i];
        return r;
    }

    bool zero() const {
        for (auto w : w_)
            if (w)
                return false;
        return true;
    }
    size_t weight() const {
        size_t c = 0;
        for (auto w : w_)
            c += __builtin_popcountll(w);
        return c;
    }
    // parity of <this, o> over GF(2)
    bool dot(const BitVec &o) const {
        assert(n_ == o.n_);
        unsigned acc = 0;
        for (size_t i = 0; i < w_.size(); i++)
            acc ^= unsigned(__builtin_parityll(w_[i] & o.w_[i]));
        return acc & 1;
    }

    bool operator==(const BitVec &o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVec &o) const { return !(*this == o); }
    bool operator<(const BitVec &o) const {
        // little-endian integer comparison, lowest qubit most significant
        // for the decoder's lexicographic tie-break
        assert(n_ == o.n_);
        for (size_t i = 0; i < n_; i++) {
            bool a = get(i), b = o.get(i);
            if (a != b)
                return b; // 0 before 1 at the first differing position
        }
        return false;
    }

    std::string str() const {
        std::string s(n_, '0');
        for (size_t i = 0; i < n_; i++)
            if (get(i))
                s[i] = '1';
        return s;
    }

    uint64_t low64() const { return w_.empty() ? 0 : w_[0]; }

    size_t hash() const {
        uint64_t h = 1469598103934665603ull;
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return size_t(h);
    }

  private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Row-major GF(2) matrix built on BitVec rows.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    size_t rows() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    BitVec &row(size_t i) { return rows_[i]; }
    const BitVec &row(size_t i) const { return rows_[i]; }
    void push_row(const BitVec &v) {
        assert(v.size() == cols_ || rows_.empty());
        cols_ = v.size();
        rows_.push_back(v);
    }

    // Reduced row echelon form; returns pivot column of each surviving row.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_.size(); c++) {
            size_t sel = SIZE_MAX;
            for (size_t i = r; i < rows_.size(); i++)
                if (rows_[i].get(c)) {
                    sel = i;
                    break;
                }
            if (sel == SIZE_MAX)
                continue;
            std::swap(rows_[r], rows_[sel]);
            for (size_t i = 0; i < rows_.size(); i++)
                if (i != r && rows_[i].get(c))
                    rows_[i] ^= rows_[r];
            pivots.push_back(c);
            r++;
        }
        rows_.resize(r);
        return pivots;
    }

    size_t rank() const {
        BitMatrix m = *this;
        return m.rref().size();
    }

  private:
    size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

// Span of a set of GF(2) vectors with membership test and canonical reduction.
class RowSpace {
  public:
    RowSpace() = default;
    explicit RowSpace(size_t cols) : cols_(cols) {}

    size_t cols() const { return cols_; }
    size_t dim() const { return basis_.size(); }

    // Insert v; returns false if v was already in the span.
    bool insert(const BitVec &v) {
        BitVec r = reduce(v);
        if (r.zero())
            return false;
        size_t p = 0;
        while (!r.get(p))
            p++;
        // keep basis rows with distinct pivots, pivot-sorted
        size_t pos = 0;
        while (pos < basis_.size() && pivot_[pos] < p)
            pos++;
        basis_.insert(basis_.begin() + pos, r);
        pivot_.insert(pivot_.begin() + pos, p);
        // back-substitute to keep reduced form
        for (size_t i = 0; i < basis_.size(); i++)
            if (i != pos && basis_[i].get(p))
                basis_[i] ^= r;
        return true;
    }

    // Canonical representative of v modulo the span (clears all pivot columns).
    BitVec reduce(const BitVec &v) const {
        assert(v.size() == cols_);
        BitVec r = v;
        for (size_t i = 0; i < basis_.size(); i++)
            if (r.get(pivot_[i]))
                r ^= basis_[i];
        return r;
    }

    bool contains(const BitVec &v) const { return reduce(v).zero(); }

    // Solve sum of chosen basis rows == v; returns chosen indices, empty optional-style
    // flag via ok. Only valid when contains(v).
    std::vector<size_t> decompose(const BitVec &v, bool &ok) const {
        BitVec r = v;
        std::vector<size_t> used;
        for (size_t i = 0; i < basis_.size(); i++)
            if (r.get(pivot_[i])) {
                r ^= basis_[i];
                used.push_back(i);
            }
        ok = r.zero();
        return used;
    }

    const std::vector<BitVec> &basis() const { return basis_; }

  private:
    size_t cols_ = 0;
    std::vector<BitVec> basis_;
    std::vector<size_t> pivot_;
};

} // namespace exrec
