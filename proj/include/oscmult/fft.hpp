#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "oscmult/parallel.hpp"

namespace oscmult::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// One-dimensional transform plan of fixed length. Power-of-two lengths run
// the iterative radix-2 kernel; anything else falls back to the O(n^2) sum
// (only small odd factors ever reach it here). Neither direction scales.
class Plan {
public:
    Plan(std::size_t n, bool inverse) : n_(n), inverse_(inverse), pow2_(is_pow2(n)) {
        if (n_ == 0) throw std::invalid_argument("fft::Plan: zero length");
        const double sign = inverse_ ? 1.0 : -1.0;
        const double base = sign * 6.283185307179586476925286766559 / static_cast<double>(n_);
        if (pow2_) {
            table_.resize(n_ / 2);
            for (std::size_t k = 0; k < n_ / 2; ++k)
                table_[k] = std::polar(1.0, base * static_cast<double>(k));
        } else {
            table_.resize(n_);
            for (std::size_t k = 0; k < n_; ++k)
                table_[k] = std::polar(1.0, base * static_cast<double>(k));
        }
    }

    std::size_t size() const { return n_; }

    void run(std::complex<double>* a) const {
        if (n_ == 1) return;
        if (pow2_) {
            run_radix2(a);
        } else {
            std::vector<std::complex<double>> out(n_);
            for (std::size_t k = 0; k < n_; ++k) {
                std::complex<double> acc{};
                std::size_t idx = 0;
                for (std::size_t j = 0; j < n_; ++j) {
                    acc += a[j] * table_[idx];
                    idx += k;
                    if (idx >= n_) idx -= n_;
                }
                out[k] = acc;
            }
            for (std::size_t k = 0; k < n_; ++k) a[k] = out[k];
        }
    }

private:
    void run_radix2(std::complex<double>* a) const {
        for (std::size_t i = 1, j = 0; i < n_; ++i) {
            std::size_t bit = n_ >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n_ / len;
            for (std::size_t blk = 0; blk < n_; blk += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const std::complex<double> u = a[blk + j];
                    const std::complex<double> v = a[blk + j + half] * table_[j * step];
                    a[blk + j] = u + v;
                    a[blk + j + half] = u - v;
                }
            }
        }
    }

    std::size_t n_;
    bool inverse_;
    bool pow2_;
    std::vector<std::complex<double>> table_;
};

inline void transform_1d(std::vector<std::complex<double>>& v, bool inverse) {
    Plan plan(v.size(), inverse);
    plan.run(v.data());
}

// Row-major 2D transform: rows first, then columns through a scratch buffer.
// Thread spawn is only worth it for big grids.
inline void transform_2d(std::vector<std::complex<double>>& v, std::size_t rows,
                         std::size_t cols, bool inverse) {
    if (v.size() != rows * cols) throw std::invalid_argument("fft::transform_2d: shape mismatch");
    const bool parallel = rows * cols >= (std::size_t{1} << 15);
    if (cols > 1) {
        Plan row_plan(cols, inverse);
        auto body = [&](std::size_t r) { row_plan.run(v.data() + r * cols); };
        if (parallel)
            parallel_for(rows, body);
        else
            for (std::size_t r = 0; r < rows; ++r) body(r);
    }
    if (rows > 1) {
        Plan col_plan(rows, inverse);
        auto body = [&](std::size_t c) {
            std::vector<std::complex<double>> tmp(rows);
            for (std::size_t r = 0; r < rows; ++r) tmp[r] = v[r * cols + c];
            col_plan.run(tmp.data());
            for (std::size_t r = 0; r < rows; ++r) v[r * cols + c] = tmp[r];
        };
        if (parallel)
            parallel_for(cols, body);
        else
            for (std::size_t c = 0; c < cols; ++c) body(c);
    }
}

} // namespace oscmult::fft
