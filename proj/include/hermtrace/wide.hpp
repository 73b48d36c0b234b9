#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hermtrace {

using Wide = boost::multiprecision::cpp_bin_float_100;
using Wider = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<240>>;

template <class R>
struct WideComplex {
    R re{0};
    R im{0};

    WideComplex() = default;
    WideComplex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    WideComplex& operator+=(const WideComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend WideComplex operator+(WideComplex a, const WideComplex& b) { return a += b; }
    friend WideComplex operator*(const WideComplex& a, const WideComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend WideComplex operator*(const WideComplex& a, const R& b) { return {a.re * b, a.im * b}; }
};

}  // namespace hermtrace
