#pragma once

namespace hermtrace {

/// Compensated summation; works for real and std::complex value types.
template <typename T>
class KahanSum {
public:
    void add(const T& x) {
        const T y = x - comp_;
        const T t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    KahanSum& operator+=(const T& x) {
        add(x);
        return *this;
    }
    [[nodiscard]] const T& value() const { return sum_; }

private:
    T sum_{};
    T comp_{};
};

}  // namespace hermtrace
