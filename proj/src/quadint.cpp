#include "lehmer/quadint.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace lehmer {

bool is_squarefree(std::int64_t n) {
    n = n < 0 ? -n : n;
    if (n == 0) return false;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

RingSpec ring_make(std::int64_t d) {
    if (d >= 0) throw ValidationError("d must be negative (got " + std::to_string(d) + ")");
    if (d == -1 || d == -3) {
        throw ValidationError("d = " + std::to_string(d) + " (Gaussian/Eisenstein case) is not supported");
    }
    if (!is_squarefree(d)) throw ValidationError("d = " + std::to_string(d) + " is not squarefree");
    // d % 4 is negative for negative d in C++.
    const std::int64_t r = ((d % 4) + 4) % 4;
    return RingSpec{d, r == 1 ? 2 : 1};
}

QuadInt::QuadInt(RingSpec ring, std::int64_t x, std::int64_t y) : x_(x), y_(y), ring_(ring) {
    if (ring.s == 2 && ((x - y) % 2) != 0) {
        throw ValidationError("element (" + std::to_string(x) + " + " + std::to_string(y) +
                              " sqrt d)/2 violates the parity rule");
    }
}

std::int64_t QuadInt::norm() const {
    return (x_ * x_ - ring_.d * y_ * y_) / (ring_.s * ring_.s);
}

static void require_same_ring(const QuadInt& a, const QuadInt& b) {
    if (!(a.ring() == b.ring())) throw ValidationError("ring mismatch in arithmetic");
}

QuadInt operator+(const QuadInt& a, const QuadInt& b) {
    require_same_ring(a, b);
    return QuadInt(a.ring_, a.x_ + b.x_, a.y_ + b.y_, QuadInt::Unchecked{});
}

QuadInt operator-(const QuadInt& a, const QuadInt& b) {
    require_same_ring(a, b);
    return QuadInt(a.ring_, a.x_ - b.x_, a.y_ - b.y_, QuadInt::Unchecked{});
}

QuadInt operator*(const QuadInt& a, const QuadInt& b) {
    require_same_ring(a, b);
    const int s = a.ring_.s;
    // (x1 + y1 r)(x2 + y2 r) / s^2 with r^2 = d, rescaled back to denominator s.
    const std::int64_t x = a.x_ * b.x_ + a.ring_.d * a.y_ * b.y_;
    const std::int64_t y = a.x_ * b.y_ + a.y_ * b.x_;
    return QuadInt(a.ring_, x / s, y / s, QuadInt::Unchecked{});
}

std::strong_ordering operator<=>(const QuadInt& a, const QuadInt& b) {
    if (auto c = a.norm() <=> b.norm(); c != 0) return c;
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.y_ <=> b.y_;
}

std::string QuadInt::to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadInt& q) {
    const int s = q.ring().s;
    if (q.y() == 0) return os << (q.x() / s);
    os << "(" << q.x();
    os << (q.y() < 0 ? " - " : " + ");
    const std::int64_t ay = q.y() < 0 ? -q.y() : q.y();
    if (ay != 1) os << ay << "*";
    os << "sqrt(" << q.ring().d << "))";
    if (s != 1) os << "/" << s;
    return os;
}

QuadInt arith(const QuadInt& a, const QuadInt& b, ArithOp op) {
    switch (op) {
        case ArithOp::add: return a + b;
        case ArithOp::sub: return a - b;
        case ArithOp::mul: return a * b;
    }
    throw ValidationError("unknown arithmetic op");
}

std::vector<QuadInt> enumerate_norm(const RingSpec& ring, std::int64_t n) {
    if (n < 0) throw ValidationError("norm must be non-negative");
    std::vector<QuadInt> out;
    const std::int64_t s = ring.s;
    const std::int64_t target = n * s * s;  // x^2 - d y^2 = n s^2
    const std::int64_t ad = -ring.d;
    const auto ymax = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(target) / ad))) + 1;
    for (std::int64_t y = -ymax; y <= ymax; ++y) {
        const std::int64_t rest = target - ad * y * y;
        if (rest < 0) continue;
        auto x = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(rest))));
        while (x * x > rest) --x;
        while ((x + 1) * (x + 1) <= rest) ++x;
        if (x * x != rest) continue;
        for (std::int64_t sx : {x, -x}) {
            if (s == 2 && ((sx - y) % 2) != 0) continue;
            out.emplace_back(ring, sx, y);
            if (x == 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool LabelSet::contains(const QuadInt& q) const {
    return std::binary_search(members.begin(), members.end(), q);
}

LabelSet label_set(const RingSpec& ring, LabelTag tag) {
    LabelSet ls{ring, tag, {}};
    auto add_level = [&](std::int64_t n) {
        auto e = enumerate_norm(ring, n);
        ls.members.insert(ls.members.end(), e.begin(), e.end());
    };
    auto add_zero = [&] { ls.members.emplace_back(ring, 0, 0); };
    switch (tag) {
        case LabelTag::level1: add_level(1); break;
        case LabelTag::level2: add_level(2); break;
        case LabelTag::level3: add_level(3); break;
        case LabelTag::level4: add_level(4); break;
        case LabelTag::full_l:
            add_zero();
            for (int n = 1; n <= 4; ++n) add_level(n);
            break;
        case LabelTag::l_prime:
            add_zero();
            add_level(1);
            add_level(2);
            break;
        case LabelTag::l1_zero:
            add_zero();
            add_level(1);
            break;
        case LabelTag::l2_zero:
            add_zero();
            add_level(2);
            break;
    }
    std::sort(ls.members.begin(), ls.members.end());
    return ls;
}

std::string to_string(LabelTag tag) {
    switch (tag) {
        case LabelTag::level1: return "L1";
        case LabelTag::level2: return "L2";
        case LabelTag::level3: return "L3";
        case LabelTag::level4: return "L4";
        case LabelTag::full_l: return "L";
        case LabelTag::l_prime: return "L'";
        case LabelTag::l1_zero: return "L1+0";
        case LabelTag::l2_zero: return "L2+0";
    }
    return "?";
}

}  // namespace lehmer
