#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lehmer {

/// Raised for any malformed ring, label or matrix input.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The ring of integers of Q(sqrt d) for squarefree d < 0, d != -1, -3.
///
/// Elements are written (x + y sqrt d) / s with s = 2 exactly when
/// d = 1 (mod 4), and s = 1 otherwise.
struct RingSpec {
    std::int64_t d = -2;
    int s = 1;

    friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

/// Builds a RingSpec, rejecting d >= 0, d in {-1, -3} and non-squarefree d.
RingSpec ring_make(std::int64_t d);

bool is_squarefree(std::int64_t n);

/// An element (x + y sqrt d) / s of the ring. When s = 2, x and y share parity.
class QuadInt {
  public:
    QuadInt() = default;
    QuadInt(RingSpec ring, std::int64_t x, std::int64_t y);
    static QuadInt integer(RingSpec ring, std::int64_t v) { return QuadInt(ring, v * ring.s, 0); }

    std::int64_t x() const { return x_; }
    std::int64_t y() const { return y_; }
    const RingSpec& ring() const { return ring_; }

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }
    /// Value as a rational integer; only meaningful when is_rational().
    std::int64_t rational_value() const { return x_ / ring_.s; }

    std::int64_t norm() const;
    QuadInt conjugate() const { return QuadInt(ring_, x_, -y_, Unchecked{}); }
    QuadInt operator-() const { return QuadInt(ring_, -x_, -y_, Unchecked{}); }

    friend QuadInt operator+(const QuadInt& a, const QuadInt& b);
    friend QuadInt operator-(const QuadInt& a, const QuadInt& b);
    friend QuadInt operator*(const QuadInt& a, const QuadInt& b);

    friend bool operator==(const QuadInt& a, const QuadInt& b) {
        return a.ring_ == b.ring_ && a.x_ == b.x_ && a.y_ == b.y_;
    }
    /// Canonical total order: lexicographic on (norm, x, y).
    friend std::strong_ordering operator<=>(const QuadInt& a, const QuadInt& b);

    std::string to_string() const;

  private:
    struct Unchecked {};
    QuadInt(RingSpec ring, std::int64_t x, std::int64_t y, Unchecked)
        : x_(x), y_(y), ring_(ring) {}

    std::int64_t x_ = 0;
    std::int64_t y_ = 0;
    RingSpec ring_{};
};

std::ostream& operator<<(std::ostream& os, const QuadInt& q);

enum class ArithOp { add, sub, mul };
QuadInt arith(const QuadInt& a, const QuadInt& b, ArithOp op);

/// All elements of norm n, sorted by the canonical order.
std::vector<QuadInt> enumerate_norm(const RingSpec& ring, std::int64_t n);

enum class LabelTag { level1, level2, level3, level4, full_l, l_prime, l1_zero, l2_zero };

struct LabelSet {
    RingSpec ring;
    LabelTag tag = LabelTag::full_l;
    std::vector<QuadInt> members;

    bool contains(const QuadInt& q) const;
    std::size_t size() const { return members.size(); }
};

/// full_l = {0} u L1 u ... u L4, l_prime = {0} u L1 u L2,
/// l1_zero = {0} u L1, l2_zero = {0} u L2.
LabelSet label_set(const RingSpec& ring, LabelTag tag);

std::string to_string(LabelTag tag);

}  // namespace lehmer
