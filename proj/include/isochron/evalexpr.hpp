#ifndef ISOCHRON_EVALEXPR_HPP
#define ISOCHRON_EVALEXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "isochron/bigfloat.hpp"
#include "isochron/rational.hpp"

namespace isochron {

// Evaluation either produces a finite value or an explicit domain-error flag
// (pole, branch point, even root of a negative). Never a silent NaN.
template <class T>
struct EvalResult {
    bool ok = false;
    T value{};
    std::string error;

    static EvalResult good(T v) { return {true, std::move(v), {}}; }
    static EvalResult fail(std::string what) { return {false, T{}, std::move(what)}; }
};

// Closed-form expression tree over {+,-,*,/, rational powers, sqrt, tan,
// arctan, numeric literals, x, y}.
class EvalExpr {
public:
    enum class Kind { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Tan, Arctan };

    struct Node {
        Kind kind;
        Rational num;            // Kind::Num
        int var = 0;             // Kind::Var: 0 = x, 1 = y
        long pow_p = 0;          // Kind::Pow exponent p/q
        unsigned long pow_q = 1;
        std::vector<std::shared_ptr<const Node>> kids;
    };

    EvalExpr() = default;
    EvalExpr(std::shared_ptr<const Node> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    bool empty() const { return root_ == nullptr; }
    const std::string& source() const { return source_; }

    EvalResult<double> eval(double x, double y) const;
    EvalResult<BigFloat> eval(const BigFloat& x, const BigFloat& y) const;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace isochron

#endif
