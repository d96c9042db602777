#pragma once

#include <memory>
#include <string>
#include <vector>

namespace heis {

// value and gradient in two variables (forward-mode autodiff)
struct Jet {
    double v = 0.0;
    double dx = 0.0;
    double dy = 0.0;

    static Jet constant(double c) { return {c, 0.0, 0.0}; }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet atan(const Jet& a);
Jet tanh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet abs(const Jet& a);
Jet pow(const Jet& a, const Jet& b);

// Compiled expression in two named variables.
// Grammar: + - * / ^, unary minus, comparisons < > <= >= (yield 1 or 0),
// functions sin cos tan arctan|atan tanh exp log sqrt abs pow(a,b),
// piecewise(c1,e1,c2,e2,...,else) picks the first ei with ci > 0,
// constants pi and e.
class Expression {
public:
    struct Node;

    Expression() = default;
    static Expression parse(const std::string& text,
                            const std::vector<std::string>& vars = {"x", "y"});
    static Expression constant(double c);

    double eval(double a, double b) const;
    Jet jet(double a, double b) const;
    const std::string& text() const { return text_; }
    bool empty() const { return !root_; }
    // true when the tree has no variable references
    bool is_constant() const;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace heis
