#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "sgfract/errors.hpp"
#include "sgfract/gasket.hpp"

namespace sgf {

namespace detail {
struct ExprNode;
}

/// Parsed expression in the variables x, y.
///
/// Grammar (standard precedence, ^ right-associative, unary minus between
/// ^ and */):
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" factor)?
///   atom   := number | "x" | "y" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
///   func   := sin | cos | tan | exp | log | sqrt | abs
class FieldExpr {
  public:
    /// Throws SyntaxError / UnknownIdentifier.
    static FieldExpr parse(std::string_view text);

    /// IEEE double evaluation of the tree. Throws DomainError for log/sqrt
    /// outside their domain and for non-finite results (division by zero,
    /// overflow, 0^negative, ...).
    double eval(Point2 t) const;

    /// Fully parenthesized form; re-parsing it reproduces the tree (and
    /// therefore bit-identical evaluation).
    std::string str() const;

    /// Original text handed to parse().
    const std::string& source() const { return source_; }

  private:
    FieldExpr(std::shared_ptr<const detail::ExprNode> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    std::shared_ptr<const detail::ExprNode> root_;
    std::string source_;
};

/// A continuous real-valued map on the gasket. Deterministic: same point,
/// same bits, every call.
class ScalarField {
  public:
    enum class Kind { expression, builtin, table };

    ScalarField() = default;

    static ScalarField expression(std::string_view text) {
        return expression(FieldExpr::parse(text));
    }
    static ScalarField expression(FieldExpr expr);

    /// Wraps an arbitrary deterministic callable (built-ins, table lookups).
    static ScalarField callable(Kind kind, std::string name,
                                std::function<double(Point2)> fn);

    double operator()(Point2 t) const { return fn_(t); }

    Kind kind() const { return kind_; }
    /// Expression text for expression-backed fields, otherwise a name.
    const std::string& text() const { return text_; }

    /// Table-backed fields carry their exact max |value| so sup-norm
    /// sampling can report it directly.
    const std::optional<double>& norm_hint() const { return norm_hint_; }
    void set_norm_hint(double v) { norm_hint_ = v; }

  private:
    Kind kind_ = Kind::builtin;
    std::string text_;
    std::function<double(Point2)> fn_ = [](Point2) { return 0.0; };
    std::optional<double> norm_hint_;
};

/// The (f, b) pair from figure 1..4, pre-parsed from the caption formulas.
/// Throws UnknownFigure otherwise.
std::pair<ScalarField, ScalarField> builtin_figure_fields(int figure);

/// Compatibility tolerance used for the figure built-ins: the literal
/// 0.866 in figures 2-4 misses sqrt(3)/2 by ~2.5e-5, so b = f on V_0 only
/// holds to ~6.4e-6 there.
inline constexpr double kFigureCompatTol = 1e-3;

/// Default compatibility tolerance for user-supplied (f, b) pairs.
inline constexpr double kDefaultCompatTol = 1e-9;

}  // namespace sgf
