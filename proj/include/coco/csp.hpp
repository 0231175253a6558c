#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace coco::csp {

/// A set of values 0..63 as a bitmask.
using Mask = std::uint64_t;

[[nodiscard]] inline bool has(Mask m, int v) { return (m >> v) & 1u; }
[[nodiscard]] int min_value(Mask m);
[[nodiscard]] int max_value(Mask m);
[[nodiscard]] int count_values(Mask m);

struct LinearTerm
{
    std::size_t var;
    std::int64_t coef;
};

/// Returns false when the constraint cannot hold for any choice from the
/// current domains. Must be exact once every variable it reads is fixed.
using Predicate = std::function<bool(const std::vector<Mask> &)>;

enum class Status
{
    Feasible,
    Infeasible,
    BudgetExhausted,
};

struct Result
{
    Status status = Status::Infeasible;
    std::vector<int> values;
    std::size_t nodes = 0;
    /// Label of the constraint that fails before any branching, if one does.
    std::string refutation;
};

/// Finite-domain integer problem: bounded variables, unary filters, linear
/// equalities and arbitrary predicates.
class Problem
{
public:
    std::size_t add_variable(std::string name, int lo, int hi);
    /// Removes the values for which keep() is false.
    void filter(std::size_t var, const std::function<bool(int)> &keep, const std::string &label);
    void add_linear(std::vector<LinearTerm> terms, std::int64_t rhs, std::string label);
    void add_predicate(std::vector<std::size_t> vars, Predicate pred, std::string label);

    [[nodiscard]] std::size_t variable_count() const { return names_.size(); }
    [[nodiscard]] const std::string &name(std::size_t var) const { return names_.at(var); }
    [[nodiscard]] Mask domain(std::size_t var) const { return initial_.at(var); }

    /// Propagate, then branch on the variable with the fewest values
    /// (lowest index on ties), smallest value first.
    [[nodiscard]] Result solve(std::size_t node_budget = 2'000'000) const;

    /// Label of the first constraint a complete assignment violates, or
    /// empty when it satisfies all of them (domains included).
    [[nodiscard]] std::string violated_by(const std::vector<int> &values) const;

private:
    struct Linear
    {
        std::vector<LinearTerm> terms;
        std::int64_t rhs;
        std::string label;
    };
    struct Pred
    {
        std::vector<std::size_t> vars;
        Predicate pred;
        std::string label;
    };

    bool propagate(std::vector<Mask> &dom, std::vector<std::size_t> queue, std::string *failure) const;
    bool search(std::vector<Mask> &dom, std::size_t &nodes, std::size_t budget, bool &exhausted) const;

    std::vector<std::string> names_;
    std::vector<Mask> initial_;
    std::vector<std::string> empty_label_;  // filter that emptied a domain
    std::vector<Linear> linear_;
    std::vector<Pred> preds_;
    std::vector<std::vector<std::size_t>> linear_of_var_;
    std::vector<std::vector<std::size_t>> preds_of_var_;
};

}  // namespace coco::csp
