#include "coco/csp.hpp"

#include <bit>
#include <stdexcept>

namespace coco::csp {

int min_value(Mask m)
{
    return std::countr_zero(m);
}

int max_value(Mask m)
{
    return 63 - std::countl_zero(m);
}

int count_values(Mask m)
{
    return std::popcount(m);
}

std::size_t Problem::add_variable(std::string name, int lo, int hi)
{
    if (lo < 0 || hi > 63)
        throw std::out_of_range("csp domain must lie in 0..63");
    Mask m = 0;
    for (int v = lo; v <= hi; ++v)
        m |= Mask{1} << v;
    names_.push_back(std::move(name));
    initial_.push_back(m);
    empty_label_.emplace_back(lo > hi ? "empty range" : "");
    linear_of_var_.emplace_back();
    preds_of_var_.emplace_back();
    return names_.size() - 1;
}

void Problem::filter(std::size_t var, const std::function<bool(int)> &keep, const std::string &label)
{
    auto &m = initial_.at(var);
    for (int v = 0; v < 64; ++v)
        if (has(m, v) && ! keep(v))
            m &= ~(Mask{1} << v);
    if (m == 0 && empty_label_[var].empty())
        empty_label_[var] = label;
}

void Problem::add_linear(std::vector<LinearTerm> terms, std::int64_t rhs, std::string label)
{
    for (const auto &t : terms)
        linear_of_var_.at(t.var).push_back(linear_.size());
    linear_.push_back({std::move(terms), rhs, std::move(label)});
}

void Problem::add_predicate(std::vector<std::size_t> vars, Predicate pred, std::string label)
{
    for (auto v : vars)
        preds_of_var_.at(v).push_back(preds_.size());
    preds_.push_back({std::move(vars), std::move(pred), std::move(label)});
}

bool Problem::propagate(std::vector<Mask> &dom, std::vector<std::size_t> queue, std::string *failure) const
{
    std::vector<bool> linear_pending(linear_.size(), false), pred_pending(preds_.size(), false);
    std::vector<std::size_t> lin_queue, pred_queue;
    auto enqueue_var = [&](std::size_t v) {
        for (auto c : linear_of_var_[v])
            if (! linear_pending[c]) {
                linear_pending[c] = true;
                lin_queue.push_back(c);
            }
        for (auto p : preds_of_var_[v])
            if (! pred_pending[p]) {
                pred_pending[p] = true;
                pred_queue.push_back(p);
            }
    };
    for (auto v : queue)
        enqueue_var(v);

    while (! lin_queue.empty() || ! pred_queue.empty()) {
        if (! lin_queue.empty()) {
            const auto c = lin_queue.back();
            lin_queue.pop_back();
            linear_pending[c] = false;
            const auto &eq = linear_[c];
            std::int64_t lo = 0, hi = 0;
            for (const auto &t : eq.terms) {
                const auto a = t.coef * min_value(dom[t.var]), b = t.coef * max_value(dom[t.var]);
                lo += std::min(a, b);
                hi += std::max(a, b);
            }
            if (eq.rhs < lo || eq.rhs > hi) {
                if (failure)
                    *failure = eq.label;
                return false;
            }
            for (const auto &t : eq.terms) {
                const auto a = t.coef * min_value(dom[t.var]), b = t.coef * max_value(dom[t.var]);
                const auto others_lo = lo - std::min(a, b), others_hi = hi - std::max(a, b);
                Mask kept = dom[t.var];
                for (Mask rest = kept; rest; rest &= rest - 1) {
                    const int v = std::countr_zero(rest);
                    const auto term = t.coef * v;
                    if (eq.rhs - term < others_lo || eq.rhs - term > others_hi)
                        kept &= ~(Mask{1} << v);
                }
                if (kept == 0) {
                    if (failure)
                        *failure = eq.label;
                    return false;
                }
                if (kept != dom[t.var]) {
                    dom[t.var] = kept;
                    enqueue_var(t.var);
                    // bounds of this equation changed; recheck it later
                    if (! linear_pending[c]) {
                        linear_pending[c] = true;
                        lin_queue.push_back(c);
                    }
                }
            }
        } else {
            const auto p = pred_queue.back();
            pred_queue.pop_back();
            pred_pending[p] = false;
            if (! preds_[p].pred(dom)) {
                if (failure)
                    *failure = preds_[p].label;
                return false;
            }
        }
    }
    return true;
}

bool Problem::search(std::vector<Mask> &dom, std::size_t &nodes, std::size_t budget, bool &exhausted) const
{
    std::size_t best = dom.size();
    int best_count = 65;
    for (std::size_t v = 0; v < dom.size(); ++v) {
        const int c = count_values(dom[v]);
        if (c > 1 && c < best_count) {
            best = v;
            best_count = c;
        }
    }
    if (best == dom.size())
        return true;

    for (Mask rest = dom[best]; rest; rest &= rest - 1) {
        if (++nodes > budget) {
            exhausted = true;
            return false;
        }
        auto child = dom;
        child[best] = rest & (~rest + 1);
        if (propagate(child, {best}, nullptr) && search(child, nodes, budget, exhausted)) {
            dom = std::move(child);
            return true;
        }
        if (exhausted)
            return false;
    }
    return false;
}

Result Problem::solve(std::size_t node_budget) const
{
    Result out;
    auto dom = initial_;
    for (std::size_t v = 0; v < dom.size(); ++v)
        if (dom[v] == 0) {
            out.refutation = empty_label_[v];
            return out;
        }
    std::vector<std::size_t> all(dom.size());
    for (std::size_t v = 0; v < all.size(); ++v)
        all[v] = v;
    if (! propagate(dom, all, &out.refutation))
        return out;
    for (const auto &eq : linear_)
        if (eq.terms.empty() && eq.rhs != 0) {
            out.refutation = eq.label;
            return out;
        }
    for (const auto &p : preds_)
        if (p.vars.empty() && ! p.pred(dom)) {
            out.refutation = p.label;
            return out;
        }

    bool exhausted = false;
    if (search(dom, out.nodes, node_budget, exhausted)) {
        out.status = Status::Feasible;
        for (auto m : dom)
            out.values.push_back(min_value(m));
    } else {
        out.status = exhausted ? Status::BudgetExhausted : Status::Infeasible;
    }
    return out;
}

std::string Problem::violated_by(const std::vector<int> &values) const
{
    if (values.size() != initial_.size())
        return "assignment size";
    std::vector<Mask> dom;
    for (std::size_t v = 0; v < values.size(); ++v) {
        if (values[v] < 0 || values[v] > 63 || ! has(initial_[v], values[v]))
            return "domain of " + names_[v];
        dom.push_back(Mask{1} << values[v]);
    }
    for (const auto &eq : linear_) {
        std::int64_t sum = 0;
        for (const auto &t : eq.terms)
            sum += t.coef * values[t.var];
        if (sum != eq.rhs)
            return eq.label;
    }
    for (const auto &p : preds_)
        if (! p.pred(dom))
            return p.label;
    return {};
}

}  // namespace coco::csp
