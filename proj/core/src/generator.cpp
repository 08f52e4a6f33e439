#include "confl/generator.hpp"

#include <deque>
#include <functional>
#include <stdexcept>

namespace confl {

namespace {

struct Candidate {
    enum Kind { Fun, Const, Var } kind;
    std::size_t index;
};

// A partially built term: nodes are created when chosen, argument slots
// are filled breadth-first.
struct Slot;
struct Node {
    Symbol sym;
    bool is_var = false;
    std::string var_name;
    std::vector<int> children;  // indices into nodes, -1 = undefined
};

TermPtr build(const std::vector<Node>& nodes, int root) {
    const Node& n = nodes[static_cast<std::size_t>(root)];
    if (n.is_var) return Term::var(n.var_name);
    std::vector<TermPtr> args;
    args.reserve(n.children.size());
    for (int c : n.children) args.push_back(build(nodes, c));
    return Term::app(n.sym, args);
}

}  // namespace

TermPtr gen_term(GenContext& ctx, Rng& rng) {
    const bool left = ctx.side == RuleSide::Left;

    auto gather = [&](bool complex_only, bool allow_vars, int max_arity) {
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < ctx.funs.size(); ++i)
            if (ctx.funs[i].arity <= max_arity) cands.push_back({Candidate::Fun, i});
        if (!complex_only) {
            for (std::size_t i = 0; i < ctx.consts.size(); ++i)
                cands.push_back({Candidate::Const, i});
            if (allow_vars)
                for (std::size_t i = 0; i < ctx.vars.size(); ++i)
                    cands.push_back({Candidate::Var, i});
        }
        return cands;
    };

    int budget = ctx.max_term_size;
    bool complex_root = rng.uniform01() < ctx.comp;
    // the root consumes one node; its children must fit in the remainder
    std::vector<Candidate> roots = gather(complex_root, !left, budget - 1);
    if (roots.empty() && complex_root) {
        // complex demanded but impossible: fall back to the plain candidate set
        roots = gather(false, !left, budget - 1);
    }
    if (roots.empty()) throw std::runtime_error("term generation: no admissible root symbol");

    std::vector<Node> nodes;
    std::deque<std::pair<int, int>> undefs;  // (node, child slot)
    int open_slots = 0;
    int size = 0;

    auto place = [&](const Candidate& c) {
        Node n;
        if (c.kind == Candidate::Var) {
            n.is_var = true;
            n.var_name = ctx.vars[c.index];
            if (ctx.linear && left)
                ctx.vars.erase(ctx.vars.begin() + static_cast<std::ptrdiff_t>(c.index));
        } else {
            n.sym = c.kind == Candidate::Fun ? ctx.funs[c.index] : ctx.consts[c.index];
            n.children.assign(static_cast<std::size_t>(n.sym.arity), -1);
        }
        nodes.push_back(std::move(n));
        int id = static_cast<int>(nodes.size()) - 1;
        ++size;
        open_slots += static_cast<int>(nodes.back().children.size());
        for (std::size_t a = 0; a < nodes.back().children.size(); ++a)
            undefs.emplace_back(id, static_cast<int>(a));
        return id;
    };

    int root = place(rng.choose(roots));

    while (!undefs.empty()) {
        auto [parent, slot] = undefs.front();
        undefs.pop_front();
        --open_slots;
        // a symbol of arity k is admissible iff size+1 + open+k <= budget
        int max_child_arity = budget - size - 1 - open_slots;
        std::vector<Candidate> cands = gather(false, true, max_child_arity);
        if (cands.empty()) throw std::runtime_error("term generation: no admissible argument symbol");
        int child = place(rng.choose(cands));
        nodes[static_cast<std::size_t>(parent)].children[static_cast<std::size_t>(slot)] = child;
    }
    return build(nodes, root);
}

Rule gen_rule(const GenContext& ctx_template, Rng& rng) {
    GenContext lhs_ctx = ctx_template;
    lhs_ctx.side = RuleSide::Left;
    TermPtr lhs = gen_term(lhs_ctx, rng);

    GenContext rhs_ctx = ctx_template;
    rhs_ctx.side = RuleSide::Right;
    rhs_ctx.vars.clear();
    for (const std::string& v : vars_of(lhs)) rhs_ctx.vars.push_back(v);
    TermPtr rhs = gen_term(rhs_ctx, rng);
    return Rule{std::move(lhs), std::move(rhs)};
}

GeneratedTrs gen_trs(const GenConfig& cfg, Rng& rng) {
    constexpr int kMaxResamples = 1000;
    // drawn once per emitted TRS: resampling a degenerate symbol draw must
    // not re-roll the left-linearity coin, or the emitted fraction drifts
    // away from the configured probability
    bool linear = rng.bernoulli(cfg.left_linear_prob);
    double comp = rng.uniform_real(cfg.complex_bias);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        int n_funs = static_cast<int>(rng.uniform_int(0, cfg.max_funs));
        int n_consts = static_cast<int>(rng.uniform_int(0, cfg.max_consts));
        int n_vars = static_cast<int>(rng.uniform_int(0, cfg.max_vars));
        int n_rules = static_cast<int>(rng.uniform_int(1, std::max(1, cfg.max_rules)));
        if (n_funs == 0 && n_consts == 0) continue;  // no legal lhs exists

        GenContext ctx;
        ctx.max_term_size = cfg.max_term_size;
        for (int i = 0; i < n_funs; ++i) {
            int arity = static_cast<int>(rng.uniform_int(1, std::max(1, cfg.max_arity)));
            ctx.funs.push_back(Symbol{"f" + std::to_string(i), arity});
        }
        for (int i = 0; i < n_consts; ++i) ctx.consts.push_back(Symbol{"c" + std::to_string(i), 0});
        for (int i = 0; i < n_vars; ++i) ctx.vars.push_back("x" + std::to_string(i));
        ctx.comp = comp;
        ctx.linear = linear;

        GeneratedTrs out;
        out.forced_left_linear = ctx.linear;
        out.comp = ctx.comp;
        bool ok = true;
        try {
            for (int i = 0; i < n_rules; ++i) out.trs.rules.push_back(gen_rule(ctx, rng));
        } catch (const std::runtime_error&) {
            ok = false;  // degenerate draw (size cap vs arities); resample
        }
        if (!ok) continue;
        // record exactly what occurs in the rules so printing round-trips
        std::function<void(const TermPtr&)> note = [&](const TermPtr& t) {
            if (t->is_var()) {
                out.trs.variables.insert(t->var_name());
                return;
            }
            out.trs.signature[t->root_name()] = static_cast<int>(t->args().size());
            for (const auto& a : t->args()) note(a);
        };
        for (const Rule& r : out.trs.rules) {
            note(r.lhs);
            note(r.rhs);
        }
        return out;
    }
    throw std::runtime_error("TRS generation failed repeatedly; configuration too degenerate");
}

GeneratedTrs gen_trs_at(const GenConfig& cfg, std::uint64_t index) {
    Rng stream = Rng(cfg.seed).split(index);
    GeneratedTrs out = gen_trs(cfg, stream);
    out.trs.name = "gen-" + std::to_string(cfg.seed) + "-" + std::to_string(index);
    return out;
}

}  // namespace confl
