#pragma once

// Recursive termination driver: grow the disjunctively well-founded
// candidate W, compute the proven-terminating part, recurse on the
// remainder until it is empty or stops shrinking.

#include <cstddef>
#include <vector>

#include "loopterm/absdom.hpp"
#include "loopterm/lincons.hpp"
#include "loopterm/logic.hpp"
#include "loopterm/ranking.hpp"
#include "loopterm/rel.hpp"

namespace loopterm {

struct Config {
    int max_depth = 10;
    int seed_level = 1;
    int z_iters = 5;
    int fixpoint_iters = 64;
    std::size_t dnf_cap = 512;
};

struct LevelInfo {
    DwfSet w_delta;
    Rel r_part;      // the trace-partitioned relation analyzed at this level
    Rel r_bad_full;  // complement of G before the settled-prefix reduction
    Rel r_bad;       // remainder passed to the next level
    int gfp_iters = 0;
};

enum class VerdictKind : std::uint8_t { Terminates, Problematic };

struct Verdict {
    VerdictKind kind = VerdictKind::Problematic;
    DwfSet w;
    Rel r_bad;
    std::vector<LevelInfo> levels;

    bool terminates() const { return kind == VerdictKind::Terminates; }
    int depth() const { return static_cast<int>(levels.size()); }
    int gfp_iters_total() const {
        int t = 0;
        for (const LevelInfo& l : levels) t += l.gfp_iters;
        return t;
    }
};

namespace detail {

inline Rel drop_unsat_paths(const Rel& r) {
    Dnf body;
    for (const Conj& rho : r.body.disjuncts)
        if (is_sat(rho)) body.disjuncts.push_back(rho);
    body.normalize();
    return Rel{r.vars, std::move(body)};
}

/// Point equality check robust to simplification noise: mutual
/// disjunct-wise entailment.
inline bool same_relation(const Rel& a, const Rel& b) {
    return dnf_entails_disjunctwise(a.body, b.body) && dnf_entails_disjunctwise(b.body, a.body);
}

/// Settled-prefix reduction. A group of disjuncts each contained in a
/// single well-founded member admits no infinite run of its own steps.
/// If additionally no kept disjunct can precede a group step, the group
/// steps form a finite prefix of every infinite trace, so removing the
/// group preserves the infinite-suffix guarantee.
inline Rel drop_settled(const Rel& r_bad, const DwfSet& w) {
    std::vector<Conj> kept = r_bad.body.disjuncts;
    bool changed = true;
    while (changed && !kept.empty()) {
        changed = false;
        for (const WfRel& m : w.members) {
            Conj mc = m.to_conj();
            std::vector<Conj> group, rest;
            for (const Conj& rho : kept) (conj_entails(rho, mc) ? group : rest).push_back(rho);
            if (group.empty() || group.size() == kept.size()) {
                if (group.size() == kept.size() && !group.empty()) {
                    kept.clear();
                    changed = true;
                    break;
                }
                continue;
            }
            Rel grp{r_bad.vars, Dnf{group}};
            bool reachable = false;
            for (const Conj& sigma : rest)
                if (!compose(Rel{r_bad.vars, Dnf{{sigma}}}, grp).is_false()) {
                    reachable = true;
                    break;
                }
            if (reachable) continue;
            kept = std::move(rest);
            changed = true;
            break;
        }
    }
    Dnf body{std::move(kept)};
    body.normalize();
    return Rel{r_bad.vars, std::move(body)};
}

}  // namespace detail

inline Verdict analyze_rel(Rel r, DwfSet w, const Config& cfg, int depth = 0) {
    r = detail::drop_unsat_paths(r);
    if (r.is_false()) return Verdict{VerdictKind::Terminates, std::move(w), r, {}};

    Verdict v;
    DwfSet delta = find_dwf_candidate(r, w);
    for (const WfRel& m : delta.members) w.add(m);

    Rel rp = partition_traces(r, w);
    PredSet preds = seed_predicates(w, rp, cfg.seed_level);
    int gfp_iters = 0;
    Rel g = compute_G(rp, w, preds, cfg.fixpoint_iters, &gfp_iters);
    Rel r_bad_full = Rel{r.vars, simplify_dnf(minus(rp, g).body)};
    Rel r_bad = detail::drop_settled(r_bad_full, w);

    LevelInfo info{delta, rp, r_bad_full, r_bad, gfp_iters};

    if (r_bad.is_false()) {
        v = Verdict{VerdictKind::Terminates, std::move(w), r_bad, {}};
        v.levels.push_back(std::move(info));
        return v;
    }
    bool progress = !detail::same_relation(r_bad, rp);
    if (!progress || depth + 1 >= cfg.max_depth) {
        v = Verdict{VerdictKind::Problematic, std::move(w), r_bad, {}};
        v.levels.push_back(std::move(info));
        return v;
    }
    v = analyze_rel(r_bad, std::move(w), cfg, depth + 1);
    v.levels.insert(v.levels.begin(), std::move(info));
    return v;
}

/// Root call with an empty candidate set.
inline Verdict prove_termination(const Rel& r, const Config& cfg = {}) {
    return analyze_rel(r, DwfSet{}, cfg);
}

}  // namespace loopterm
