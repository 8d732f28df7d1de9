#!/usr/bin/env python3
"""Independent brute-force oracle for the frozen regression constants.

Works on frozensets of labels only; shares no code path with the Rust crate.
Run:  python3 crates/core/tests/oracle/oracle.py > crates/core/tests/fixtures/regression.json
"""
import itertools
import json
import math
import sys

LABELS = "abcdefgh"


def subsets(ground):
    ground = list(ground)
    for r in range(len(ground) + 1):
        for c in itertools.combinations(ground, r):
            yield frozenset(c)


def all_subsets_ordered(n):
    # subset i <-> bitmask i over LABELS[:n]
    return [frozenset(LABELS[j] for j in range(n) if i >> j & 1) for i in range(1 << n)]


def is_delta(fam):
    fam = set(fam)
    if not fam:
        return False
    for f1 in fam:
        for f2 in fam:
            d = f1 ^ f2
            for x in d:
                if not any((f1 ^ {x, y}) in fam for y in d):
                    return False
    return True


def is_even(fam):
    return len({len(f) % 2 for f in fam}) == 1


def is_equicardinal(fam):
    return len({len(f) for f in fam}) == 1


def is_separator(fam, ground, x):
    left = {f & x for f in fam}
    right = {f - x for f in fam}
    return set(fam) == {a | b for a in left for b in right}


def is_connected(fam, ground):
    ground = frozenset(ground)
    for x in subsets(ground):
        if x and x != ground and is_separator(fam, ground, x):
            return False
    return True


def delete(fam, e):
    if all(e in f for f in fam):
        return contract(fam, e)
    return frozenset(f for f in fam if e not in f)


def contract(fam, e):
    if all(e not in f for f in fam):
        return frozenset(f for f in fam)
    return frozenset(f - {e} for f in fam if e in f)


def twist(fam, a):
    return frozenset(f ^ a for f in fam)


def loop_complement(fam, e):
    fam = set(fam)
    extra = {f | {e} for f in fam if e not in f}
    return frozenset(fam ^ extra)


def is_vf_safe(fam, ground):
    start = frozenset(fam)
    seen = {start}
    todo = [start]
    while todo:
        cur = todo.pop()
        if not is_delta(cur):
            return False
        for e in ground:
            for nxt in (twist(cur, frozenset([e])), loop_complement(cur, e)):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return True


def families(n):
    subs = all_subsets_ordered(n)
    for code in range(1, 1 << (1 << n)):
        yield code, frozenset(subs[i] for i in range(1 << n) if code >> i & 1)


def matroid_by_independence(n):
    """Count labeled matroids via the independent-set axioms."""
    ground = LABELS[:n]
    subs = list(subsets(ground))
    count = 0
    for code in range(1, 1 << len(subs)):
        ind = {subs[i] for i in range(len(subs)) if code >> i & 1}
        if frozenset() not in ind:
            continue
        if any(any(s - {x} not in ind for x in s) for s in ind):
            continue
        ok = True
        for i1 in ind:
            for i2 in ind:
                if len(i1) < len(i2) and not any(i1 | {x} in ind for x in i2 - i1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def stirling_first(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return (n - 1) * stirling_first(n - 1, k) + stirling_first(n - 1, k - 1)


def fmt_family(fam):
    return sorted(sorted(f) for f in fam)


def main():
    out = {"oracle": "python3 crates/core/tests/oracle/oracle.py", "constants": {}}
    c = out["constants"]
    for n in range(1, 5):
        ground = LABELS[:n]
        total = even = conn = even_conn = mat = 0
        vf = vf_conn = None
        if n <= 3:
            vf = vf_conn = 0
        nontight_candidates = 0
        witnesses = 0
        first = None
        for code, fam in families(n):
            if not is_delta(fam):
                continue
            total += 1
            ev = is_even(fam)
            cn = is_connected(fam, ground)
            even += ev
            conn += cn
            even_conn += ev and cn
            mat += is_equicardinal(fam)
            if n <= 3:
                v = is_vf_safe(fam, ground)
                vf += v
                vf_conn += v and cn
            if cn and not ev:
                nontight_candidates += 1
                for e in ground:
                    rest = [x for x in ground if x != e]
                    if not is_connected(delete(fam, e), rest) and not is_connected(contract(fam, e), rest):
                        witnesses += 1
                        if first is None:
                            first = {"feasible": fmt_family(fam), "element": e}
                        break
        c[f"delta_count_n{n}"] = total
        c[f"delta_even_n{n}"] = even
        c[f"delta_connected_n{n}"] = conn
        c[f"delta_even_connected_n{n}"] = even_conn
        c[f"delta_matroid_n{n}"] = mat
        if n <= 3:
            c[f"delta_vf_safe_n{n}"] = vf
            c[f"delta_vf_safe_connected_n{n}"] = vf_conn
        c[f"nontight_search_n{n}"] = {
            "candidates": nontight_candidates,
            "violating_instances": witnesses,
            "first_witness": first,
        }
    for n in range(1, 5):
        c[f"matroid_count_n{n}"] = matroid_by_independence(n)
    # signed rotation systems with exactly v vertices, none isolated (unless m == 0, v == 1):
    # arrangements of 2m labeled half-edges into v disjoint cycles, times 2^m twist signs
    for v in range(1, 4):
        for m in range(0, 4):
            if m == 0:
                cnt = 1 if v == 1 else 0
            else:
                cnt = stirling_first(2 * m, v) * (2 ** m)
            c[f"ribbon_count_v{v}_m{m}"] = cnt

    # worked example values
    a, b, cc, d = "abcd"
    dex = frozenset(map(frozenset, [[], [a], [b], [cc], [d], [a, b], [cc, d], [a, b, cc], [a, b, d], [a, cc, d], [b, cc, d]]))
    ex = {}
    ex["dex_delete_d"] = fmt_family(delete(dex, d))
    ex["dex_contract_d"] = fmt_family(contract(dex, d))
    A = frozenset([a])
    bs = loop_complement(twist(loop_complement(dex, a), A), a)
    ex["dex_bar_star_a"] = fmt_family(bs)
    ex["dex_vf_safe"] = is_vf_safe(dex, "abcd")
    ex["dex_connected"] = is_connected(dex, "abcd")
    # Q3 of D_ex via the twisted basis rule
    memo = {}
    bases = []
    for picks in itertools.product(range(3), repeat=4):
        e1 = frozenset(LABELS[i] for i in range(4) if picks[i] == 1)
        e2 = frozenset(LABELS[i] for i in range(4) if picks[i] == 2)
        if e2 not in memo:
            fam = dex
            for x in sorted(e2):
                fam = loop_complement(fam, x)
            fam = twist(fam, e2)
            for x in sorted(e2):
                fam = loop_complement(fam, x)
            memo[e2] = fam
        if e1 in memo[e2]:
            bases.append("".join(LABELS[i] + "'" * picks[i] for i in range(4)))
    ex["q3_dex_bases"] = sorted(bases)
    bad = [[], [a], [cc], [b, cc]]
    ex["bad_family_is_delta"] = is_delta(frozenset(map(frozenset, bad)))
    out["examples"] = ex
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
