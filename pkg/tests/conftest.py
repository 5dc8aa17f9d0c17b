"""Shared brute-force oracles, written independently of the library code."""

import functools
import math


@functools.lru_cache(maxsize=None)
def _reachable_within(a, b, k):
    # explicit edit-script search: match, delete, insert or substitute the head
    if a == b:
        return True
    if k == 0:
        return False
    if a and b and a[0] == b[0] and _reachable_within(a[1:], b[1:], k):
        return True
    if a and _reachable_within(a[1:], b, k - 1):
        return True
    if b and _reachable_within(a, b[1:], k - 1):
        return True
    if a and b and _reachable_within(a[1:], b[1:], k - 1):
        return True
    return False


def edit_distance_oracle(a, b):
    k = 0
    while not _reachable_within(a, b, k):
        k += 1
    return k


def lcs_len_oracle(a, b):
    subs_a = {a[i:j] for i in range(len(a)) for j in range(i + 1, len(a) + 1)}
    subs_b = {b[i:j] for i in range(len(b)) for j in range(i + 1, len(b) + 1)}
    common = subs_a & subs_b
    return max((len(s) for s in common), default=0)


def char_cos_oracle(a, b):
    alphabet = sorted(set(a) | set(b))
    va = [a.count(ch) for ch in alphabet]
    vb = [b.count(ch) for ch in alphabet]
    if a == b:
        return 1.0
    dot = sum(x * y for x, y in zip(va, vb))
    if dot == 0:
        return 0.0
    na2 = sum(x * x for x in va)
    nb2 = sum(x * x for x in vb)
    return min(1.0, dot / math.sqrt(na2 * nb2))


def average_ranks_oracle(values):
    # counting formulation: rank = (#smaller) + (#equal + 1) / 2
    ranks = []
    for x in values:
        less = sum(1 for y in values if y < x)
        eq = sum(1 for y in values if y == x)
        ranks.append(less + (eq + 1) / 2.0)
    return ranks


def pearson_oracle(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(sum((x - mx) ** 2 for x in xs) * sum((y - my) ** 2 for y in ys))
    return num / den


def spearman_oracle(xs, ys):
    return pearson_oracle(average_ranks_oracle(xs), average_ranks_oracle(ys))


def all_strings(alphabet, max_len):
    out = []
    frontier = [""]
    for _ in range(max_len):
        frontier = [s + ch for s in frontier for ch in alphabet]
        out.extend(frontier)
    return out
