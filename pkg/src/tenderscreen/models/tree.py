"""Binary decision trees on numeric features, grown greedily.

One array-backed structure serves three consumers: the pruned classification
tree of the manager's tool, the unpruned trees inside the random forest, and
the shallow regression trees of gradient boosting. Splits are of the form
x[feature] < threshold (left) vs >= threshold (right), thresholds are
midpoints between consecutive distinct sorted values, and ties in the split
criterion break toward the lower feature index, then the lower threshold,
so growing is fully deterministic.
"""

from __future__ import annotations

import math

import numpy as np


class Tree:
    """Flat node arrays; node 0 is the root, feature == -1 marks a leaf.

    value holds the class-1 training fraction (classification) or the mean
    target (regression) of the node's training samples.
    """

    __slots__ = ("feature", "threshold", "left", "right", "n", "value")

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.n: list[int] = []
        self.value: list[float] = []

    def _add_node(self, n: int, value: float) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.n.append(n)
        self.value.append(value)
        return len(self.feature) - 1

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def is_leaf(self, i: int) -> bool:
        return self.feature[i] < 0

    def depth(self) -> int:
        def rec(i):
            if self.is_leaf(i):
                return 0
            return 1 + max(rec(self.left[i]), rec(self.right[i]))

        return rec(0)

    def leaves(self) -> list[int]:
        return [i for i in range(self.n_nodes) if self.is_leaf(i)]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index for every row of X, routed iteratively."""
        X = np.asarray(X, dtype=np.float64)
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            f = feature[node]
            live = f >= 0
            if not live.any():
                return node
            rows = np.nonzero(live)[0]
            xv = X[rows, f[live]]
            goes_left = xv < threshold[node[live]]
            node[rows[goes_left]] = left[node[live]][goes_left]
            node[rows[~goes_left]] = right[node[live]][~goes_left]

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.value)[self.apply(X)]

    def to_json(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": [float(t) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "n": list(self.n),
            "value": [float(v) for v in self.value],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Tree":
        t = cls()
        t.feature = [int(v) for v in obj["feature"]]
        t.threshold = [float(v) for v in obj["threshold"]]
        t.left = [int(v) for v in obj["left"]]
        t.right = [int(v) for v in obj["right"]]
        t.n = [int(v) for v in obj["n"]]
        t.value = [float(v) for v in obj["value"]]
        return t


def _best_split_clf(X, y, idx, feats, min_leaf):
    """Lowest weighted-Gini split over candidate features.

    Returns (score, feature, threshold) or None. The score is the weighted
    Gini scaled by m/2, which is monotone-equivalent and exact in floats for
    integer class counts, keeping tie-breaks deterministic.
    """
    m = idx.size
    ysub = y[idx]
    best = None
    for f in feats:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        boundaries = xs[1:] > xs[:-1]
        if min_leaf > 1:
            nl_arr = np.arange(1, m)
            boundaries = boundaries & (nl_arr >= min_leaf) & (m - nl_arr >= min_leaf)
        if not boundaries.any():
            continue
        cum1 = np.cumsum(ysub[order])[:-1]
        nl = np.arange(1, m, dtype=np.float64)
        nr = m - nl
        c1l = cum1
        c1r = float(ysub.sum()) - c1l
        score = c1l * (nl - c1l) / nl + c1r * (nr - c1r) / nr
        score = np.where(boundaries, score, np.inf)
        k = int(np.argmin(score))
        s = float(score[k])
        if math.isinf(s):
            continue
        if best is None or s < best[0]:
            thr = (float(xs[k]) + float(xs[k + 1])) / 2.0
            best = (s, int(f), thr)
    return best


def _best_split_reg(X, y, idx, feats, min_leaf):
    """Lowest summed-SSE split over candidate features."""
    m = idx.size
    ysub = y[idx]
    best = None
    for f in feats:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        boundaries = xs[1:] > xs[:-1]
        if min_leaf > 1:
            nl_arr = np.arange(1, m)
            boundaries = boundaries & (nl_arr >= min_leaf) & (m - nl_arr >= min_leaf)
        if not boundaries.any():
            continue
        ys = ysub[order]
        cs = np.cumsum(ys)[:-1]
        cs2 = np.cumsum(ys * ys)[:-1]
        tot = float(ys.sum())
        tot2 = float((ys * ys).sum())
        nl = np.arange(1, m, dtype=np.float64)
        nr = m - nl
        sse = (cs2 - cs * cs / nl) + ((tot2 - cs2) - (tot - cs) ** 2 / nr)
        sse = np.where(boundaries, sse, np.inf)
        k = int(np.argmin(sse))
        s = float(sse[k])
        if math.isinf(s):
            continue
        if best is None or s < best[0]:
            thr = (float(xs[k]) + float(xs[k + 1])) / 2.0
            best = (s, int(f), thr)
    return best


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    criterion: str = "gini",
    min_leaf: int = 1,
    max_depth: int | None = None,
    mtry: int | None = None,
    rng: np.random.Generator | None = None,
) -> Tree:
    """Grow a tree until purity, depth or min_leaf stops it.

    mtry restricts every split to that many features sampled without
    replacement from rng (random-forest style); None searches all features.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    if mtry is not None and rng is None:
        raise ValueError("mtry sampling needs an rng")
    splitter = _best_split_clf if criterion == "gini" else _best_split_reg

    tree = Tree()
    root = tree._add_node(n, float(y.mean()))
    stack = [(root, np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ysub = y[idx]
        m = idx.size
        pure = ysub.min() == ysub.max()
        if pure or m < 2 * min_leaf or (max_depth is not None and depth >= max_depth):
            continue
        if mtry is not None and mtry < p:
            feats = np.sort(rng.choice(p, size=mtry, replace=False))
        else:
            feats = np.arange(p)
        found = splitter(X, y, idx, feats, min_leaf)
        if found is None:
            continue
        _, f, thr = found
        mask = X[idx, f] < thr
        left_idx, right_idx = idx[mask], idx[~mask]
        tree.feature[node] = f
        tree.threshold[node] = thr
        lid = tree._add_node(left_idx.size, float(y[left_idx].mean()))
        rid = tree._add_node(right_idx.size, float(y[right_idx].mean()))
        tree.left[node], tree.right[node] = lid, rid
        stack.append((rid, right_idx, depth + 1))
        stack.append((lid, left_idx, depth + 1))
    return tree


# --- cost-complexity pruning -------------------------------------------------


def _leaf_error_counts(tree: Tree) -> list[float]:
    """Misclassified training samples if each node were made a leaf."""
    out = []
    for n, v in zip(tree.n, tree.value):
        c1 = v * n
        out.append(min(c1, n - c1))
    return out


def _subtree_stats(tree: Tree):
    """Per node: (#leaves, summed leaf error count) of its subtree."""
    n_nodes = tree.n_nodes
    leaves = [0] * n_nodes
    err = [0.0] * n_nodes
    node_err = _leaf_error_counts(tree)
    for i in range(n_nodes - 1, -1, -1):  # children always have higher ids
        if tree.is_leaf(i):
            leaves[i] = 1
            err[i] = node_err[i]
        else:
            leaves[i] = leaves[tree.left[i]] + leaves[tree.right[i]]
            err[i] = err[tree.left[i]] + err[tree.right[i]]
    return leaves, err, node_err


def _collapse(tree: Tree, nodes: set[int]) -> Tree:
    """Copy of tree with the given internal nodes turned into leaves."""
    pruned = Tree()

    def rec(i):
        nid = pruned._add_node(tree.n[i], tree.value[i])
        if tree.is_leaf(i) or i in nodes:
            return nid
        pruned.feature[nid] = tree.feature[i]
        pruned.threshold[nid] = tree.threshold[i]
        pruned.left[nid] = rec(tree.left[i])
        pruned.right[nid] = rec(tree.right[i])
        return nid

    rec(0)
    return pruned


def prune_path(tree: Tree) -> list[tuple[float, Tree]]:
    """Weakest-link sequence [(alpha, subtree)] with alphas increasing.

    The first entry is (0, full tree); the last collapses to the root.
    Alphas are per-sample error rates (error count / root n).
    """
    n_root = tree.n[0]
    path = [(0.0, tree)]
    current = tree
    while not current.is_leaf(0):
        leaves, err, node_err = _subtree_stats(current)
        internal = [i for i in range(current.n_nodes) if not current.is_leaf(i)]
        g = {
            i: (node_err[i] - err[i]) / (leaves[i] - 1) / n_root for i in internal
        }
        g_min = min(g.values())
        # collapse every node at the minimum simultaneously, parents first
        to_cut = {i for i, v in g.items() if v <= g_min * (1 + 1e-12) + 1e-15}
        current = _collapse(current, to_cut)
        path.append((g_min, current))
    return path


def prune_at(tree: Tree, alpha: float) -> Tree:
    """Smallest subtree whose every weakest link exceeds alpha."""
    best = tree
    for a, sub in prune_path(tree):
        if a <= alpha:
            best = sub
        else:
            break
    return best


def render_tree(tree: Tree, feature_names, class_names=("0", "1"), digits=4) -> str:
    """Indented text diagram walkable by a non-data-scientist.

    Internal nodes print the test "name >= threshold?"; the yes branch is
    the subtree for values at or above the threshold.
    """
    lines: list[str] = []

    def leaf_label(i):
        p1 = tree.value[i]
        cls = class_names[1] if p1 >= 0.5 else class_names[0]
        return f"{cls} (p={p1:.3f}, n={tree.n[i]})"

    def rec(i, indent):
        pad = "  " * indent
        if tree.is_leaf(i):
            lines.append(f"{pad}-> {leaf_label(i)}")
            return
        name = feature_names[tree.feature[i]]
        thr = round(tree.threshold[i], digits)
        lines.append(f"{pad}{name} >= {thr:g}?")
        lines.append(f"{pad}yes:")
        rec(tree.right[i], indent + 1)
        lines.append(f"{pad}no:")
        rec(tree.left[i], indent + 1)

    rec(0, 0)
    return "\n".join(lines)


def decision_path(tree: Tree, x: np.ndarray, feature_names) -> list[dict]:
    """Node-by-node trace for one sample, for the manager UI."""
    steps = []
    i = 0
    while not tree.is_leaf(i):
        f, thr = tree.feature[i], tree.threshold[i]
        taken_yes = x[f] >= thr
        steps.append(
            {
                "feature": feature_names[f],
                "threshold": thr,
                "value": float(x[f]),
                "test": f"{feature_names[f]} >= {round(thr, 4):g}?",
                "taken": "yes" if taken_yes else "no",
            }
        )
        i = tree.right[i] if taken_yes else tree.left[i]
    steps.append(
        {
            "leaf_class": 1 if tree.value[i] >= 0.5 else 0,
            "leaf_probability": tree.value[i],
            "samples": tree.n[i],
        }
    )
    return steps
