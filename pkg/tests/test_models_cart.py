import numpy as np

from tenderscreen import models as M
from tenderscreen.features import TrainingData
from tenderscreen.models.tree import Tree


def raw_data(X, y):
    from tenderscreen.screens import SCREEN_NAMES

    full = np.zeros((len(y), 8))
    full[:, : X.shape[1]] = X
    return TrainingData(
        X=full,
        y=np.asarray(y, dtype=np.float64),
        feature_names=SCREEN_NAMES,
        feature_mode="raw_screens",
        tender_ids=tuple(str(i) for i in range(len(y))),
    )


def test_cv_rule_recovers_depth_one_tree():
    # labels noiselessly follow "cv below the benchmark means suspicious"
    rng = np.random.default_rng(0)
    cv = rng.uniform(0.0, 0.12, size=400)
    X = np.column_stack([cv, rng.normal(size=400)])
    y = (cv < 0.053).astype(float)
    model = M.train_cart(raw_data(X, y), M.CartConfig(seed=1))
    tree = M.cart_tree(model)
    assert model.diagnostics["depth"] == 1
    assert model.feature_names[tree.feature[0]] == "cv"
    below = cv[cv < 0.053].max()
    above = cv[cv >= 0.053].min()
    assert below < tree.threshold[0] <= above
    # left of the threshold (low cv) predicts 1, right predicts 0
    assert tree.value[tree.left[0]] == 1.0
    assert tree.value[tree.right[0]] == 0.0


def test_pure_single_class_gives_single_leaf():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(30, 2))
    model = M.train_cart(raw_data(X, np.ones(30)))
    tree = M.cart_tree(model)
    assert tree.is_leaf(0)
    assert model.predict_proba(np.zeros(8)) == 1.0


def test_predict_proba_is_leaf_fraction():
    rng = np.random.default_rng(2)
    cv = rng.uniform(0.0, 0.12, size=300)
    noise = rng.uniform(size=300) < 0.1
    y = ((cv < 0.053) ^ noise).astype(float)
    X = np.column_stack([cv])
    model = M.train_cart(raw_data(X, y), M.CartConfig(seed=3))
    tree = M.cart_tree(model)
    x = np.zeros(8)
    x[0] = 0.04
    p = model.predict_proba(x)
    leaf = tree.apply(x[None, :])[0]
    assert p == tree.value[leaf]
    full = np.zeros((300, 8))
    full[:, 0] = cv
    leaves = tree.apply(full)
    frac = y[leaves == leaf].mean()
    assert p == frac


def test_pruning_only_simplifies():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 3))
    y = (rng.uniform(size=200) < 0.5).astype(float)  # noise: pruning should collapse hard
    pruned = M.train_cart(raw_data(X, y), M.CartConfig(seed=4))
    unpruned = M.train_cart(raw_data(X, y), M.CartConfig(seed=4, prune=False))
    assert pruned.diagnostics["n_leaves"] <= unpruned.diagnostics["n_leaves"]


def test_render_mentions_screen_name(cart_small):
    text = M.render_cart(cart_small)
    assert ">=" in text
    assert any(name in text for name in cart_small.feature_names)


def test_decision_path_walks_to_leaf(cart_small):
    x = np.zeros(8)
    x[0] = 0.02
    steps = M.cart_decision_path(cart_small, x)
    assert steps[-1]["leaf_class"] in (0, 1)
    assert all("test" in s for s in steps[:-1])


def test_cart_serialization_round_trip(cart_small):
    doc = cart_small.serialize()
    clone = M.ModelArtifact.from_json(__import__("json").loads(doc))
    assert clone.serialize() == doc
    x = np.full(8, 0.05)
    assert clone.predict_proba(x) == cart_small.predict_proba(x)
