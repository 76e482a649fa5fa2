import numpy as np

from tenderscreen import models as M
from tenderscreen.features import TrainingData
from tenderscreen.models import neural
from tenderscreen.models.common import derive_rng, log_loss


def make_data(X, y):
    X = np.asarray(X, dtype=np.float64)
    return TrainingData(
        X=X,
        y=np.asarray(y, dtype=np.float64),
        feature_names=tuple(f"x{i}" for i in range(X.shape[1])),
        feature_mode="expanded",
        tender_ids=tuple(str(i) for i in range(len(y))),
    )


def test_zero_hidden_units_reduces_to_logit():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(200, 2))
    beta = np.array([0.8, -0.6])
    y = (rng.uniform(size=200) < 1 / (1 + np.exp(-(X @ beta)))).astype(float)
    data = make_data(X, y)
    logit = M.train_logit(data)
    net = M.train_neural_net(
        data,
        M.NeuralConfig(hidden_units=0, epochs=6000, learning_rate=1.0, batch_size=1000, seed=1),
    )
    w = np.asarray(net.parameters["weights"]["w"])
    b = net.parameters["weights"]["b"]
    coef = np.asarray(logit.parameters["coef"])
    assert np.max(np.abs(w - coef)) < 1e-3
    assert abs(b - logit.parameters["intercept"]) < 1e-3


def _finite_difference_check(hidden):
    rng = derive_rng(5)
    X = rng.normal(size=(5, 3))
    y = np.array([0.0, 1.0, 1.0, 0.0, 1.0])
    weights = neural.init_weights(3, hidden, rng)
    grads = neural.gradients(weights, X, y)
    h = 1e-5
    for key, g in grads.items():
        w = weights[key]
        garr = np.atleast_1d(np.asarray(g, dtype=np.float64))
        warr = np.atleast_1d(np.asarray(w, dtype=np.float64))
        it = np.nditer(warr, flags=["multi_index"])
        while not it.finished:
            ix = it.multi_index
            orig = warr[ix]
            for sign in (+1, -1):
                warr[ix] = orig + sign * h
                weights[key] = warr if isinstance(w, np.ndarray) else float(warr[0])
                p = neural.forward(weights, X)
                loss = log_loss(y, p)
                if sign > 0:
                    up = loss
                else:
                    down = loss
            warr[ix] = orig
            weights[key] = warr if isinstance(w, np.ndarray) else float(warr[0])
            numeric = (up - down) / (2 * h)
            analytic = garr[ix]
            denom = max(abs(numeric), abs(analytic), 1e-8)
            assert abs(numeric - analytic) / denom < 1e-4, (key, ix)
            it.iternext()


def test_gradients_match_finite_differences_hidden():
    _finite_difference_check(hidden=4)


def test_gradients_match_finite_differences_degenerate():
    _finite_difference_check(hidden=0)


def test_separable_two_d_training_accuracy():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(200, 2))
    y = (X[:, 0] + X[:, 1] > 0).astype(float)
    data = make_data(X, y)
    model = M.train_neural_net(data, M.NeuralConfig(hidden_units=6, epochs=800,
                                                    learning_rate=0.5, batch_size=32, seed=3))
    acc = ((model.predict_proba(X) >= 0.5) == y).mean()
    assert acc >= 0.95


def test_neural_deterministic(data_expanded):
    cfg = M.NeuralConfig(epochs=20, seed=9)
    a = M.train_neural_net(data_expanded, cfg)
    b = M.train_neural_net(data_expanded, cfg)
    assert a.serialize() == b.serialize()
