import numpy as np

from tenderscreen import models as M


def small_super_config(seed=0, folds=4):
    bases = (
        M.ForestConfig(n_trees=15),
        M.LassoConfig(cv_folds=3, n_lambda=12),
        M.BoostConfig(n_rounds=25),
        M.NeuralConfig(epochs=60, learning_rate=0.1, batch_size=64),
    )
    return M.SuperConfig(seed=seed, folds=folds, base_learners=bases)


def test_weights_on_simplex(data_expanded):
    model = M.train_super_learner(data_expanded, small_super_config(seed=3))
    w = np.array(model.parameters["weights"])
    assert np.all(w >= 0)
    assert w.sum() == np.float64(1.0) or abs(w.sum() - 1.0) < 1e-12


def test_duplicated_base_learner_gets_uniform_weights(data_expanded):
    base = M.ForestConfig(n_trees=10)
    cfg = M.SuperConfig(seed=5, folds=4, base_learners=(base, base, base, base))
    model = M.train_super_learner(data_expanded, cfg)
    w = np.array(model.parameters["weights"])
    assert np.allclose(w, 0.25)
    single = M.train_super_learner(
        data_expanded, M.SuperConfig(seed=5, folds=4, base_learners=(base,))
    )
    probe = data_expanded.X[:40]
    assert np.allclose(model.predict_proba(probe), single.predict_proba(probe))


def test_ensemble_stacking_loss_beats_best_base(data_expanded):
    model = M.train_super_learner(data_expanded, small_super_config(seed=7))
    losses = model.diagnostics["stacking_squared_loss"]
    assert losses["ensemble"] <= min(losses["bases"]) + 1e-12


def test_failed_base_learner_gets_zero_weight(data_expanded):
    bases = (
        M.ForestConfig(n_trees=10),
        M.NeuralConfig(hidden_units=-1),  # invalid config: training raises
    )
    model = M.train_super_learner(
        data_expanded, M.SuperConfig(seed=1, folds=3, base_learners=bases)
    )
    assert model.parameters["weights"][1] == 0.0
    assert model.diagnostics["base_failures"][1] is not None
    assert model.parameters["weights"][0] == 1.0


def test_super_learner_deterministic(data_expanded):
    cfg = small_super_config(seed=11, folds=3)
    a = M.train_super_learner(data_expanded, cfg)
    b = M.train_super_learner(data_expanded, cfg)
    assert a.serialize() == b.serialize()
