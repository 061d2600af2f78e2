import numpy as np
import pytest

from curveball.chains import ChainKind, IncompatibleKind
from curveball.experiment import (ConfigError, ExperimentConfig, default_kinds, plateau_step,
                                  run_experiment)
from curveball.generators import gen_erdos_renyi, gen_preferential_attachment
from curveball.graph_core import Flavor, degree_sequence, validate, write_graph


def test_er_extremes():
    assert gen_erdos_renyi(10, 0.0, True, 1).edges() == []
    full = gen_erdos_renyi(10, 1.0, True, 1)
    assert len(full.edges()) == 90 and validate(full) == []
    und = gen_erdos_renyi(10, 1.0, False, 1)
    assert len(und.edges()) == 45 and validate(und) == []
    with pytest.raises(ValueError):
        gen_erdos_renyi(3, 1.5, True, 1)


def test_er_binomial_concentration():
    g = np.random.default_rng(0)
    sd = np.sqrt(9900 * 0.1 * 0.9)
    for _ in range(20):
        arcs = len(gen_erdos_renyi(100, 0.1, True, g).edges())
        assert abs(arcs - 990) < 4 * sd


@pytest.mark.parametrize("directed", [True, False])
def test_pa_counts(directed):
    tree = gen_preferential_attachment(50, 1, directed, 3)
    assert len(tree.edges()) == 49 and validate(tree) == []
    for m in (2, 3, 5):
        g = gen_preferential_attachment(200, m, directed, m)
        assert len(g.edges()) == m * (200 - m) + m * (m - 1) // 2
        assert validate(g) == []


def test_pa_heavy_tail():
    g = np.random.default_rng(1)
    m = 1
    for _ in range(20):
        rep = gen_preferential_attachment(1000, m, False, g)
        deg = np.array(degree_sequence(rep).degrees)
        assert deg.max() > 3 * m * deg.mean()


def test_plateau_examples():
    grid = np.arange(0, 1000, 10)
    assert plateau_step(grid, np.full(100, 0.3)) == 0
    assert plateau_step(grid, np.linspace(0, 1, 100)) == 990
    series = np.minimum(grid, 300) / 300
    assert plateau_step(grid, series) == 300
    with pytest.raises(ValueError):
        plateau_step([], [])


def test_config_validation():
    gen = {"type": "erdos_renyi", "n": 10, "p": 0.3}
    with pytest.raises(ConfigError):
        ExperimentConfig(gen, steps=1000, every=30)
    with pytest.raises(ConfigError):
        ExperimentConfig(gen, steps=100, reps=0)
    with pytest.raises(ConfigError):
        ExperimentConfig({"type": "lattice"}, steps=10)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"generator": gen, "stepz": 3})
    assert ExperimentConfig(gen, steps=10_000).every == 100
    assert ExperimentConfig(gen, steps=1000).every == 10


def test_seed_from_env(monkeypatch):
    monkeypatch.setenv("CURVEBALL_SEED", "42")
    assert ExperimentConfig({"type": "erdos_renyi", "n": 5, "p": 0.5}, steps=10).seed == 42


def test_toml(tmp_path):
    p = tmp_path / "exp.toml"
    p.write_text('seed = 3\nsteps = 200\nreps = 2\nkinds = ["directed-curveball"]\n'
                 '[generator]\ntype = "erdos_renyi"\nn = 20\np = 0.2\ndirected = true\n')
    cfg = ExperimentConfig.from_toml(p)
    assert cfg.kinds == [ChainKind.DIRECTED_CURVEBALL] and cfg.every == 10


def test_zero_steps():
    cfg = ExperimentConfig({"type": "erdos_renyi", "n": 20, "p": 0.2}, steps=0, reps=3, seed=1)
    s = run_experiment(cfg)
    assert s.mean_csv().splitlines()[1:] == ["adjusted-switching,0,0.0",
                                            "good-shuffle-directed,0,0.0"]


def test_run_and_csv_deterministic():
    cfg = ExperimentConfig({"type": "erdos_renyi", "n": 30, "p": 0.2, "directed": False},
                           steps=300, reps=3, seed=5)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.long_csv() == b.long_csv() and a.mean_csv() == b.mean_csv()
    assert a.long_csv().startswith("kind,rep,step,score\n")
    assert a.kinds() == default_kinds(Flavor.UNDIRECTED)
    for scores in a.runs.values():
        assert scores[0] == 0 and ((0 <= scores) & (scores <= 1)).all()
    threaded = run_experiment(ExperimentConfig(cfg.generator, steps=300, reps=3, seed=5, jobs=3))
    assert threaded.long_csv() == a.long_csv()


def test_file_generator(tmp_path):
    rep = gen_erdos_renyi(15, 0.3, True, 2)
    write_graph(rep, tmp_path / "g.el")
    cfg = ExperimentConfig({"type": "file", "path": str(tmp_path / "g.el")},
                           kinds=["global-directed-curveball"], steps=50, reps=1)
    s = run_experiment(cfg)
    assert s.mean(ChainKind.GLOBAL_DIRECTED_CURVEBALL)[-1] > 0
    with pytest.raises(FileNotFoundError):
        run_experiment(ExperimentConfig({"type": "file", "path": str(tmp_path / "x")}, steps=1))


def test_incompatible_kind():
    cfg = ExperimentConfig({"type": "erdos_renyi", "n": 10, "p": 0.3, "directed": False},
                           kinds=["directed-curveball"], steps=10)
    with pytest.raises(IncompatibleKind):
        run_experiment(cfg)
