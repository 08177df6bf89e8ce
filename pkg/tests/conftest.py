import numpy as np
import pytest

from deeprelu.relu_ir import INPUT_LAYER, Layer, NetworkGraph, OutputSpec, Unit


def random_net(seed: int, input_dim: int = 2, depth: int = 3, width: int = 3,
               n_outputs: int = 1, biases: bool = True) -> NetworkGraph:
    """Random DAG network whose units read inputs or any earlier layer."""
    rng = np.random.default_rng(seed)
    sizes = [int(rng.integers(1, width + 1)) for _ in range(depth)]

    def refs(n_layers):
        pool = [(INPUT_LAYER, i) for i in range(input_dim)]
        pool += [(li, u) for li in range(n_layers) for u in range(sizes[li])]
        k = int(rng.integers(1, min(4, len(pool)) + 1))
        picks = rng.choice(len(pool), size=k, replace=False)
        return tuple((pool[p], float(rng.normal())) for p in picks)

    layers = []
    for li, n in enumerate(sizes):
        units = []
        for _ in range(n):
            w = refs(li)
            if li > 0 and all(r[0] != li - 1 for r, _ in w):
                w = w + (((li - 1, 0), float(rng.normal())),)
            units.append(Unit(w, float(rng.normal()) if biases else 0.0))
        layers.append(Layer(tuple(units)))
    outs = [OutputSpec(refs(depth), float(rng.normal()) if biases else 0.0)
            for _ in range(n_outputs)]
    return NetworkGraph(input_dim, layers, outs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
