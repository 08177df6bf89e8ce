import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deeprelu.errors import ConstructionError, InputError
from deeprelu.relu_ir import (
    INPUT_LAYER, Affine, GraphBuilder, Layer, NetworkGraph, OutputSpec, Unit, compose, evaluate,
    from_json, identity_net, linear_combine, load, parallel, precompose_affine, save, to_json,
)

from conftest import random_net


def shift_net(shift: float) -> NetworkGraph:
    """Single unit relu(x + shift) read out with weight 1."""
    return NetworkGraph(1, [Layer((Unit((((INPUT_LAYER, 0), 1.0),), shift),))],
                        OutputSpec((((0, 0), 1.0),)))


def scale_net(c: float) -> NetworkGraph:
    """``c * x`` through the identity pair: depth 1, size 2."""
    b = GraphBuilder(1)
    x = b.input(0)
    return b.build([c * b.relu(x) - c * b.relu(-x)])


class TestEvaluate:
    def test_relu_positive_branch(self):
        assert evaluate(shift_net(-1.0), np.array([3.0]))[0] == 2.0

    def test_relu_negative_branch(self):
        assert evaluate(shift_net(-1.0), np.array([0.0]))[0] == 0.0

    def test_identity(self):
        assert evaluate(identity_net(), np.array([-2.5]))[0] == -2.5

    def test_batch_matches_pointwise(self, rng):
        net = random_net(3, input_dim=2, depth=4)
        x = rng.uniform(-2, 2, size=(50, 2))
        batch = evaluate(net, x)
        for i in range(5):
            assert np.array_equal(batch[i], evaluate(net, x[i]))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            evaluate(identity_net(2), np.array([1.0, 2.0, 3.0]))

    def test_reference_forward_pass(self, rng):
        # Naive per-unit loop over the public layer description.
        net = random_net(7, input_dim=3, depth=5, width=4, n_outputs=2)
        x = rng.normal(size=3)
        vals = {}
        for li, layer in enumerate(net.layers):
            for ui, unit in enumerate(layer.units):
                acc = sum(c * (x[u] if l == INPUT_LAYER else vals[(l, u)]) for (l, u), c in unit.weights)
                vals[(li, ui)] = max(0.0, acc + unit.bias)
        expect = [sum(c * (x[u] if l == INPUT_LAYER else vals[(l, u)]) for (l, u), c in o.weights) + o.bias
                  for o in net.output]
        np.testing.assert_allclose(evaluate(net, x), expect, rtol=1e-13, atol=1e-13)

    def test_bitwise_reproducible(self, rng):
        net = random_net(11, depth=6)
        x = rng.normal(size=(200, 2))
        assert np.array_equal(evaluate(net, x), evaluate(net, x.copy()))


class TestValidation:
    def test_forward_reference_rejected(self):
        with pytest.raises(ConstructionError):
            NetworkGraph(1, [Layer((Unit((((0, 0), 1.0),)),))], OutputSpec(()))

    def test_empty_layer_rejected(self):
        with pytest.raises(ConstructionError):
            Layer(())

    def test_input_out_of_range(self):
        with pytest.raises(ConstructionError):
            NetworkGraph(1, [Layer((Unit((((INPUT_LAYER, 1), 1.0),)),))], OutputSpec(()))

    def test_skip_connection_allowed(self):
        layers = [Layer((Unit((((INPUT_LAYER, 0), 1.0),)),)),
                  Layer((Unit((((0, 0), 1.0),)),)),
                  Layer((Unit((((0, 0), 1.0), ((INPUT_LAYER, 0), -1.0))),))]
        net = NetworkGraph(1, layers, OutputSpec((((2, 0), 1.0), ((1, 0), 1.0))))
        assert net.depth == 3 and net.size == 3
        assert evaluate(net, np.array([2.0]))[0] == 2.0


class TestCompose:
    def test_identity_identity(self):
        net = compose(identity_net(), identity_net())
        assert evaluate(net, np.array([1.0]))[0] == 1.0
        assert (net.depth, net.size) == (2, 4)

    def test_shift_after_scale(self):
        net = compose(shift_net(-1.0), scale_net(2.0))
        assert evaluate(net, np.array([1.0]))[0] == 1.0

    def test_arity_mismatch(self):
        with pytest.raises(ConstructionError):
            compose(identity_net(2), identity_net(1))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 4))
    def test_additivity_and_values(self, s1, s2, d1, d2):
        inner = random_net(s1, input_dim=2, depth=d1, n_outputs=2)
        outer = random_net(s2, input_dim=2, depth=d2)
        net = compose(outer, inner)
        assert net.depth == outer.depth + inner.depth
        assert net.size == outer.size + inner.size
        x = np.random.default_rng(s1 + s2).normal(size=(20, 2))
        np.testing.assert_allclose(evaluate(net, x), evaluate(outer, evaluate(inner, x)),
                                   rtol=1e-12, atol=1e-12)


class TestParallel:
    def test_values(self):
        assert evaluate(parallel([identity_net(), identity_net()]), np.array([3.0])).tolist() == [3.0, 3.0]

    def test_depth_max_size_sum(self):
        a = compose(identity_net(), identity_net())
        b = compose(identity_net(), compose(identity_net(), compose(identity_net(), compose(identity_net(), identity_net()))))
        net = parallel([a, b])
        assert a.depth == 2 and b.depth == 5 and net.depth == 5
        c = compose(scale_net(1.0), scale_net(3.0))
        assert c.size == 4
        six = parallel([identity_net(), identity_net(), identity_net()])
        assert parallel([c, six]).size == 10

    def test_errors(self):
        with pytest.raises(ConstructionError):
            parallel([])
        with pytest.raises(ConstructionError):
            parallel([identity_net(1), identity_net(2)])

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 10_000), min_size=1, max_size=4))
    def test_random(self, seeds):
        nets = [random_net(s, input_dim=2, depth=1 + s % 4) for s in seeds]
        net = parallel(nets)
        assert net.depth == max(n.depth for n in nets)
        assert net.size == sum(n.size for n in nets)
        x = np.random.default_rng(seeds[0]).normal(size=(10, 2))
        expect = np.concatenate([evaluate(n, x) for n in nets], axis=1)
        np.testing.assert_array_equal(evaluate(net, x), expect)


class TestLinearCombine:
    def test_affine(self):
        assert evaluate(linear_combine([identity_net()], [2.0], 1.0), np.array([3.0]))[0] == 7.0

    def test_cancellation(self, rng):
        net = linear_combine([identity_net(), identity_net()], [1.0, -1.0])
        assert np.all(evaluate(net, rng.normal(size=(100, 1))) == 0.0)

    def test_errors(self):
        with pytest.raises(ConstructionError):
            linear_combine([identity_net()], [1.0, 2.0])
        with pytest.raises(ConstructionError):
            linear_combine([identity_net(2)], [1.0])

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 10_000), min_size=1, max_size=4), st.floats(-3, 3))
    def test_random(self, seeds, bias):
        nets = [random_net(s, input_dim=2, depth=1 + s % 3) for s in seeds]
        coeffs = [0.5 + i for i in range(len(nets))]
        net = linear_combine(nets, coeffs, bias)
        assert net.size == sum(n.size for n in nets)
        x = np.random.default_rng(seeds[0]).normal(size=(10, 2))
        expect = bias + sum(c * evaluate(n, x)[:, 0] for n, c in zip(nets, coeffs))
        np.testing.assert_allclose(evaluate(net, x)[:, 0], expect, rtol=1e-12, atol=1e-12)


class TestPrecompose:
    def test_half(self):
        assert evaluate(precompose_affine(identity_net(), [[0.5]]), np.array([4.0]))[0] == 2.0

    def test_dot_product(self):
        w = np.array([[0.3, -1.7]])
        net = random_net(5, input_dim=1, depth=3)
        out = evaluate(precompose_affine(net, w), np.array([1.0, 1.0]))
        assert out[0] == pytest.approx(evaluate(net, np.array([w.sum()]))[0], rel=1e-13)

    def test_shape_mismatch(self):
        with pytest.raises(ConstructionError):
            precompose_affine(identity_net(2), [[1.0, 2.0]])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 3))
    def test_resources_unchanged(self, seed, new_dim):
        net = random_net(seed, input_dim=2)
        g = np.random.default_rng(seed)
        A, b = g.normal(size=(2, new_dim)), g.normal(size=2)
        pre = precompose_affine(net, A, b)
        assert (pre.depth, pre.size) == (net.depth, net.size)
        x = g.normal(size=(10, new_dim))
        np.testing.assert_allclose(evaluate(pre, x), evaluate(net, x @ A.T + b), rtol=1e-12, atol=1e-12)


class TestHomogeneity:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.01, 100.0))
    def test_bias_free_positive_homogeneity(self, seed, lam):
        net = random_net(seed, input_dim=3, depth=4, biases=False)
        x = np.random.default_rng(seed).normal(size=(10, 3))
        np.testing.assert_allclose(evaluate(net, lam * x), lam * evaluate(net, x), rtol=1e-11, atol=1e-12)


class TestAffine:
    def test_interleave_cancels_exactly(self):
        a = Affine([3, 4], [0.1, 0.7], 0.2)
        assert Affine.interleave(a, -a).merged().coeffs.tolist() == [0.0, 0.0]

    def test_merged_first_occurrence(self):
        e = Affine([5, 2, 5], [1.0, 2.0, 3.0]).merged()
        assert e.ids.tolist() == [5, 2] and e.coeffs.tolist() == [4.0, 2.0]


class TestSerialization:
    def test_schema(self):
        doc = json.loads(to_json(shift_net(-1.0)))
        assert doc["input_dim"] == 1
        assert doc["layers"][0][0] == {"weights": [{"layer": -1, "unit": 0, "coeff": 1.0}], "bias": -1.0}
        assert doc["output"]["weights"] == [{"layer": 0, "unit": 0, "coeff": 1.0}]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 3))
    def test_round_trip_bit_faithful(self, seed, n_out):
        net = random_net(seed, input_dim=2, depth=4, n_outputs=n_out)
        text = to_json(net)
        back = from_json(text)
        assert to_json(back) == text
        assert (back.depth, back.size, back.n_outputs) == (net.depth, net.size, net.n_outputs)
        x = np.random.default_rng(seed).normal(size=(20, 2))
        np.testing.assert_array_equal(evaluate(back, x), evaluate(net, x))

    def test_file_round_trip(self, tmp_path):
        net = compose(identity_net(), scale_net(1.0 / 3.0))
        save(net, tmp_path / "n.json")
        assert to_json(load(tmp_path / "n.json")) == to_json(net)

    def test_non_finite_rejected(self):
        with pytest.raises(ConstructionError):
            to_json(scale_net(float("inf")))
