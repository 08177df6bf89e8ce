"""Deep ReLU networks with connections between non-neighboring layers.

A :class:`NetworkGraph` is a stack of hidden layers of ReLU units followed by
an affine output functional. Any unit may read raw inputs or units of *any*
strictly earlier layer, so constructions never pay for identity pass-through
units. Depth is the number of hidden layers and size the number of hidden
units.

Networks are stored as flat arrays (one CSR row per unit, units sorted
layer-major) and are immutable once built. New networks are assembled with a
:class:`GraphBuilder`, which places units as early as their inputs allow and
can splice in whole sub-networks with affine substitution of their inputs.

Source references follow the serialized schema: ``(layer, unit)`` with
``layer = -1`` for a raw input coordinate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._forward import forward
from .errors import ConstructionError, InputError

INPUT_LAYER = -1

SourceRef = tuple[int, int]


@dataclass(frozen=True)
class Unit:
    """One hidden unit ``max(0, sum(coeff * source) + bias)``."""

    weights: tuple[tuple[SourceRef, float], ...]
    bias: float = 0.0


@dataclass(frozen=True)
class Layer:
    units: tuple[Unit, ...]

    def __post_init__(self):
        if len(self.units) == 0:
            raise ConstructionError("a layer must contain at least one unit")


@dataclass(frozen=True)
class OutputSpec:
    """Affine output functional (no activation)."""

    weights: tuple[tuple[SourceRef, float], ...]
    bias: float = 0.0


class Affine:
    """Affine expression ``const + sum(coeffs[i] * node[ids[i]])`` over graph nodes.

    Node ids are builder-global: ``0..input_dim-1`` are raw inputs and larger
    ids are hidden units. Term order is preserved by every operation because
    evaluation sums terms in exactly this order.
    """

    __slots__ = ("ids", "coeffs", "const")

    def __init__(self, ids=(), coeffs=(), const: float = 0.0):
        self.ids = np.asarray(ids, dtype=np.int64).reshape(-1)
        self.coeffs = np.asarray(coeffs, dtype=np.float64).reshape(-1)
        self.const = float(const)
        if self.ids.shape != self.coeffs.shape:
            raise ConstructionError("ids and coeffs must have equal length")

    @classmethod
    def constant(cls, value: float) -> "Affine":
        return cls(const=value)

    def __len__(self) -> int:
        return self.ids.shape[0]

    def __repr__(self) -> str:
        return f"Affine(n_terms={len(self)}, const={self.const!r})"

    def __add__(self, other):
        if isinstance(other, Affine):
            return Affine(
                np.concatenate([self.ids, other.ids]),
                np.concatenate([self.coeffs, other.coeffs]),
                self.const + other.const,
            )
        return Affine(self.ids, self.coeffs, self.const + float(other))

    __radd__ = __add__

    def __neg__(self):
        return Affine(self.ids, -self.coeffs, -self.const)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scale):
        scale = float(scale)
        return Affine(self.ids, scale * self.coeffs, scale * self.const)

    __rmul__ = __mul__

    def __truediv__(self, scale):
        return self * (1.0 / float(scale))

    def merged(self) -> "Affine":
        """Combine repeated node ids, keeping first-occurrence order."""
        if len(self) == 0:
            return Affine(const=self.const)
        uniq, first, inverse = np.unique(self.ids, return_index=True, return_inverse=True)
        sums = np.zeros(uniq.shape[0])
        np.add.at(sums, inverse, self.coeffs)
        order = np.argsort(first, kind="stable")
        return Affine(uniq[order], sums[order], self.const)

    @staticmethod
    def interleave(a: "Affine", b: "Affine") -> "Affine":
        """Alternate the terms of two equally long expressions: a0, b0, a1, b1, ...

        When ``a`` and ``b`` are mirror branches with negated coefficients and
        bitwise-equal node values, each adjacent pair cancels exactly.
        """
        if len(a) != len(b):
            raise ConstructionError("interleaved expressions must have equal length")
        ids = np.stack([a.ids, b.ids], axis=1).reshape(-1)
        coeffs = np.stack([a.coeffs, b.coeffs], axis=1).reshape(-1)
        return Affine(ids, coeffs, a.const + b.const)


def _as_affine(value) -> Affine:
    return value if isinstance(value, Affine) else Affine.constant(float(value))


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


class NetworkGraph:
    """Immutable deep ReLU network with skip connections.

    Parameters
    ----------
    input_dim : int
        Number of raw inputs.
    layers : sequence of Layer
        Hidden layers in evaluation order.
    output : OutputSpec or sequence of OutputSpec
        Output functional(s); a sequence gives a vector-valued network.
    """

    __slots__ = (
        "input_dim", "_unit_layer", "_layer_start", "_bias", "_indptr", "_src",
        "_coef", "_out_indptr", "_out_src", "_out_coef", "_out_bias",
    )

    def __init__(self, input_dim: int, layers: Sequence[Layer], output):
        if isinstance(output, OutputSpec):
            output = [output]
        layer_sizes = [len(layer.units) for layer in layers]
        starts = np.concatenate([[0], np.cumsum(layer_sizes)]).astype(np.int64)

        def node_id(ref, current_layer):
            layer, unit = int(ref[0]), int(ref[1])
            if layer == INPUT_LAYER:
                if not 0 <= unit < input_dim:
                    raise ConstructionError(f"input reference {ref} out of range")
                return unit
            if not 0 <= layer < current_layer or not 0 <= unit < layer_sizes[layer]:
                raise ConstructionError(
                    f"reference {ref} is not an earlier unit (reader layer {current_layer})"
                )
            return input_dim + int(starts[layer]) + unit

        unit_layer, bias, counts, src, coef = [], [], [], [], []
        for li, layer in enumerate(layers):
            for unit in layer.units:
                unit_layer.append(li)
                bias.append(float(unit.bias))
                counts.append(len(unit.weights))
                for ref, c in unit.weights:
                    src.append(node_id(ref, li))
                    coef.append(float(c))
        out_counts, out_src, out_coef, out_bias = [], [], [], []
        for spec in output:
            out_bias.append(float(spec.bias))
            out_counts.append(len(spec.weights))
            for ref, c in spec.weights:
                out_src.append(node_id(ref, len(layers)))
                out_coef.append(float(c))
        self._init_arrays(
            int(input_dim),
            np.asarray(unit_layer, dtype=np.int64),
            np.asarray(bias, dtype=np.float64),
            np.concatenate([[0], np.cumsum(counts)]).astype(np.int64),
            np.asarray(src, dtype=np.int64),
            np.asarray(coef, dtype=np.float64),
            np.concatenate([[0], np.cumsum(out_counts)]).astype(np.int64),
            np.asarray(out_src, dtype=np.int64),
            np.asarray(out_coef, dtype=np.float64),
            np.asarray(out_bias, dtype=np.float64),
        )

    @classmethod
    def _from_arrays(cls, *arrays) -> "NetworkGraph":
        net = cls.__new__(cls)
        net._init_arrays(*arrays)
        return net

    def _init_arrays(self, input_dim, unit_layer, bias, indptr, src, coef,
                     out_indptr, out_src, out_coef, out_bias):
        if input_dim < 1:
            raise ConstructionError("input_dim must be positive")
        n_units = unit_layer.shape[0]
        steps = np.diff(unit_layer)
        if n_units and (unit_layer[0] != 0 or np.any((steps != 0) & (steps != 1))):
            raise ConstructionError("units must be sorted layer-major with no empty layer")
        depth = int(unit_layer[-1]) + 1 if n_units else 0
        layer_start = np.searchsorted(unit_layer, np.arange(depth + 1)).astype(np.int64)
        if src.size:
            limit = input_dim + layer_start[unit_layer]
            row = np.repeat(np.arange(n_units), np.diff(indptr))
            if np.any(src < 0) or np.any(src >= limit[row]):
                raise ConstructionError("unit weights must reference inputs or earlier layers")
        if out_src.size and (np.any(out_src < 0) or np.any(out_src >= input_dim + n_units)):
            raise ConstructionError("output references an unknown node")
        if out_bias.shape[0] < 1:
            raise ConstructionError("a network needs at least one output")
        for name, value in (("bias", bias), ("weights", coef), ("output", out_coef),
                            ("output bias", out_bias)):
            if not np.all(np.isfinite(value)):
                raise ConstructionError(f"non-finite {name}")
        self.input_dim = input_dim
        self._unit_layer = unit_layer
        self._layer_start = layer_start
        self._bias = bias
        self._indptr = indptr
        self._src = src
        self._coef = coef
        self._out_indptr = out_indptr
        self._out_src = out_src
        self._out_coef = out_coef
        self._out_bias = out_bias
        _freeze(unit_layer, layer_start, bias, indptr, src, coef,
                out_indptr, out_src, out_coef, out_bias)

    # -- bookkeeping -------------------------------------------------------

    @property
    def depth(self) -> int:
        """Number of hidden layers."""
        return self._layer_start.shape[0] - 1

    @property
    def size(self) -> int:
        """Total number of hidden units."""
        return self._bias.shape[0]

    @property
    def n_outputs(self) -> int:
        return self._out_bias.shape[0]

    @property
    def n_weights(self) -> int:
        return self._src.shape[0] + self._out_src.shape[0]

    @property
    def max_abs_weight(self) -> float:
        """Largest weight magnitude (diagnostic only; no bound is imposed)."""
        both = np.concatenate([self._coef, self._out_coef])
        return float(np.max(np.abs(both))) if both.size else 0.0

    def layer_sizes(self) -> list[int]:
        return np.diff(self._layer_start).tolist()

    def _ref(self, node: int) -> SourceRef:
        if node < self.input_dim:
            return (INPUT_LAYER, int(node))
        u = node - self.input_dim
        layer = int(self._unit_layer[u])
        return (layer, int(u - self._layer_start[layer]))

    def _row(self, indptr, src, coef, k):
        lo, hi = indptr[k], indptr[k + 1]
        return tuple((self._ref(s), float(c)) for s, c in zip(src[lo:hi], coef[lo:hi]))

    @property
    def layers(self) -> tuple[Layer, ...]:
        out = []
        for li in range(self.depth):
            units = tuple(
                Unit(self._row(self._indptr, self._src, self._coef, u), float(self._bias[u]))
                for u in range(self._layer_start[li], self._layer_start[li + 1])
            )
            out.append(Layer(units))
        return tuple(out)

    @property
    def output(self) -> tuple[OutputSpec, ...]:
        return tuple(
            OutputSpec(self._row(self._out_indptr, self._out_src, self._out_coef, k),
                       float(self._out_bias[k]))
            for k in range(self.n_outputs)
        )

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self) -> str:
        return (f"NetworkGraph(input_dim={self.input_dim}, n_outputs={self.n_outputs}, "
                f"depth={self.depth}, size={self.size})")


def evaluate(net: NetworkGraph, x) -> np.ndarray:
    """Exact forward pass.

    Parameters
    ----------
    net : NetworkGraph
    x : array_like
        One point of shape ``(input_dim,)`` or a batch ``(n, input_dim)``.

    Returns
    -------
    ndarray
        Outputs of shape ``(n_outputs,)`` or ``(n, n_outputs)``.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x.reshape(1, -1) if single else x
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise InputError(f"expected points of dimension {net.input_dim}, got shape {x.shape}")
    out = forward(np.ascontiguousarray(batch), net._bias, net._indptr, net._src, net._coef,
                  net._out_indptr, net._out_src, net._out_coef, net._out_bias)
    return out[0] if single else out


# -- builder ---------------------------------------------------------------


def _substitute(indptr, src, coef, n_sub_inputs, base, args):
    """Rewrite CSR rows of a sub-network into builder node ids.

    References to sub-network input ``i`` are replaced in place by the terms of
    ``args[i]``; references to sub-network units are shifted by ``base``.
    Returns per-row term counts, new ids, new coefficients and the constant
    each row picks up from the argument constants.
    """
    n_rows = indptr.shape[0] - 1
    row_of = np.repeat(np.arange(n_rows), np.diff(indptr))
    is_in = src < n_sub_inputs
    arg_len = np.array([len(a) for a in args], dtype=np.int64)
    arg_start = np.concatenate([[0], np.cumsum(arg_len)[:-1]]).astype(np.int64)
    arg_ids = np.concatenate([a.ids for a in args]) if args else np.zeros(0, np.int64)
    arg_cf = np.concatenate([a.coeffs for a in args]) if args else np.zeros(0)
    arg_const = np.array([a.const for a in args], dtype=np.float64)

    src_in = np.where(is_in, src, 0)
    lens = np.where(is_in, arg_len[src_in] if args else 0, 1)
    rep = np.repeat(np.arange(src.shape[0]), lens)
    pos = np.arange(rep.shape[0]) - np.repeat(np.cumsum(lens) - lens, lens)
    e_in = is_in[rep]
    new_src = base + src[rep] - n_sub_inputs
    new_coef = coef[rep].copy()
    if np.any(e_in):
        gather = arg_start[src_in[rep][e_in]] + pos[e_in]
        new_src[e_in] = arg_ids[gather]
        new_coef[e_in] = new_coef[e_in] * arg_cf[gather]
    counts = np.bincount(row_of[rep], minlength=n_rows).astype(np.int64)
    const_add = np.zeros(n_rows)
    if np.any(is_in) and np.any(arg_const != 0.0):
        np.add.at(const_add, row_of[is_in], coef[is_in] * arg_const[src[is_in]])
    return counts, new_src, new_coef, const_add


class GraphBuilder:
    """Incrementally assembles a :class:`NetworkGraph`.

    Builder layers are 1-based (raw inputs sit at layer 0). A unit created by
    :meth:`relu` lands one layer above the deepest node it reads.
    """

    def __init__(self, input_dim: int):
        if input_dim < 1:
            raise ConstructionError("input_dim must be positive")
        self.input_dim = int(input_dim)
        self._node_layer = np.zeros(max(64, 2 * input_dim), dtype=np.int64)
        self._n_nodes = self.input_dim
        self._chunks: list[tuple] = []

    @property
    def n_units(self) -> int:
        return self._n_nodes - self.input_dim

    def input(self, i: int) -> Affine:
        if not 0 <= i < self.input_dim:
            raise ConstructionError(f"input {i} out of range")
        return Affine([i], [1.0])

    def inputs(self) -> list[Affine]:
        return [self.input(i) for i in range(self.input_dim)]

    def layer_of(self, expr: Affine) -> int:
        if len(expr) == 0:
            return 0
        if np.any(expr.ids < 0) or np.any(expr.ids >= self._n_nodes):
            raise ConstructionError("expression references an unknown node")
        return int(np.max(self._node_layer[expr.ids]))

    def _append(self, layers, bias, counts, src, coef) -> int:
        base = self._n_nodes
        n_new = layers.shape[0]
        need = base + n_new
        if need > self._node_layer.shape[0]:
            grown = np.zeros(max(need, 2 * self._node_layer.shape[0]), dtype=np.int64)
            grown[:base] = self._node_layer[:base]
            self._node_layer = grown
        self._node_layer[base:need] = layers
        self._n_nodes = need
        self._chunks.append((layers, bias, counts, src, coef))
        return base

    def relu(self, expr, layer: int | None = None) -> Affine:
        """Add the unit ``max(0, expr)`` and return it as an expression."""
        expr = _as_affine(expr)
        lowest = self.layer_of(expr) + 1
        if layer is None:
            layer = lowest
        elif layer < lowest:
            raise ConstructionError(f"unit cannot sit at layer {layer} below its inputs")
        base = self._append(
            np.array([layer], dtype=np.int64), np.array([expr.const]),
            np.array([len(expr)], dtype=np.int64), expr.ids.copy(), expr.coeffs.copy(),
        )
        return Affine([base], [1.0])

    def embed(self, net: NetworkGraph, args: Sequence, offset: int | None = None) -> list[Affine]:
        """Splice a copy of ``net`` whose inputs are the expressions ``args``.

        The copy's layer ``l`` (0-based) lands at builder layer ``offset + l + 1``;
        ``offset`` defaults to the deepest layer read by ``args``. Returns the
        copy's outputs as expressions.
        """
        args = [_as_affine(a) for a in args]
        if len(args) != net.input_dim:
            raise ConstructionError(f"network takes {net.input_dim} inputs, got {len(args)}")
        lowest = max((self.layer_of(a) for a in args), default=0)
        if offset is None:
            offset = lowest
        elif offset < lowest:
            raise ConstructionError("embedding offset below the layer of its arguments")
        base = self._n_nodes
        if net.size:
            counts, src, coef, const_add = _substitute(
                net._indptr, net._src, net._coef, net.input_dim, base, args)
            self._append(net._unit_layer + 1 + offset, net._bias + const_add, counts, src, coef)
        counts, src, coef, const_add = _substitute(
            net._out_indptr, net._out_src, net._out_coef, net.input_dim, base, args)
        ends = np.cumsum(counts)
        starts = ends - counts
        return [Affine(src[s:e], coef[s:e], net._out_bias[k] + const_add[k])
                for k, (s, e) in enumerate(zip(starts, ends))]

    def build(self, outputs: Iterable) -> NetworkGraph:
        """Freeze the builder into a network with the given output expressions."""
        outputs = [_as_affine(o) for o in outputs]
        if not outputs:
            raise ConstructionError("a network needs at least one output")
        for o in outputs:
            self.layer_of(o)
        d = self.input_dim
        if self._chunks:
            layers = np.concatenate([c[0] for c in self._chunks])
            bias = np.concatenate([c[1] for c in self._chunks]).astype(np.float64)
            counts = np.concatenate([c[2] for c in self._chunks])
            src = np.concatenate([c[3] for c in self._chunks]).astype(np.int64)
            coef = np.concatenate([c[4] for c in self._chunks]).astype(np.float64)
        else:
            layers = np.zeros(0, np.int64)
            bias = np.zeros(0)
            counts = np.zeros(0, np.int64)
            src = np.zeros(0, np.int64)
            coef = np.zeros(0)
        n_units = layers.shape[0]
        perm = np.argsort(layers, kind="stable")
        rank = np.empty(n_units, dtype=np.int64)
        rank[perm] = np.arange(n_units)
        remap = np.concatenate([np.arange(d), d + rank])

        indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        lens = counts[perm]
        starts = indptr[:-1][perm]
        gather = np.repeat(starts - (np.cumsum(lens) - lens), lens) + np.arange(int(lens.sum()))
        new_src = remap[src[gather]] if src.size else src
        new_coef = coef[gather]
        new_indptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        unit_layer = layers[perm] - 1

        out_counts = np.array([len(o) for o in outputs], dtype=np.int64)
        out_src = np.concatenate([o.ids for o in outputs]).astype(np.int64)
        out_src = remap[out_src] if out_src.size else out_src
        return NetworkGraph._from_arrays(
            d, unit_layer, bias[perm], new_indptr, new_src, new_coef,
            np.concatenate([[0], np.cumsum(out_counts)]).astype(np.int64),
            out_src, np.concatenate([o.coeffs for o in outputs]).astype(np.float64),
            np.array([o.const for o in outputs], dtype=np.float64),
        )


# -- combinators -----------------------------------------------------------


def identity_net(dim: int = 1) -> NetworkGraph:
    """``x = max(0, x) - max(0, -x)`` coordinate-wise: depth 1, size ``2*dim``."""
    b = GraphBuilder(dim)
    outs = [b.relu(x) - b.relu(-x) for x in b.inputs()]
    return b.build(outs)


def compose(outer: NetworkGraph, inner: NetworkGraph) -> NetworkGraph:
    """Network computing ``outer(inner(x))``; depths and sizes add."""
    if outer.input_dim != inner.n_outputs:
        raise ConstructionError(
            f"outer takes {outer.input_dim} inputs but inner has {inner.n_outputs} outputs")
    b = GraphBuilder(inner.input_dim)
    mid = b.embed(inner, b.inputs(), offset=0)
    return b.build(b.embed(outer, mid, offset=inner.depth))


def parallel(nets: Sequence[NetworkGraph]) -> NetworkGraph:
    """Stack networks side by side on shared inputs; outputs are concatenated."""
    if not nets:
        raise ConstructionError("parallel needs at least one network")
    d = nets[0].input_dim
    if any(n.input_dim != d for n in nets):
        raise ConstructionError("parallel networks must share input_dim")
    b = GraphBuilder(d)
    outs = []
    for net in nets:
        outs.extend(b.embed(net, b.inputs(), offset=0))
    return b.build(outs)


def linear_combine(nets: Sequence[NetworkGraph], coeffs: Sequence[float],
                   bias: float = 0.0) -> NetworkGraph:
    """Scalar network ``bias + sum(coeffs[i] * nets[i](x))``.

    The combination lives in the output functional, so no hidden units are
    added beyond those of the constituents.
    """
    if len(nets) != len(coeffs):
        raise ConstructionError("need one coefficient per network")
    if not nets:
        raise ConstructionError("linear_combine needs at least one network")
    d = nets[0].input_dim
    if any(n.input_dim != d for n in nets):
        raise ConstructionError("combined networks must share input_dim")
    if any(n.n_outputs != 1 for n in nets):
        raise ConstructionError("combined networks must be scalar-valued")
    b = GraphBuilder(d)
    total = Affine.constant(bias)
    for net, c in zip(nets, coeffs):
        total = total + float(c) * b.embed(net, b.inputs(), offset=0)[0]
    return b.build([total])


def precompose_affine(net: NetworkGraph, A, b=None) -> NetworkGraph:
    """Network computing ``net(A @ x + b)``; the map folds into first-layer weights."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    if A.shape[0] != net.input_dim:
        raise ConstructionError(f"A must have {net.input_dim} rows, got shape {A.shape}")
    shift = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=np.float64).reshape(-1)
    if shift.shape[0] != A.shape[0]:
        raise ConstructionError("b must match the rows of A")
    builder = GraphBuilder(A.shape[1])
    args = []
    for row, c in zip(A, shift):
        nz = np.flatnonzero(row)
        args.append(Affine(nz, row[nz], c))
    return builder.build(builder.embed(net, args, offset=0))


# -- serialization ---------------------------------------------------------


def _num(x: float) -> str:
    if not np.isfinite(x):
        raise ConstructionError("cannot serialize a non-finite value")
    return format(float(x), ".17g")


def _weights_json(net: NetworkGraph, indptr, src, coef, k) -> str:
    parts = []
    for s, c in zip(src[indptr[k]:indptr[k + 1]], coef[indptr[k]:indptr[k + 1]]):
        layer, unit = net._ref(int(s))
        parts.append(f'{{"layer": {layer}, "unit": {unit}, "coeff": {_num(c)}}}')
    return "[" + ", ".join(parts) + "]"


def to_json(net: NetworkGraph) -> str:
    """Serialize to the JSON network document (17 significant digits)."""
    layer_docs = []
    for li in range(net.depth):
        units = [
            f'{{"weights": {_weights_json(net, net._indptr, net._src, net._coef, u)}, '
            f'"bias": {_num(net._bias[u])}}}'
            for u in range(net._layer_start[li], net._layer_start[li + 1])
        ]
        layer_docs.append("  [\n    " + ",\n    ".join(units) + "\n  ]")
    outs = [
        f'{{"weights": {_weights_json(net, net._out_indptr, net._out_src, net._out_coef, k)}, '
        f'"bias": {_num(net._out_bias[k])}}}'
        for k in range(net.n_outputs)
    ]
    output = outs[0] if len(outs) == 1 else "[\n  " + ",\n  ".join(outs) + "\n]"
    layers = "[\n" + ",\n".join(layer_docs) + "\n]" if layer_docs else "[]"
    return f'{{\n"input_dim": {net.input_dim},\n"layers": {layers},\n"output": {output}\n}}\n'


def _spec_weights(items) -> tuple:
    return tuple(((int(w["layer"]), int(w["unit"])), float(w["coeff"])) for w in items)


def from_dict(doc: dict) -> NetworkGraph:
    layers = [
        Layer(tuple(Unit(_spec_weights(u["weights"]), float(u.get("bias", 0.0))) for u in units))
        for units in doc["layers"]
    ]
    out = doc["output"]
    if isinstance(out, dict):
        out = [out]
    outputs = [OutputSpec(_spec_weights(o["weights"]), float(o.get("bias", 0.0))) for o in out]
    return NetworkGraph(int(doc["input_dim"]), layers, outputs)


def from_json(text: str) -> NetworkGraph:
    return from_dict(json.loads(text))


def save(net: NetworkGraph, path) -> None:
    Path(path).write_text(to_json(net))


def load(path) -> NetworkGraph:
    return from_json(Path(path).read_text())
