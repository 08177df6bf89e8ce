import csv
import io
import json
import math

import numpy as np
import pytest

from deeprelu.bandlimited_nets import lebesgue
from deeprelu.errors import FeasibilityError, ParameterError
from deeprelu.harness import (
    CSV_COLUMNS, SweepSpec, fit_scaling, l2_mu_error, linf_error, report_for, row_seeds, run_sweep,
    summarize, sweep_json, uniform_grid, write_csv,
)
from deeprelu.product_nets import build_mul2
from deeprelu.relu_ir import GraphBuilder, from_json, identity_net, to_json


def constant_net(d, c):
    b = GraphBuilder(d)
    return b.build([b.input(0) * 0.0 + c])


class TestLinf:
    def test_identity_zero(self):
        err, arg = linf_error(identity_net(), lambda x: x[:, 0], [(-1, 1)], 101)
        assert err == 0.0 and -1 <= arg[0] <= 1

    def test_mul2_grid(self):
        net = build_mul2(M=1, N=1, eps=1e-3)
        err, arg = linf_error(net, lambda x: x[:, 0] * x[:, 1], [(-1, 1), (-1, 1)], 401)
        assert 0 < err <= 1e-3
        assert all(-1 <= a <= 1 for a in arg)

    def test_argmax_is_the_max(self):
        err, arg = linf_error(identity_net(), lambda x: x[:, 0] ** 2, [(0, 2)], 201)
        assert arg == (2.0,) and err == pytest.approx(2.0)

    def test_grid_includes_endpoints(self):
        g = uniform_grid([(-1, 1), (0, 3)], 3)
        assert g.shape == (9, 2) and g.min(0).tolist() == [-1, 0] and g.max(0).tolist() == [1, 3]

    def test_infeasible(self):
        with pytest.raises(FeasibilityError):
            linf_error(identity_net(4), lambda x: x, [(0, 1)] * 4, 60)

    def test_bad_args(self):
        with pytest.raises(ParameterError):
            linf_error(identity_net(), lambda x: x[:, 0], [(0, 1)], 1)
        with pytest.raises(ParameterError):
            linf_error(identity_net(), lambda x: x[:, 0], [(0, 1), (0, 1)], 10)


class TestL2:
    def test_exact_zero(self):
        est, se = l2_mu_error(identity_net(2), lambda x: x, lebesgue(2), 500, seed=1)
        assert (est, se) == (0.0, 0.0)

    @pytest.mark.parametrize("d", [1, 3])
    def test_constant_gap(self, d):
        est, se = l2_mu_error(constant_net(d, 0.25), lambda x: np.zeros(x.shape[0]), lebesgue(d), 1000, 0)
        assert est == pytest.approx(0.25, abs=max(se, 1e-15))

    def test_mass_scaling(self):
        mu = lebesgue(1, [0.0], [4.0])
        est, _ = l2_mu_error(constant_net(1, 0.5), lambda x: np.zeros(x.shape[0]), mu, 1000, 0)
        assert est == pytest.approx(0.5 * math.sqrt(4.0))

    def test_stderr_rate(self):
        net = identity_net()
        oracle = lambda x: x[:, 0] ** 2  # noqa: E731
        ns = np.array([1_000, 10_000, 100_000])
        ses = [l2_mu_error(net, oracle, lebesgue(1), int(n), seed=3)[1] for n in ns]
        slope = np.polyfit(np.log(ns), np.log(ses), 1)[0]
        assert slope == pytest.approx(-0.5, abs=0.05)

    def test_deterministic(self):
        args = (identity_net(), lambda x: np.sin(x[:, 0]), lebesgue(1), 400)
        assert l2_mu_error(*args, seed=4) == l2_mu_error(*args, seed=4)

    def test_min_samples(self):
        with pytest.raises(ParameterError):
            l2_mu_error(identity_net(), lambda x: x[:, 0], lebesgue(1), 99, 0)


class TestReport:
    def test_matches_serialized_network(self):
        net = build_mul2(M=1, N=1, eps=1e-2)
        back = from_json(to_json(net))
        rep = report_for(net, "mul2", {"eps": 1e-2})
        assert (rep.depth, rep.size) == (back.depth, back.size)

    def test_csv_layout(self):
        rep = report_for(identity_net(), "id", {"b": 2, "a": [1, 2]}, linf_error=0.1, linf_argmax=(0.5,))
        rows = list(csv.reader(io.StringIO(write_csv([rep]))))
        assert rows[0] == CSV_COLUMNS
        assert rows[1][CSV_COLUMNS.index("params")] == "a=1|2;b=2"
        assert rows[1][CSV_COLUMNS.index("rng")] == "PCG64"
        assert "wall_time" in write_csv([rep], timing=True).splitlines()[0]


class TestSweep:
    def test_needs_three_values(self):
        with pytest.raises(ParameterError):
            SweepSpec("mul2", "eps", [0.1, 0.01])
        with pytest.raises(ParameterError):
            SweepSpec("nope", "eps", [0.1, 0.01, 0.001])

    def test_chebyshev_size_increasing(self):
        reports, summary = run_sweep(SweepSpec("cheb", "n", [4, 8, 16, 32], {"eps": 1e-3}, grid=401))
        sizes = [r.size for r in reports]
        assert sizes == sorted(set(sizes))
        assert summary["fits"]["size"]["coeffs"][2] > 0

    def test_mul2_regression(self):
        reports, summary = run_sweep(SweepSpec("mul2", "eps", [10.0 ** -k for k in range(1, 7)], grid=201))
        assert summary["fits"]["size"]["r2"] >= 0.99
        assert all(r.linf_error <= r.eps for r in reports)
        assert summary["rows_within_eps"] == len(reports)

    def test_failed_row_does_not_abort(self):
        reports, summary = run_sweep(SweepSpec("mul2", "eps", [0.1, 2.0, 0.01, 0.001], grid=101))
        assert [r.status == "ok" for r in reports] == [True, False, True, True]
        assert reports[1].status.startswith("error: ")
        assert summary["failed_rows"] == 1

    def test_row_seeds_independent(self):
        assert row_seeds(0, 0) != row_seeds(0, 1) != row_seeds(1, 0)
        assert row_seeds(5, 2) == row_seeds(5, 2)

    def test_json_and_csv_deterministic(self):
        spec = SweepSpec("poly", "n", [2, 3, 4], {"eps": 1e-2}, seeds=[0, 1], grid=201)
        a, sa = run_sweep(spec)
        b, sb = run_sweep(spec)
        assert write_csv(a) == write_csv(b)
        assert sweep_json(a, sa) == sweep_json(b, sb)
        assert json.loads(sweep_json(a, sa))["summary"]["rows"] == 6

    def test_from_dict(self):
        spec = SweepSpec.from_dict({"construction": "muld", "vary": "d", "values": [2, 3, 4],
                                    "fixed": {"eps": 0.01}, "seeds": [3]})
        assert spec.fixed == {"eps": 0.01} and spec.seeds == [3]


class TestFit:
    def test_exact_models(self):
        x = np.array([1e-1, 1e-2, 1e-3, 1e-4])
        fit = fit_scaling("eps", x, 3 + 2 * np.log2(1 / x))
        np.testing.assert_allclose(fit["coeffs"], [3, 2], atol=1e-10)
        assert fit["r2"] == pytest.approx(1.0)
        n = np.array([4.0, 8, 16, 32])
        fit = fit_scaling("n", n, 1 + 2 * n + 0.5 * n ** 2)
        np.testing.assert_allclose(fit["coeffs"], [1, 2, 0.5], atol=1e-8)
        fit = fit_scaling("n_terms", n, 3 * n ** -0.5)
        assert fit["coeffs"][1] == pytest.approx(-0.5)

    def test_summary_with_failures_only(self):
        spec = SweepSpec("mul2", "eps", [2.0, 3.0, 4.0])
        reports, summary = run_sweep(spec)
        assert summary["fits"] == {} and summary == summarize(spec, reports)
